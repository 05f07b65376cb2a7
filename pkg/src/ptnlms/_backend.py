"""Kernel selection: compiled extension if importable, numpy otherwise.

Set ``PTNLMS_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _fallback

if os.environ.get("PTNLMS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _fallback

BACKEND = "python" if _impl is _fallback else "cython"
run_batch = _impl.run_batch
jacobi_eigenvalues = _impl.jacobi_eigenvalues
