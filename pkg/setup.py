"""Build script for the optional compiled kernels.

The package is usable without a C compiler; ``ptnlms._backend`` falls back
to the numpy implementation when ``ptnlms._kernels`` is not importable.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "ptnlms._kernels",
                ["src/ptnlms/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
