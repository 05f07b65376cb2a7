"""Conditioning of the MSE surface seen by a proportionate filter.

With the gain frozen at its value on the true system, ``G_o``, the
proportionate recursion is plain NLMS on the transformed variables
``w' = G_o^{-1/2} w`` and ``x' = G_o^{1/2} x``.  The transformed surface has
Hessian ``R' = G_o^{1/2} R G_o^{1/2}``, so ``kappa(R') <= kappa(G_o) kappa(R)``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _backend
from .filters import Identity

__all__ = [
    "SurfaceSpec",
    "EigExtremes",
    "BoundCheck",
    "ContourGrid",
    "optimal_gain",
    "transform",
    "inverse_transform",
    "transformed_correlation",
    "mse",
    "mse_transformed",
    "eig_sym",
    "cond",
    "cond_gain",
    "bound_check",
    "contour_grid",
    "write_grid_csv",
    "read_grid_csv",
]

SYM_TOL = 1e-12
JACOBI_TOL = 1e-12


def optimal_gain(w_o, rule):
    """The rule's gain evaluated on the true system (the frozen ``G_o`` diagonal)."""
    w_o = np.asarray(w_o, dtype=np.float64)
    return np.array(rule.gain(w_o), dtype=np.float64)


def _check_gain(g_o):
    g_o = np.asarray(g_o, dtype=np.float64)
    if np.any(~(g_o > 0)):
        raise ValueError("g_o must be strictly positive")
    return g_o


def transform(w, x, g_o):
    """Map ``(w, x)`` to ``(G_o^{-1/2} w, G_o^{1/2} x)``; inner products are kept."""
    s = np.sqrt(_check_gain(g_o))
    return np.asarray(w, dtype=np.float64) / s, s * np.asarray(x, dtype=np.float64)


def inverse_transform(w_prime, x_prime, g_o):
    s = np.sqrt(_check_gain(g_o))
    return s * np.asarray(w_prime, dtype=np.float64), np.asarray(x_prime, dtype=np.float64) / s


def transformed_correlation(R, g_o):
    """``R' = G_o^{1/2} R G_o^{1/2}``, formed so that it is exactly symmetric."""
    s = np.sqrt(_check_gain(g_o))
    return np.outer(s, s) * np.asarray(R, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class SurfaceSpec:
    """Quadratic MSE surface of the identification model ``d = w_o^T x + n``.

    For independent zero-mean noise the Wiener solution is ``w_o`` itself, so
    ``xi_min = sigma_n2`` and ``p' = G_o^{1/2} R w_o``.
    """

    R: np.ndarray
    g_o: np.ndarray
    w_o: np.ndarray
    sigma_n2: float = 1e-2

    def __post_init__(self):
        R = np.asarray(self.R, dtype=np.float64)
        g_o = _check_gain(self.g_o)
        w_o = np.asarray(self.w_o, dtype=np.float64)
        n = w_o.size
        if R.shape != (n, n) or g_o.shape != (n,):
            raise ValueError("R, g_o and w_o dimensions disagree")
        _check_symmetric(R)
        if self.sigma_n2 < 0:
            raise ValueError("sigma_n2 must be nonnegative")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "g_o", g_o)
        object.__setattr__(self, "w_o", w_o)

    @classmethod
    def white(cls, w_o, rule=None, variance=1.0, sigma_n2=1e-2):
        """Surface for white input of the given variance (``R = variance * I``)."""
        w_o = np.asarray(w_o, dtype=np.float64)
        g_o = optimal_gain(w_o, rule if rule is not None else Identity())
        return cls(variance * np.eye(w_o.size), g_o, w_o, sigma_n2)

    @property
    def n_taps(self):
        return self.w_o.size

    @property
    def r_prime(self):
        return transformed_correlation(self.R, self.g_o)

    @property
    def w_o_prime(self):
        return self.w_o / np.sqrt(self.g_o)

    @property
    def p_prime(self):
        return np.sqrt(self.g_o) * (self.R @ self.w_o)

    @property
    def xi_min(self):
        return self.sigma_n2

    @property
    def sigma_d2(self):
        return float(self.w_o @ self.R @ self.w_o) + self.sigma_n2


def mse(spec, w):
    """``xi_min + dw^T R dw`` in the original coordinates."""
    dw = np.asarray(w, dtype=np.float64) - spec.w_o
    if dw.shape != spec.w_o.shape:
        raise ValueError("weight vector has the wrong length")
    return spec.xi_min + float(dw @ spec.R @ dw)


def mse_transformed(spec, w_prime):
    """``xi_min + dw'^T R' dw'`` in the transformed coordinates."""
    dw = np.asarray(w_prime, dtype=np.float64) - spec.w_o_prime
    if dw.shape != spec.w_o.shape:
        raise ValueError("weight vector has the wrong length")
    return spec.xi_min + float(dw @ spec.r_prime @ dw)


def _check_symmetric(M):
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    scale = np.max(np.abs(M), initial=0.0)
    if np.max(np.abs(M - M.T), initial=0.0) > SYM_TOL * scale:
        raise ValueError("matrix is not symmetric")
    return M


class EigExtremes(NamedTuple):
    lam_min: float
    lam_max: float
    positive_definite: bool


def eig_sym(M):
    """Extremal eigenvalues of a symmetric matrix.

    Closed form for 1x1 and 2x2; cyclic Jacobi rotations otherwise, stopping
    once the off-diagonal Frobenius mass drops below ``1e-12 * ||M||_F``.
    """
    M = _check_symmetric(M)
    n = M.shape[0]
    if n == 1:
        lo = hi = float(M[0, 0])
    elif n == 2:
        a, b, d = M[0, 0], M[0, 1], M[1, 1]
        mid = 0.5 * (a + d)
        rad = np.hypot(0.5 * (a - d), b)
        lo, hi = mid - rad, mid + rad
        if lo > 0:
            # avoid cancellation in the small root: lo * hi = det
            lo = (a * d - b * b) / hi
    else:
        diag, _ = _backend.jacobi_eigenvalues(np.array(M, order="C"), JACOBI_TOL, 100)
        lo, hi = float(diag.min()), float(diag.max())
    return EigExtremes(float(lo), float(hi), lo > 0)


def cond(M):
    """Condition number ``lambda_max / lambda_min`` of a symmetric PD matrix."""
    ext = eig_sym(M)
    if not ext.positive_definite:
        raise ValueError(f"matrix is not positive definite (lambda_min = {ext.lam_min})")
    return ext.lam_max / ext.lam_min


def cond_gain(w_o):
    """``max|w_o| / min|w_o|``; ``inf`` when some entry is zero."""
    a = np.abs(np.asarray(w_o, dtype=np.float64))
    lo = a.min()
    if lo == 0.0:
        return float("inf")
    return float(a.max() / lo)


class BoundCheck(NamedTuple):
    kappa_r_prime: float
    kappa_g: float
    kappa_r: float
    holds: bool


def bound_check(R, g_o, rtol=1e-9):
    """Check ``kappa(R') <= kappa(G_o) * kappa(R)``."""
    g_o = _check_gain(g_o)
    kr = cond(R)
    kg = float(g_o.max() / g_o.min())
    krp = cond(transformed_correlation(R, g_o))
    return BoundCheck(krp, kg, kr, krp <= kg * kr * (1.0 + rtol))


@dataclass(frozen=True, eq=False)
class ContourGrid:
    """MSE sampled over the transformed 2-D weight plane.

    ``xi[i, j]`` is the MSE at ``(w0[i], w1[j])``.
    """

    w0: np.ndarray
    w1: np.ndarray
    xi: np.ndarray

    @property
    def samples(self):
        return self.w0.size, self.w1.size

    @property
    def ranges(self):
        return (self.w0[0], self.w0[-1]), (self.w1[0], self.w1[-1])

    def argmin(self):
        i, j = np.unravel_index(np.argmin(self.xi), self.xi.shape)
        return self.w0[i], self.w1[j]


def contour_grid(spec, ranges=None, samples=(101, 101)):
    """Evaluate the transformed-domain surface on a Cartesian grid.

    ``ranges`` defaults to a box of half-width 1 around ``w_o'``.
    """
    if spec.n_taps != 2:
        raise ValueError("contour grids are only defined for two-tap systems")
    if ranges is None:
        c = spec.w_o_prime
        ranges = ((c[0] - 1.0, c[0] + 1.0), (c[1] - 1.0, c[1] + 1.0))
    (a0, b0), (a1, b1) = ranges
    n0, n1 = samples
    if n0 < 2 or n1 < 2:
        raise ValueError("need at least two samples per axis")
    w0 = np.linspace(a0, b0, n0)
    w1 = np.linspace(a1, b1, n1)
    d0 = w0[:, None] - spec.w_o_prime[0]
    d1 = w1[None, :] - spec.w_o_prime[1]
    Rp = spec.r_prime
    xi = spec.xi_min + Rp[0, 0] * d0 * d0 + 2.0 * Rp[0, 1] * d0 * d1 + Rp[1, 1] * d1 * d1
    return ContourGrid(w0, w1, xi)


def write_grid_csv(grid, fh):
    """Write ``grid`` as CSV: ``#`` metadata lines, a header, then ``w0,w1,xi`` rows."""
    (a0, b0), (a1, b1) = (map(float, r) for r in grid.ranges)
    n0, n1 = grid.samples
    fh.write(f"# domain=transformed w0_range={a0!r}:{b0!r} n0={n0} "
             f"w1_range={a1!r}:{b1!r} n1={n1}\n")
    fh.write("w0,w1,xi\n")
    for i, x0 in enumerate(grid.w0):
        for j, x1 in enumerate(grid.w1):
            fh.write(f"{x0:.17g},{x1:.17g},{grid.xi[i, j]:.17g}\n")


def read_grid_csv(fh):
    if isinstance(fh, str):
        fh = io.StringIO(fh)
    meta = {}
    lines = []
    for line in fh:
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                meta[key] = val
        else:
            lines.append(line)
    rows = list(csv.reader(lines))
    if rows[0] != ["w0", "w1", "xi"]:
        raise ValueError("not a contour grid CSV")
    n0, n1 = int(meta["n0"]), int(meta["n1"])
    data = np.array(rows[1:], dtype=np.float64)
    if data.shape != (n0 * n1, 3):
        raise ValueError("grid CSV is truncated")
    w0 = data[::n1, 0]
    w1 = data[:n1, 1]
    return ContourGrid(w0, w1, data[:, 2].reshape(n0, n1))
