# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: the batched trial recursion and cyclic Jacobi sweeps.

Signatures and semantics mirror ``ptnlms._fallback`` exactly.
"""
from libc.math cimport exp, fabs, sqrt, isfinite

import numpy as np

cdef enum:
    IDENTITY = 0
    PNLMS = 1
    IPNLMS = 2
    PROPORTIONAL = 3
    FIXED = 4

cdef enum:
    OK = 0
    NONFINITE = 1
    DEGENERATE = 2


cdef int _gain(int code, double[::1] w, double[::1] g, double p1, double p2,
               const double[::1] fixed) noexcept nogil:
    cdef Py_ssize_t i, n = w.shape[0]
    cdef double mx, floor, s, a, base, denom, l1
    if code == IDENTITY:
        for i in range(n):
            g[i] = 1.0
    elif code == PNLMS:
        mx = p1
        for i in range(n):
            if fabs(w[i]) > mx:
                mx = fabs(w[i])
        floor = p2 * mx
        s = 0.0
        for i in range(n):
            g[i] = fabs(w[i]) if fabs(w[i]) > floor else floor
            s += fabs(g[i])
        for i in range(n):
            g[i] = g[i] / s
    elif code == IPNLMS:
        a = p1
        base = (1.0 - a) / (2.0 * n)
        if a == -1.0:
            for i in range(n):
                g[i] = base
        else:
            l1 = 0.0
            for i in range(n):
                l1 += fabs(w[i])
            denom = 2.0 * l1 + p2
            if denom == 0.0:
                return DEGENERATE
            for i in range(n):
                g[i] = base + (1.0 + a) * fabs(w[i]) / denom
    elif code == PROPORTIONAL:
        l1 = 0.0
        for i in range(n):
            l1 += fabs(w[i])
        if not l1 > 0.0:
            return DEGENERATE
        for i in range(n):
            g[i] = fabs(w[i]) / l1
    else:
        for i in range(n):
            g[i] = fixed[i]
    return OK


def run_batch(const double[:, ::1] u, const double[:, ::1] noise,
              const double[::1] w_a, const double[::1] w_b, Py_ssize_t switch_at,
              const double[::1] init, double mu, double delta,
              int code, double p1, double p2, double kappa, double beta,
              const double[::1] fixed_gain, bint track):
    cdef Py_ssize_t T = u.shape[0], H = u.shape[1], n = init.shape[0]
    cdef Py_ssize_t t, k, i
    cdef int st
    cdef double y, d, e, denom, mue, kb = kappa * beta, sgn
    cdef const double* wo
    cdef const double* pa = &w_a[0]
    cdef const double* pb = &w_b[0]

    sq = np.full((T, H), np.nan)
    w_final = np.empty((T, n))
    status = np.zeros(T, dtype=np.int8)
    w_sum = np.zeros((H + 1 if track else 0, n))
    cdef double[:, ::1] sq_v = sq
    cdef double[:, ::1] wf_v = w_final
    cdef double[:, ::1] ws_v = w_sum
    cdef signed char[::1] st_v = status
    cdef double[::1] w = np.empty(n)
    cdef double[::1] g = np.empty(n)
    cdef double[::1] x = np.empty(n)

    with nogil:
        for t in range(T):
            for i in range(n):
                w[i] = init[i]
                x[i] = 0.0
            if track:
                for i in range(n):
                    ws_v[0, i] += w[i]
            st = OK
            for k in range(H):
                for i in range(n - 1, 0, -1):
                    x[i] = x[i - 1]
                x[0] = u[t, k]
                wo = pa if k < switch_at else pb
                y = 0.0
                d = 0.0
                for i in range(n):
                    y += w[i] * x[i]
                    d += wo[i] * x[i]
                d = d + noise[t, k]
                e = d - y
                st = _gain(code, w, g, p1, p2, fixed_gain)
                if st != OK:
                    break
                sq_v[t, k] = e * e
                denom = 0.0
                for i in range(n):
                    denom += (g[i] * x[i]) * x[i]
                denom = denom + delta
                if denom > 0.0:
                    mue = mu * e
                    for i in range(n):
                        w[i] = w[i] + mue * (g[i] * x[i]) / denom
                if kb != 0.0:
                    for i in range(n):
                        sgn = 1.0 if w[i] > 0.0 else (-1.0 if w[i] < 0.0 else 0.0)
                        w[i] = w[i] - kb * sgn * exp(-beta * fabs(w[i]))
                for i in range(n):
                    if not isfinite(w[i]):
                        st = NONFINITE
                if st != OK:
                    break
                if track:
                    for i in range(n):
                        ws_v[k + 1, i] += w[i]
            st_v[t] = st
            for i in range(n):
                wf_v[t, i] = w[i]
    return sq, w_final, w_sum, status


def jacobi_eigenvalues(double[:, ::1] a, double tol, int max_sweeps):
    """Cyclic Jacobi on ``a`` in place; returns ``(diag, sweeps)``."""
    cdef Py_ssize_t n = a.shape[0], p, q, k
    cdef double norm = 0.0, off, theta, t, c, s, akp, akq
    cdef int sweep = 0
    for p in range(n):
        for q in range(n):
            norm += a[p, q] * a[p, q]
    norm = sqrt(norm)
    with nogil:
        while True:
            off = 0.0
            for p in range(n):
                for q in range(n):
                    if p != q:
                        off += a[p, q] * a[p, q]
            if sqrt(off) < tol * norm or sweep >= max_sweeps:
                break
            sweep += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    if a[p, q] == 0.0:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                    t = 1.0 / (fabs(theta) + sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[k, q] = s * akp + c * akq
                    for k in range(n):
                        akp = a[p, k]
                        akq = a[q, k]
                        a[p, k] = c * akp - s * akq
                        a[q, k] = s * akp + c * akq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
    return np.array([a[k, k] for k in range(n)]), sweep
