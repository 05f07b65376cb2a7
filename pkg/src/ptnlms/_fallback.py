"""Pure numpy versions of the compiled kernels.

``run_batch`` vectorizes over trials instead of looping over them, so it is
reasonably quick even without the extension.
"""
import numpy as np

IDENTITY, PNLMS, IPNLMS, PROPORTIONAL, FIXED = range(5)
OK, NONFINITE, DEGENERATE = range(3)


def _gain(code, W, p1, p2, fixed):
    """Row-wise gains for a (trials, taps) weight matrix; also returns bad rows."""
    T, n = W.shape
    bad = np.zeros(T, dtype=bool)
    if code == IDENTITY:
        return np.ones_like(W), bad
    if code == FIXED:
        return np.broadcast_to(fixed, W.shape), bad
    absw = np.abs(W)
    if code == PNLMS:
        floor = p2 * np.maximum(p1, absw.max(axis=1))
        gamma = np.maximum(absw, floor[:, None])
        return gamma / np.abs(gamma).sum(axis=1)[:, None], bad
    if code == IPNLMS:
        base = (1.0 - p1) / (2.0 * n)
        if p1 == -1.0:
            return np.full_like(W, base), bad
        denom = 2.0 * absw.sum(axis=1) + p2
        bad = denom == 0.0
        denom = np.where(bad, 1.0, denom)
        return base + (1.0 + p1) * absw / denom[:, None], bad
    if code == PROPORTIONAL:
        l1 = absw.sum(axis=1)
        bad = ~(l1 > 0.0)
        l1 = np.where(bad, 1.0, l1)
        return absw / l1[:, None], bad
    raise ValueError(f"unknown gain code {code}")


def run_batch(u, noise, w_a, w_b, switch_at, init, mu, delta,
              code, p1, p2, kappa, beta, fixed_gain, track):
    """Run ``T`` independent trials of one algorithm.

    Returns ``(sq_err, w_final, w_sum, status)``: per-trial squared errors
    (NaN after a failure), final weights, the sum over trials of ``w(k)`` for
    ``k = 0..H`` (empty unless ``track``), and a per-trial status code.
    """
    u = np.asarray(u, dtype=np.float64)
    T, H = u.shape
    init = np.asarray(init, dtype=np.float64)
    n = init.size
    up = np.concatenate([np.zeros((T, n - 1)), u], axis=1)
    W = np.tile(init, (T, 1))
    status = np.zeros(T, dtype=np.int8)
    alive = np.ones(T, dtype=bool)
    sq = np.full((T, H), np.nan)
    w_sum = np.zeros((H + 1 if track else 0, n))
    if track:
        w_sum[0] = W.sum(axis=0)
    kb = kappa * beta

    with np.errstate(invalid="ignore", over="ignore"):
        for k in range(H):
            X = up[:, k : k + n][:, ::-1]
            wo = w_a if k < switch_at else w_b
            y = np.einsum("ti,ti->t", W, X)
            d = X @ wo + noise[:, k]
            e = d - y
            G, bad = _gain(code, W, p1, p2, fixed_gain)
            if bad.any():
                status[alive & bad] = DEGENERATE
                alive &= ~bad
            sq[alive, k] = (e * e)[alive]
            GX = G * X
            denom = np.einsum("ti,ti->t", GX, X) + delta
            pos = denom > 0.0
            step = (mu * e)[:, None] * GX / np.where(pos, denom, 1.0)[:, None]
            W_new = np.where(pos[:, None], W + step, W)
            if kb != 0.0:
                W_new = W_new - kb * np.sign(W_new) * np.exp(-beta * np.abs(W_new))
            fin = np.isfinite(W_new).all(axis=1)
            status[alive & ~fin] = NONFINITE
            alive &= fin
            W = np.where(alive[:, None], W_new, W)
            if track:
                w_sum[k + 1] = W.sum(axis=0)
    return sq, W, w_sum, status


def jacobi_eigenvalues(a, tol, max_sweeps):
    """Cyclic Jacobi on ``a`` in place; returns ``(diag, sweeps)``."""
    n = a.shape[0]
    norm = np.sqrt(np.sum(a * a))
    offdiag = ~np.eye(n, dtype=bool)
    sweep = 0
    while True:
        off = np.sqrt(np.sum(a[offdiag] ** 2))
        if off < tol * norm or sweep >= max_sweeps:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(1.0 + theta * theta))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                cp, cq = a[:, p].copy(), a[:, q]
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :]
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    return np.diag(a).copy(), sweep
