"""Independent reference computations used only by the tests."""
import numpy as np

from ptnlms.filters import FilterState, StepInput, step
from ptnlms.signals import desired, regressor


def count_below(M, lam):
    """Number of eigenvalues of symmetric ``M`` below ``lam`` (Sylvester inertia).

    Counts negative pivots of unpivoted Gaussian elimination on ``M - lam*I``.
    """
    A = np.array(M, dtype=np.float64) - lam * np.eye(len(M))
    n = len(A)
    neg = 0
    for k in range(n):
        piv = A[k, k]
        if piv == 0.0:
            piv = 1e-300
        if piv < 0:
            neg += 1
        if k + 1 < n:
            A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k], A[k, k + 1:]) / piv
    return neg


def bisect_extremes(M, tol=1e-13):
    """``(lambda_min, lambda_max)`` by bisection on the inertia count."""
    M = np.asarray(M, dtype=np.float64)
    n = len(M)
    radius = np.sum(np.abs(M), axis=1) - np.abs(np.diag(M))
    lo0 = float(np.min(np.diag(M) - radius)) - 1.0
    hi0 = float(np.max(np.diag(M) + radius)) + 1.0

    def find(target):
        # smallest lam with count_below(lam) >= target
        lo, hi = lo0, hi0
        while hi - lo > tol * max(1.0, abs(hi)):
            mid = 0.5 * (lo + hi)
            if count_below(M, mid) >= target:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    return find(1), find(n)


def step_loop(system, init, rule, mu, delta, u, noise):
    """Sample-by-sample reference run through the public ``step``."""
    n = init.size
    state = FilterState(np.array(init, dtype=np.float64))
    sq, ws = [], [state.w]
    for k in range(len(u)):
        x = regressor(u, k, n)
        d = desired(system, x, k, noise[k])
        state, e, _ = step(state, StepInput(x, d, mu, delta), rule)
        sq.append(e * e)
        ws.append(state.w)
    return np.array(sq), np.array(ws)


def naive_first_crossing(c, level):
    for k, v in enumerate(c):
        if v <= level:
            return k
    return None
