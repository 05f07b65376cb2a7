"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--trials 50] [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from ptnlms import _fallback, scenarios
from ptnlms.harness import _encode
from ptnlms.signals import trial_streams

try:
    from ptnlms import _kernels
except ImportError:
    _kernels = None


def batch_args(scn, rule, mu, trials):
    pairs = [trial_streams(scn.input, scn.noise_var, scn.horizon, t) for t in range(trials)]
    u = np.array([p[0] for p in pairs])
    noise = np.array([p[1] for p in pairs])
    code, p1, p2, kappa, beta, fixed = _encode(rule)
    n = scn.system.n_taps
    sysm = scn.system
    if hasattr(sysm, "switch_at"):
        w_a, w_b, sw = sysm.w_a, sysm.w_b, sysm.switch_at
    else:
        w_a = w_b = sysm.w_o
        sw = scn.horizon + 1
    return (u, noise, w_a, w_b, sw, scn.init, mu, scn.delta, code, p1, p2, kappa, beta,
            np.ones(n) if fixed is None else fixed, False)


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled extension not available; build with pip install -e .")

    print(f"{'case':<28}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for scn_name in ("fig2a", "fig2c"):
        scn = scenarios.get(scn_name, trials=args.trials)
        for algo, rule in scenarios.algorithms().items():
            a = batch_args(scn, rule, scn.step_sizes[algo], args.trials)
            tp = best(lambda: _fallback.run_batch(*a), args.repeat)
            tc = best(lambda: _kernels.run_batch(*a), args.repeat)
            print(f"{scn_name + '/' + algo:<28}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.1f}")

    rng = np.random.default_rng(0)
    for n in (16, 64):
        A = rng.standard_normal((n, n))
        M = A @ A.T + np.eye(n)
        tp = best(lambda: _fallback.jacobi_eigenvalues(M.copy(), 1e-12, 100), args.repeat)
        tc = best(lambda: _kernels.jacobi_eigenvalues(M.copy(), 1e-12, 100), args.repeat)
        print(f"{'jacobi n=' + str(n):<28}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.1f}")


if __name__ == "__main__":
    main()
