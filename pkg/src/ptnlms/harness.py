"""Monte-Carlo learning curves for algorithm comparison.

Every algorithm in a run sees the same per-trial input and noise realizations
(trial ``t`` is seeded with ``base_seed + t``), so curve differences come from
the algorithms, not from the draws.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import _backend
from .filters import FixedGain, Identity, Ipnlms, Pnlms, PureProportional, ZeroAttractor
from .signals import BPSK, WGN, Static, Switching, trial_streams

__all__ = [
    "DivergenceError",
    "Scenario",
    "TrialResult",
    "LearningCurve",
    "run_trial",
    "run_monte_carlo",
    "steady_state_mse",
    "time_to_threshold",
    "db",
    "from_db",
    "write_curves_csv",
    "read_curves_csv",
    "rule_to_dict",
    "rule_from_dict",
    "scenario_to_dict",
    "scenario_from_dict",
]

_STATUS = {1: "nonfinite weights", 2: "degenerate gain"}


class DivergenceError(RuntimeError):
    """One or more trials produced nonfinite weights or an undefined gain."""

    def __init__(self, failures):
        self.failures = failures
        lines = [f"{algo}: trial seed {seed} ({why})" for algo, seed, why in failures[:10]]
        if len(failures) > 10:
            lines.append(f"... and {len(failures) - 10} more")
        super().__init__("diverged trials:\n  " + "\n  ".join(lines))


@dataclass(eq=False)
class Scenario:
    system: Static | Switching
    input: WGN | BPSK = field(default_factory=WGN)
    noise_var: float = 1e-2
    horizon: int = 1000
    trials: int = 1000
    init: np.ndarray | None = None
    step_sizes: dict = field(default_factory=dict)
    delta: float = 1e-12
    name: str = "custom"

    def __post_init__(self):
        n = self.system.n_taps
        self.init = np.zeros(n) if self.init is None else np.asarray(self.init, dtype=np.float64)
        if self.init.shape != (n,):
            raise ValueError(f"init has length {self.init.size}, system has {n} taps")
        if self.horizon < 0 or self.trials < 1:
            raise ValueError("need horizon >= 0 and trials >= 1")
        if self.noise_var < 0 or self.delta < 0:
            raise ValueError("noise_var and delta must be nonnegative")
        for algo, mu in self.step_sizes.items():
            if not 0.0 < mu <= 1.0:
                raise ValueError(f"step size for {algo} must lie in (0, 1], got {mu}")

    @property
    def n_taps(self):
        return self.system.n_taps


@dataclass(eq=False)
class TrialResult:
    sq_error: np.ndarray  # e^2(k), k = 0..horizon-1
    weights: np.ndarray  # w(k), k = 0..horizon
    status: int = 0

    @property
    def diverged(self):
        return self.status != 0


@dataclass(eq=False)
class LearningCurve:
    mse: np.ndarray
    coeff_traj: np.ndarray | None = None

    def __len__(self):
        return self.mse.size

    def db(self):
        return db(self.mse)


def db(p):
    return 10.0 * np.log10(p)


def from_db(level_db):
    return 10.0 ** (level_db / 10.0)


def _encode(rule):
    """Kernel arguments ``(code, p1, p2, kappa, beta, fixed)`` for a gain rule."""
    if isinstance(rule, Identity):
        za = rule.zero_attractor
        if za is None:
            return 0, 0.0, 0.0, 0.0, 1.0, None
        return 0, 0.0, 0.0, za.kappa, za.beta, None
    if isinstance(rule, Pnlms):
        return 1, rule.delta_p, rule.rho, 0.0, 1.0, None
    if isinstance(rule, Ipnlms):
        return 2, rule.alpha, rule.delta_ip, 0.0, 1.0, None
    if isinstance(rule, PureProportional):
        return 3, 0.0, 0.0, 0.0, 1.0, None
    if isinstance(rule, FixedGain):
        return 4, 0.0, 0.0, 0.0, 1.0, rule.g
    raise TypeError(f"unsupported gain rule {rule!r}")


def _system_arrays(system, horizon):
    if isinstance(system, Switching):
        return system.w_a, system.w_b, system.switch_at
    return system.w_o, system.w_o, horizon + 1


def _streams(scn, seeds):
    if scn.horizon == 0:
        empty = np.zeros((len(seeds), 0))
        return empty, empty
    pairs = [trial_streams(scn.input, scn.noise_var, scn.horizon, s) for s in seeds]
    return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])


def _run(scn, rule, mu, u, noise, track):
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"step size must lie in (0, 1], got {mu}")
    code, p1, p2, kappa, beta, fixed = _encode(rule)
    n = scn.n_taps
    if fixed is None:
        fixed = np.ones(n)
    elif fixed.size != n:
        raise ValueError("FixedGain length does not match the system")
    w_a, w_b, switch_at = _system_arrays(scn.system, scn.horizon)
    return _backend.run_batch(
        np.ascontiguousarray(u), np.ascontiguousarray(noise),
        np.ascontiguousarray(w_a), np.ascontiguousarray(w_b), int(switch_at),
        np.ascontiguousarray(scn.init), float(mu), float(scn.delta),
        code, float(p1), float(p2), float(kappa), float(beta),
        np.ascontiguousarray(fixed, dtype=np.float64), bool(track),
    )


def run_trial(scn, algo, mu, seed):
    """One realization of ``algo`` on ``scn``: squared errors and the weight path.

    A trial that hits nonfinite weights (or an undefined gain) is returned
    with a nonzero ``status``; entries after the failure are not meaningful.
    """
    u, noise = _streams(scn, [seed])
    sq, _, w_sum, status = _run(scn, algo, mu, u, noise, track=True)
    return TrialResult(sq[0], w_sum, int(status[0]))


def run_monte_carlo(scn, algos: Mapping, base_seed=0, track_coeffs=False, chunk=256):
    """Average ``e^2(k)`` over ``scn.trials`` trials for each named algorithm.

    ``algos`` maps a name to a gain rule; the step size comes from
    ``scn.step_sizes[name]``.  Raises :class:`DivergenceError` rather than
    averaging a failed trial.
    """
    missing = [name for name in algos if name not in scn.step_sizes]
    if missing:
        raise ValueError(f"no step size for {missing}")
    n = scn.n_taps
    sums = {name: np.zeros(scn.horizon) for name in algos}
    wsums = {name: np.zeros((scn.horizon + 1, n)) for name in algos} if track_coeffs else {}
    failures = []
    for start in range(0, scn.trials, chunk):
        seeds = [base_seed + t for t in range(start, min(start + chunk, scn.trials))]
        u, noise = _streams(scn, seeds)
        for name, rule in algos.items():
            sq, _, w_sum, status = _run(scn, rule, scn.step_sizes[name], u, noise, track_coeffs)
            for t in np.flatnonzero(status):
                failures.append((name, seeds[t], _STATUS[int(status[t])]))
            sums[name] += sq.sum(axis=0)
            if track_coeffs:
                wsums[name] += w_sum
        if failures:
            raise DivergenceError(failures)
    return {
        name: LearningCurve(
            sums[name] / scn.trials,
            wsums[name] / scn.trials if track_coeffs else None,
        )
        for name in algos
    }


def _as_array(curve):
    return curve.mse if isinstance(curve, LearningCurve) else np.asarray(curve, dtype=np.float64)


def steady_state_mse(curve, window=None):
    """Mean of the last ``window`` samples (default: final 10% of the curve)."""
    c = _as_array(curve)
    if window is None:
        window = max(1, c.size // 10)
    if not 1 <= window <= c.size:
        raise ValueError(f"window {window} does not fit a curve of length {c.size}")
    return float(c[-window:].mean())


def time_to_threshold(curve, level, debounce=50, slack=0.5):
    """First ``k`` with ``mse(k) <= level`` that stays below ``level*(1+slack)``
    for the following ``debounce`` samples; ``None`` if there is none."""
    c = _as_array(curve)
    hi = level * (1.0 + slack)
    over = c > hi
    # first index > k where the curve exceeds the slack band, per k
    next_over = np.full(c.size + 1, c.size)
    for k in range(c.size - 1, -1, -1):
        next_over[k] = k if over[k] else next_over[k + 1]
    for k in np.flatnonzero(c <= level):
        if next_over[k] > min(k + debounce, c.size - 1):
            return int(k)
    return None


def write_curves_csv(curves, fh):
    """``iteration,<algo>...`` rows of linear-power MSE at 17 significant digits."""
    names = list(curves)
    arrays = [_as_array(curves[name]) for name in names]
    lengths = {a.size for a in arrays}
    if len(lengths) > 1:
        raise ValueError("curves have different lengths")
    fh.write(",".join(["iteration", *names]) + "\n")
    for k, row in enumerate(zip(*arrays)):
        fh.write(",".join([str(k), *(f"{v:.17g}" for v in row)]) + "\n")


def read_curves_csv(fh):
    if isinstance(fh, str):
        fh = io.StringIO(fh)
    rows = list(csv.reader(fh))
    header = rows[0]
    if header[0] != "iteration":
        raise ValueError("not a learning-curve CSV")
    data = np.array(rows[1:], dtype=np.float64).reshape(-1, len(header))
    return {name: data[:, j + 1] for j, name in enumerate(header[1:])}


def rule_to_dict(rule):
    if isinstance(rule, Identity):
        za = rule.zero_attractor
        if za is None:
            return {"rule": "nlms"}
        return {"rule": "l0nlms", "kappa": za.kappa, "beta": za.beta}
    if isinstance(rule, Pnlms):
        return {"rule": "pnlms", "delta_p": rule.delta_p, "rho": rule.rho}
    if isinstance(rule, Ipnlms):
        return {"rule": "ipnlms", "alpha": rule.alpha, "delta_ip": rule.delta_ip}
    if isinstance(rule, PureProportional):
        return {"rule": "proportional"}
    if isinstance(rule, FixedGain):
        return {"rule": "fixed", "g": rule.g.tolist()}
    raise TypeError(f"unsupported gain rule {rule!r}")


def rule_from_dict(d):
    kind = d["rule"]
    if kind == "nlms":
        return Identity()
    if kind == "l0nlms":
        return Identity(ZeroAttractor(d.get("kappa", 2e-3), d.get("beta", 5.0)))
    if kind == "pnlms":
        return Pnlms(d.get("delta_p", 0.01), d.get("rho", 0.01))
    if kind == "ipnlms":
        return Ipnlms(d.get("alpha", -0.5), d.get("delta_ip", 0.01))
    if kind == "proportional":
        return PureProportional()
    if kind == "fixed":
        return FixedGain(d["g"])
    raise ValueError(f"unknown gain rule {kind!r}")


def _vec(a):
    """Compact JSON form for mostly-zero coefficient vectors."""
    a = np.asarray(a, dtype=np.float64)
    nz = np.flatnonzero(a)
    if nz.size * 2 < a.size:
        return {"length": a.size, "nonzero": {str(i): float(a[i]) for i in nz}}
    return a.tolist()


def _unvec(v):
    if isinstance(v, dict):
        a = np.zeros(int(v["length"]))
        for i, x in v["nonzero"].items():
            a[int(i)] = x
        return a
    return np.asarray(v, dtype=np.float64)


def scenario_to_dict(scn):
    if isinstance(scn.system, Switching):
        system = {"kind": "switching", "w_a": _vec(scn.system.w_a),
                  "w_b": _vec(scn.system.w_b), "switch_at": scn.system.switch_at}
    else:
        system = {"kind": "static", "w_o": _vec(scn.system.w_o)}
    if isinstance(scn.input, WGN):
        inp = {"kind": "wgn", "variance": scn.input.variance}
    else:
        inp = {"kind": "bpsk"}
    return {
        "name": scn.name,
        "system": system,
        "input": inp,
        "noise_var": scn.noise_var,
        "horizon": scn.horizon,
        "trials": scn.trials,
        "init": _vec(scn.init),
        "step_sizes": dict(scn.step_sizes),
        "delta": scn.delta,
    }


def scenario_from_dict(d):
    s = d["system"]
    if s["kind"] == "switching":
        system = Switching(_unvec(s["w_a"]), _unvec(s["w_b"]), int(s["switch_at"]))
    elif s["kind"] == "static":
        system = Static(_unvec(s["w_o"]))
    else:
        raise ValueError(f"unknown system kind {s['kind']!r}")
    i = d.get("input", {"kind": "wgn"})
    if i["kind"] == "wgn":
        inp = WGN(i.get("variance", 1.0))
    elif i["kind"] == "bpsk":
        inp = BPSK()
    else:
        raise ValueError(f"unknown input kind {i['kind']!r}")
    return Scenario(
        system=system,
        input=inp,
        noise_var=d.get("noise_var", 1e-2),
        horizon=int(d.get("horizon", 1000)),
        trials=int(d.get("trials", 1000)),
        init=_unvec(d["init"]) if "init" in d else None,
        step_sizes=dict(d.get("step_sizes", {})),
        delta=d.get("delta", 1e-12),
        name=d.get("name", "custom"),
    )
