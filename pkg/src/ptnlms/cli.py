"""Command-line front end: ``ptnlms {run,contours,analyze,list}``.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, _backend, analysis, harness, scenarios, signals
from .filters import DegenerateGainError, Identity, Ipnlms, NonFiniteError, Pnlms, PureProportional

log = logging.getLogger("ptnlms")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

PARAM_FLAGS = ("delta_p", "rho", "alpha", "delta_ip", "kappa", "beta")


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


@dataclass
class RunConfig:
    scenario: harness.Scenario
    algorithms: dict
    seed: int = 0
    out: str = "out"
    coeffs: bool = False

    def to_dict(self):
        return {
            "scenario": harness.scenario_to_dict(self.scenario),
            "algorithms": {k: harness.rule_to_dict(r) for k, r in self.algorithms.items()},
            "seed": self.seed,
            "coeffs": self.coeffs,
        }


def _load_config_file(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    # a meta.txt from an earlier run nests the resolved config
    return data.get("config", data)


def build_run_config(args):
    """Merge defaults, an optional JSON config file, and command-line flags."""
    data = _load_config_file(args.config) if args.config else {}
    params = dict(scenarios.DEFAULTS)
    params.update(data.get("params", {}))
    for name in PARAM_FLAGS:
        if getattr(args, name) is not None:
            params[name] = getattr(args, name)

    scn_spec = args.scenario or data.get("scenario")
    if scn_spec is None:
        raise ConfigError("no scenario given (use --scenario or a config file)")
    try:
        if isinstance(scn_spec, str):
            scn = scenarios.get(scn_spec)
        else:
            scn = harness.scenario_from_dict(scn_spec)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(str(exc).strip("'\"")) from None

    rule_params = {k: params[k] for k in PARAM_FLAGS}
    algos_spec = data.get("algorithms")
    if args.algos:
        algos_spec = args.algos.split(",")
    defaults = scenarios.algorithms(**rule_params)
    try:
        if algos_spec is None:
            algos = defaults
        elif isinstance(algos_spec, list):
            algos = {name: defaults[name] for name in algos_spec}
        else:
            algos = {name: harness.rule_from_dict(d) for name, d in algos_spec.items()}
    except KeyError as exc:
        raise ConfigError(f"unknown algorithm {exc}") from None
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None

    step_sizes = dict(scn.step_sizes)
    for name in algos:
        mu = getattr(args, f"mu_{name}", None)
        if mu is not None:
            step_sizes[name] = mu
        elif args.mu is not None:
            step_sizes[name] = args.mu
    missing = [n for n in algos if n not in step_sizes]
    if missing:
        raise ConfigError(f"no step size for {', '.join(missing)}")

    trials = args.trials if args.trials is not None else data.get("trials", scn.trials)
    horizon = args.horizon if args.horizon is not None else data.get("horizon", scn.horizon)
    delta = args.delta if args.delta is not None else scn.delta
    try:
        scn = harness.Scenario(
            system=scn.system, input=scn.input, noise_var=scn.noise_var,
            horizon=int(horizon), trials=int(trials), init=scn.init,
            step_sizes={n: step_sizes[n] for n in algos}, delta=delta, name=scn.name,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    seed = args.seed if args.seed is not None else int(data.get("seed", 0))
    out = args.out or data.get("out", "out")
    coeffs = args.coeffs or bool(data.get("coeffs", False))
    return RunConfig(scn, algos, seed, out, coeffs)


CURVES_GP = """\
# gnuplot script: MSE learning curves in dB
set datafile separator ','
set key top right
set xlabel 'iteration k'
set ylabel 'MSE (dB)'
set grid
set terminal pngcairo size 900,540
set output 'curves.png'
plot for [i=2:{last}] 'curves.csv' using 1:(10*log10(column(i))) with lines lw 1.5 title columnhead(i)
"""

COEFFS_GP = """\
# gnuplot script: mean coefficient paths w0(k) vs w1(k)
set datafile separator ','
set xlabel 'w_0'
set ylabel 'w_1'
set grid
set terminal pngcairo size 700,600
set output 'coeffs.png'
plot {plots}
"""

CONTOURS_GP = """\
# gnuplot script: MSE contours over the transformed weight plane
set datafile separator ','
set datafile commentschars '#'
set dgrid3d {n1},{n0}
set contour base
set cntrparam levels 15
unset surface
set view map
set xlabel "w'_0"
set ylabel "w'_1"
set terminal pngcairo size 700,600
set output 'contours.png'
splot 'grid.csv' every ::1 using 1:2:3 with lines notitle
"""


def cmd_run(args):
    cfg = build_run_config(args)
    scn = cfg.scenario
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    log.info("running %s: %d trials x %d iterations, algorithms %s (%s kernels)",
             scn.name, scn.trials, scn.horizon, ",".join(cfg.algorithms), _backend.BACKEND)
    try:
        curves = harness.run_monte_carlo(scn, cfg.algorithms, base_seed=cfg.seed,
                                         track_coeffs=cfg.coeffs)
    except (harness.DivergenceError, NonFiniteError, DegenerateGainError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    buf = io.StringIO()
    harness.write_curves_csv(curves, buf)
    _atomic_write(out / "curves.csv", buf.getvalue())
    meta = {
        "config": cfg.to_dict(),
        "trial_seeds": {"first": cfg.seed, "count": scn.trials,
                        "rule": "trial t uses SeedSequence(seed + t).spawn(2) -> (input, noise)"},
        "package_version": __version__,
    }
    _atomic_write(out / "meta.txt", json.dumps(meta, indent=2) + "\n")
    _atomic_write(out / "plot.gp", CURVES_GP.format(last=len(curves) + 1))
    if cfg.coeffs:
        cols = ["iteration"]
        data = [np.arange(scn.horizon + 1)]
        for name, c in curves.items():
            for i in range(scn.n_taps):
                cols.append(f"{name}_w{i}")
                data.append(c.coeff_traj[:, i])
        lines = [",".join(cols)]
        lines += [",".join(f"{v:.17g}" for v in row) for row in zip(*data)]
        _atomic_write(out / "coeffs.csv", "\n".join(lines) + "\n")
        if scn.n_taps >= 2:
            plots = ", ".join(
                f"'coeffs.csv' using {2 + j * scn.n_taps}:{3 + j * scn.n_taps} with lines title '{name}'"
                for j, name in enumerate(curves)
            )
            _atomic_write(out / "coeffs.gp", COEFFS_GP.format(plots=plots))

    for name, c in curves.items():
        print(f"{name:8s} steady-state MSE {harness.db(harness.steady_state_mse(c)):7.2f} dB")
    print(f"wrote {out / 'curves.csv'}")
    return EXIT_OK


WO_CATALOG = {
    "w0": signals.catalog_w0,
    "w1": signals.catalog_w1,
    "w2": signals.catalog_w2,
    "w3": signals.catalog_w3,
}


def parse_wo(text):
    if text in WO_CATALOG:
        return WO_CATALOG[text]()
    try:
        w = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ConfigError(f"cannot parse w_o {text!r}: give a catalog name "
                          f"({', '.join(WO_CATALOG)}) or comma-separated numbers") from None
    if w.size == 0:
        raise ConfigError("w_o is empty")
    return w


def parse_rule(args):
    name = args.rule
    if name == "nlms":
        return Identity()
    if name == "pnlms":
        delta_p = 0.01 if args.delta_p is None else args.delta_p
        rho = 0.01 if args.rho is None else args.rho
        return Pnlms(delta_p, rho)
    if name == "ipnlms":
        alpha = -0.5 if args.alpha is None else args.alpha
        delta_ip = 0.01 if args.delta_ip is None else args.delta_ip
        return Ipnlms(alpha, delta_ip)
    if name == "proportional":
        return PureProportional()
    raise ConfigError(f"unknown rule {name!r}")


def cmd_contours(args):
    w_o = parse_wo(args.wo)
    if w_o.size != 2:
        raise ConfigError(f"contours need a two-tap system, got {w_o.size} taps")
    rule = parse_rule(args)
    try:
        spec = analysis.SurfaceSpec.white(w_o, rule, sigma_n2=args.noise_var)
    except ValueError as exc:
        raise ConfigError(f"surface undefined: {exc}") from None
    c = spec.w_o_prime
    h = args.span
    grid = analysis.contour_grid(spec, ((c[0] - h, c[0] + h), (c[1] - h, c[1] + h)),
                                 (args.samples, args.samples))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    analysis.write_grid_csv(grid, buf)
    _atomic_write(out / "grid.csv", buf.getvalue())
    _atomic_write(out / "contours.gp", CONTOURS_GP.format(n0=args.samples, n1=args.samples))
    print(f"kappa(R') = {analysis.cond(spec.r_prime):.12g}")
    print(f"wrote {out / 'grid.csv'}")
    return EXIT_OK


def analyze(w_o, rule, variance=1.0):
    """``(kappa_R, kappa_G, kappa_R', holds)`` for white input of ``variance``."""
    R = variance * np.eye(w_o.size)
    g_o = analysis.optimal_gain(w_o, rule)
    if np.any(g_o == 0.0):
        # zero gain makes R' singular: infinite conditioning, bound holds trivially
        return analysis.cond(R), float("inf"), float("inf"), True
    res = analysis.bound_check(R, g_o)
    return res.kappa_r, res.kappa_g, res.kappa_r_prime, res.holds


def cmd_analyze(args):
    w_o = parse_wo(args.wo)
    rule = parse_rule(args)
    variance = 1.0 if args.input == "bpsk" else args.variance
    try:
        kr, kg, krp, holds = analyze(w_o, rule, variance)
    except DegenerateGainError as exc:
        raise ConfigError(str(exc)) from None
    print(f"kappa(R)   = {kr:.12g}")
    print(f"kappa(G_o) = {kg:.12g}")
    print(f"kappa(R')  = {krp:.12g}")
    print(f"bound kappa(R') <= kappa(G_o)*kappa(R): {'holds' if holds else 'VIOLATED'}")
    return EXIT_OK if holds else EXIT_NUMERIC


def cmd_list(args):
    for name, (factory, desc) in scenarios.CATALOG.items():
        scn = factory()
        mus = " ".join(f"{k}={v:g}" for k, v in scn.step_sizes.items())
        print(f"{name:6s} N+1={scn.n_taps:<4d} horizon={scn.horizon:<5d} mu: {mus}  # {desc}")
    return EXIT_OK


def _add_rule_params(p):
    p.add_argument("--delta-p", dest="delta_p", type=float, help="PNLMS activation floor")
    p.add_argument("--rho", type=float, help="PNLMS proportionality floor")
    p.add_argument("--alpha", type=float, help="IPNLMS mixing, -1 gives NLMS")
    p.add_argument("--delta-ip", dest="delta_ip", type=float, help="IPNLMS regularizer")


def make_parser():
    parser = _Parser(prog="ptnlms", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="Monte-Carlo learning curves")
    p.add_argument("--scenario", help="built-in scenario name (see `ptnlms list`)")
    p.add_argument("--config", help="JSON config file, or a meta.txt from an earlier run")
    p.add_argument("--algos", help="comma-separated subset of nlms,pnlms,ipnlms,l0nlms")
    p.add_argument("--trials", type=int, help="Monte-Carlo trials")
    p.add_argument("--seed", type=int, help="base seed; trial t uses seed + t")
    p.add_argument("--horizon", type=int, help="iterations per trial")
    p.add_argument("--out", help="output directory")
    p.add_argument("--mu", type=float, help="step size for every algorithm")
    for name in scenarios.ALGORITHMS:
        p.add_argument(f"--mu.{name}", dest=f"mu_{name}", type=float)
    p.add_argument("--delta", type=float, help="regularizer in the normalization")
    _add_rule_params(p)
    p.add_argument("--kappa", type=float, help="l0 attractor strength")
    p.add_argument("--beta", type=float, help="l0 attractor shape")
    p.add_argument("--coeffs", action="store_true", help="also write mean coefficient paths")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("contours", help="MSE contour grid for a two-tap system")
    p.add_argument("--wo", default="w0", help="catalog name w0..w3 or comma-separated taps")
    p.add_argument("--rule", default="proportional",
                   choices=["nlms", "pnlms", "ipnlms", "proportional"])
    p.add_argument("--samples", type=int, default=101, help="grid points per axis")
    p.add_argument("--span", type=float, default=1.0, help="half-width of the grid")
    p.add_argument("--noise-var", dest="noise_var", type=float, default=1e-2)
    p.add_argument("--out", default="out", help="output directory")
    _add_rule_params(p)
    p.set_defaults(func=cmd_contours)

    p = sub.add_parser("analyze", help="condition numbers of R, G_o and R'")
    p.add_argument("--wo", default="w0", help="catalog name w0..w3 or comma-separated taps")
    p.add_argument("--rule", default="proportional",
                   choices=["nlms", "pnlms", "ipnlms", "proportional"])
    p.add_argument("--input", default="wgn", choices=["wgn", "bpsk"])
    p.add_argument("--variance", type=float, default=1.0)
    _add_rule_params(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("list", help="built-in scenarios")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
