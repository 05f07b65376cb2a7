"""Built-in experiments: the two-tap contour case and the three 64/100-tap runs."""
from __future__ import annotations

import numpy as np

from .filters import Identity, Ipnlms, Pnlms, ZeroAttractor
from .harness import Scenario
from .signals import BPSK, WGN, Static, catalog_w0, catalog_w1, switching_system

ALGORITHMS = ("nlms", "pnlms", "ipnlms", "l0nlms")

DEFAULTS = {
    "delta": 1e-12,
    "noise_var": 1e-2,
    "delta_p": 0.01,
    "rho": 0.01,
    "alpha": -0.5,
    "delta_ip": 0.01,
    "kappa": 2e-3,
    "beta": 5.0,
}


def algorithms(delta_p=0.01, rho=0.01, alpha=-0.5, delta_ip=0.01, kappa=2e-3, beta=5.0):
    """The four compared algorithms, keyed by their CLI names."""
    return {
        "nlms": Identity(),
        "pnlms": Pnlms(delta_p, rho),
        "ipnlms": Ipnlms(alpha, delta_ip),
        "l0nlms": Identity(ZeroAttractor(kappa, beta)),
    }


def _mus(nlms, pnlms, ipnlms, l0nlms):
    return dict(zip(ALGORITHMS, (nlms, pnlms, ipnlms, l0nlms)))


def fig1(trials=1000):
    return Scenario(Static(catalog_w0()), BPSK(), horizon=1000, trials=trials,
                    step_sizes=_mus(0.4, 0.4, 0.4, 0.4), name="fig1")


def fig2a(trials=1000):
    return Scenario(Static(catalog_w1()), WGN(1.0), horizon=1000, trials=trials,
                    init=np.zeros(64), step_sizes=_mus(0.4, 0.3, 0.4, 0.99), name="fig2a")


def fig2b(trials=1000):
    return Scenario(Static(catalog_w1()), WGN(1.0), horizon=1000, trials=trials,
                    init=np.full(64, 0.05), step_sizes=_mus(0.4, 0.3, 0.4, 0.99), name="fig2b")


def fig2c(trials=1000):
    return Scenario(switching_system(2000), WGN(1.0), horizon=4000, trials=trials,
                    init=np.zeros(100), step_sizes=_mus(0.6, 0.15, 0.45, 0.99), name="fig2c")


CATALOG = {
    "fig1": (fig1, "w_o = [0.99, 0.01], BPSK input, coefficient paths"),
    "fig2a": (fig2a, "64-tap single-spike system, w(0) = 0"),
    "fig2b": (fig2b, "64-tap single-spike system, w(0) = 0.05"),
    "fig2c": (fig2c, "100-tap system, support moves from tail to head at k = 2000"),
}


def get(name, trials=1000):
    try:
        factory, _ = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; choose from {', '.join(CATALOG)}") from None
    return factory(trials)
