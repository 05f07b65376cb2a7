"""Proportionate-type NLMS recursion and its gain rules.

Every algorithm in the family shares one update,

    w(k+1) = w(k) + mu * e(k) * G(k) x(k) / (x(k)^T G(k) x(k) + delta),

and differs only in how the diagonal of ``G(k)`` is computed from the current
weights.  Gain rules are small frozen dataclasses; :func:`step` is a pure
function of ``(state, input, rule)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

__all__ = [
    "DegenerateGainError",
    "NonFiniteError",
    "ZeroAttractor",
    "Identity",
    "Pnlms",
    "Ipnlms",
    "PureProportional",
    "FixedGain",
    "GainRule",
    "FilterState",
    "StepInput",
    "gain_pnlms",
    "gain_ipnlms",
    "gain_pure_proportional",
    "step",
    "nlms",
    "pnlms",
    "ipnlms",
    "l0_nlms",
]


class DegenerateGainError(ValueError):
    """A gain rule was evaluated where its normalizer vanishes."""


class NonFiniteError(ValueError):
    """NaN or Inf reached the filter recursion."""


def gain_pnlms(w, delta_p=0.01, rho=0.01):
    """PNLMS gains.

    ``gamma_i = max(|w_i|, rho * max(delta_p, |w_0|, ..., |w_N|))`` and
    ``g_i = gamma_i / sum_j |gamma_j|``.  The floor keeps every gain strictly
    positive, so this never fails for finite ``w``.
    """
    if not (delta_p > 0 and rho > 0):
        raise ValueError("delta_p and rho must be positive")
    absw = np.abs(np.asarray(w, dtype=np.float64))
    floor = rho * max(delta_p, float(absw.max(initial=0.0)))
    gamma = np.maximum(absw, floor)
    return gamma / np.sum(np.abs(gamma))


def gain_ipnlms(w, alpha=-0.5, delta_ip=0.01):
    """IPNLMS gains: a uniform NLMS term blended with a proportional term.

    ``alpha = -1`` gives plain NLMS (uniform ``1/(N+1)``); ``alpha -> 1``
    approaches pure proportionality.
    """
    if not -1.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [-1, 1), got {alpha}")
    if delta_ip < 0:
        raise ValueError("delta_ip must be nonnegative")
    absw = np.abs(np.asarray(w, dtype=np.float64))
    n = absw.size
    g = np.full(n, (1.0 - alpha) / (2.0 * n))
    if alpha == -1.0:
        return g
    denom = 2.0 * absw.sum() + delta_ip
    if denom == 0.0:
        raise DegenerateGainError("IPNLMS with delta_ip = 0 needs a nonzero weight vector")
    return g + (1.0 + alpha) * absw / denom


def gain_pure_proportional(w):
    """Gains ``|w_i| / ||w||_1`` with no floor; zero weights get zero gain."""
    absw = np.abs(np.asarray(w, dtype=np.float64))
    norm = absw.sum()
    if not norm > 0.0:
        raise DegenerateGainError("pure proportional gain is undefined for w = 0")
    return absw / norm


@dataclass(frozen=True)
class ZeroAttractor:
    """Laplacian zero attractor ``-kappa*beta*sgn(w)*exp(-beta*|w|)``."""

    kappa: float = 2e-3
    beta: float = 5.0

    def __post_init__(self):
        if self.kappa < 0:
            raise ValueError("kappa must be nonnegative")
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    def apply(self, w):
        return w - self.kappa * self.beta * np.sign(w) * np.exp(-self.beta * np.abs(w))


@dataclass(frozen=True)
class Identity:
    """``G = I`` (NLMS), optionally with a zero attractor (l0-NLMS)."""

    zero_attractor: ZeroAttractor | None = None

    def gain(self, w):
        return np.ones(np.shape(w)[0])


@dataclass(frozen=True)
class Pnlms:
    delta_p: float = 0.01
    rho: float = 0.01

    def __post_init__(self):
        if not (self.delta_p > 0 and self.rho > 0):
            raise ValueError("Pnlms requires delta_p > 0 and rho > 0")

    def gain(self, w):
        return gain_pnlms(w, self.delta_p, self.rho)


@dataclass(frozen=True)
class Ipnlms:
    alpha: float = -0.5
    delta_ip: float = 0.01

    def __post_init__(self):
        if not -1.0 <= self.alpha < 1.0:
            raise ValueError("Ipnlms requires -1 <= alpha < 1")
        if self.delta_ip < 0:
            raise ValueError("Ipnlms requires delta_ip >= 0")

    def gain(self, w):
        return gain_ipnlms(w, self.alpha, self.delta_ip)


@dataclass(frozen=True)
class PureProportional:
    def gain(self, w):
        return gain_pure_proportional(w)


@dataclass(frozen=True, eq=False)
class FixedGain:
    """A gain vector frozen in time, e.g. the optimal ``G_o`` of the analysis."""

    g: np.ndarray = field(repr=False)

    def __post_init__(self):
        g = np.array(self.g, dtype=np.float64)
        if g.ndim != 1 or np.any(g < 0) or not np.all(np.isfinite(g)):
            raise ValueError("FixedGain needs a finite nonnegative vector")
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    def gain(self, w):
        if np.shape(w)[0] != self.g.size:
            raise ValueError("FixedGain length does not match the weights")
        return self.g


GainRule = Union[Identity, Pnlms, Ipnlms, PureProportional, FixedGain]


def nlms():
    return Identity()


def pnlms(delta_p=0.01, rho=0.01):
    return Pnlms(delta_p, rho)


def ipnlms(alpha=-0.5, delta_ip=0.01):
    return Ipnlms(alpha, delta_ip)


def l0_nlms(kappa=2e-3, beta=5.0):
    return Identity(ZeroAttractor(kappa, beta))


@dataclass(frozen=True, eq=False)
class FilterState:
    w: np.ndarray
    k: int = 0

    @classmethod
    def zeros(cls, n_taps):
        return cls(np.zeros(n_taps))


@dataclass(frozen=True)
class StepInput:
    x: np.ndarray
    d: float
    mu: float
    delta: float = 1e-12

    def __post_init__(self):
        if not 0.0 < self.mu <= 1.0:
            raise ValueError(f"step size must lie in (0, 1], got {self.mu}")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")


def step(state, inp, rule):
    """One iteration of the recursion.

    The gain is taken from the weights *before* the update; a zero attractor,
    when present, is applied after the normalized gradient step.

    Returns ``(new_state, e, y)``.
    """
    w = np.asarray(state.w, dtype=np.float64)
    x = np.asarray(inp.x, dtype=np.float64)
    if w.shape != x.shape or w.ndim != 1:
        raise ValueError(f"weights {w.shape} and regressor {x.shape} differ")
    if not (np.all(np.isfinite(x)) and np.isfinite(inp.d) and np.all(np.isfinite(w))):
        raise NonFiniteError("nonfinite input to step")

    y = float(w @ x)
    e = inp.d - y
    g = rule.gain(w)
    gx = g * x
    denom = float(gx @ x) + inp.delta
    if denom > 0.0:
        w_new = w + inp.mu * e * gx / denom
    else:
        # delta = 0 and G x = 0: there is no update direction
        w_new = w.copy()

    za = getattr(rule, "zero_attractor", None)
    if za is not None:
        w_new = za.apply(w_new)
    if not np.all(np.isfinite(w_new)):
        raise NonFiniteError(f"weights became nonfinite at k={state.k}")
    return FilterState(w_new, state.k + 1), e, y
