"""Input and noise generation, delay-line regressors, and the test systems."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "WGN",
    "BPSK",
    "InputModel",
    "Static",
    "Switching",
    "UnknownSystem",
    "gen_input",
    "gen_noise",
    "trial_streams",
    "regressor",
    "desired",
    "catalog_w0",
    "catalog_w1",
    "catalog_w2",
    "catalog_w3",
    "switching_system",
]


@dataclass(frozen=True)
class WGN:
    """Zero-mean white Gaussian input."""

    variance: float = 1.0

    def __post_init__(self):
        if not self.variance > 0:
            raise ValueError("WGN variance must be positive")


@dataclass(frozen=True)
class BPSK:
    """Equiprobable +/-1 symbols (zero mean, unit variance)."""

    variance = 1.0


InputModel = Union[WGN, BPSK]


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gen_input(model, n, seed):
    """Draw ``n`` input samples; identical ``(model, n, seed)`` gives identical output.

    ``seed`` may be an int, a ``SeedSequence`` or a ``Generator``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _rng(seed)
    if isinstance(model, WGN):
        return np.sqrt(model.variance) * rng.standard_normal(n)
    if isinstance(model, BPSK):
        u = rng.uniform(-1.0, 1.0, n)
        return np.where(u >= 0.0, 1.0, -1.0)
    raise TypeError(f"unknown input model {model!r}")


def gen_noise(variance, n, seed):
    if variance < 0:
        raise ValueError("noise variance must be nonnegative")
    return np.sqrt(variance) * _rng(seed).standard_normal(n)


def trial_streams(model, noise_var, n, seed):
    """Input and measurement-noise sequences for one trial.

    Both come from independent children of ``SeedSequence(seed)``, so a trial
    is fully determined by its integer seed.
    """
    in_ss, noise_ss = np.random.SeedSequence(seed).spawn(2)
    return gen_input(model, n, in_ss), gen_noise(noise_var, n, noise_ss)


def regressor(u, k, taps):
    """Tapped-delay-line vector ``[u(k), u(k-1), ..., u(k-taps+1)]``.

    Samples before time 0 are taken as zero.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    u = np.asarray(u, dtype=np.float64)
    x = np.zeros(taps)
    lo = max(0, k - taps + 1)
    seg = u[lo : k + 1][::-1]
    x[: seg.size] = seg
    return x


@dataclass(frozen=True, eq=False)
class Static:
    w_o: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w_o", np.asarray(self.w_o, dtype=np.float64))

    @property
    def n_taps(self):
        return self.w_o.size

    def at(self, k):
        return self.w_o


@dataclass(frozen=True, eq=False)
class Switching:
    """``w_a`` for ``k < switch_at``, ``w_b`` from then on."""

    w_a: np.ndarray
    w_b: np.ndarray
    switch_at: int

    def __post_init__(self):
        w_a = np.asarray(self.w_a, dtype=np.float64)
        w_b = np.asarray(self.w_b, dtype=np.float64)
        if w_a.shape != w_b.shape:
            raise ValueError("both systems must have the same length")
        if self.switch_at < 1:
            raise ValueError("switch_at must be >= 1")
        object.__setattr__(self, "w_a", w_a)
        object.__setattr__(self, "w_b", w_b)

    @property
    def n_taps(self):
        return self.w_a.size

    def at(self, k):
        return self.w_a if k < self.switch_at else self.w_b


UnknownSystem = Union[Static, Switching]


def desired(system, x, k, noise_sample):
    return float(system.at(k) @ np.asarray(x, dtype=np.float64)) + noise_sample


def catalog_w0():
    """Two-tap compressible system ``[0.99, 0.01]``."""
    return np.array([0.99, 0.01])


def catalog_w1():
    """64-tap system with a single unit coefficient at the head."""
    w = np.zeros(64)
    w[0] = 1.0
    return w


def catalog_w2():
    """100 taps, ones at indices 94..99 (support at the tail)."""
    w = np.zeros(100)
    w[94:100] = 1.0
    return w


def catalog_w3():
    """100 taps, ones at indices 0..5 (support at the head)."""
    w = np.zeros(100)
    w[0:6] = 1.0
    return w


def switching_system(switch_at=2000):
    return Switching(catalog_w2(), catalog_w3(), switch_at)
