"""Closed-form degree-law ensembles and the light-speed neuronal pool."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph_core import InvalidArgumentError

_SINGULAR_EPS = 1e-9


class NumericalFailureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class DegreeLawParams:
    gamma: float
    k_min: float
    k_max: float
    n_tot: float

    def __post_init__(self):
        if self.gamma <= 1.0:
            raise InvalidArgumentError("gamma must exceed 1")
        # equality makes a degenerate (delta-distribution) bracket
        if not (1.0 <= self.k_min <= self.k_max):
            raise InvalidArgumentError("need 1 <= k_min <= k_max")
        if self.n_tot < 2:
            raise InvalidArgumentError("n_tot must be at least 2")


@dataclass(frozen=True)
class PoolParams:
    v: float  # signal velocity, m/s
    f: float  # oscillation frequency, Hz
    w: float  # neuron width, m

    def __post_init__(self):
        if self.v <= 0 or self.f <= 0 or self.w <= 0:
            raise InvalidArgumentError("pool parameters must be positive")


def power_integral(exponent: float, lo: float, hi: float) -> float:
    """Integral of x**exponent on [lo, hi], log form at exponent = -1."""
    if lo <= 0 or hi < lo:
        raise InvalidArgumentError("need 0 < lo <= hi")
    if abs(exponent + 1.0) < _SINGULAR_EPS:
        return math.log(hi / lo)
    e1 = exponent + 1.0
    return (hi**e1 - lo**e1) / e1


def normalization(gamma: float, k_min: float, k_max: float) -> float:
    """B such that the density B k**-gamma integrates to 1 on [k_min, k_max]."""
    if k_min <= 0 or k_max <= k_min:
        raise InvalidArgumentError("need 0 < k_min < k_max")
    return 1.0 / power_integral(-gamma, k_min, k_max)


def max_degree(gamma: float, k_min: float, n_tot: float, tol: float = 1e-9, max_iter: int = 10_000) -> float:
    """Fixed point of k_max = (B(k_max) n_tot)**(1/gamma), the degree at
    which the expected count N(k_max) reaches one node."""
    if n_tot < 2:
        raise InvalidArgumentError("n_tot must be at least 2")
    k = max(k_min * 2.0, k_min + 1.0)
    for _ in range(max_iter):
        b = normalization(gamma, k_min, k)
        nxt = (b * n_tot) ** (1.0 / gamma)
        if nxt <= k_min:
            nxt = k_min * (1.0 + 1e-6)
        if abs(nxt - k) <= tol * k:
            return nxt
        k = nxt
    raise NumericalFailureError(f"fixed point did not converge in {max_iter} iterations")


def total_edges(params: DegreeLawParams) -> float:
    """k_tot = integral of N(k) k dk with N(k) = n_tot B k**-gamma."""
    b = normalization(params.gamma, params.k_min, params.k_max)
    return params.n_tot * b * power_integral(1.0 - params.gamma, params.k_min, params.k_max)


def mean_degree(params: DegreeLawParams) -> float:
    return total_edges(params) / params.n_tot


def pool_diameter(v: float, f: float) -> float:
    """Largest round-trip-coherent extent d = v / f."""
    if f <= 0:
        raise InvalidArgumentError("frequency must be positive")
    return v / f


def pool_area(v: float, f: float) -> float:
    """Disk of diameter v/f; the disk constant reproduces the data-center
    scale quoted for 1 MHz operation."""
    d = pool_diameter(v, f)
    return math.pi * d * d / 4.0


def pool_count_ratio(a: PoolParams, b: PoolParams) -> float:
    """Ratio of neuron counts in the two platforms' pools, (v_a w_b / (w_a v_b))^2."""
    r = (a.v * b.w) / (a.w * b.v)
    return r * r
