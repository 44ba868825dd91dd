"""Exact oracle for sums of independent Bernoulli variables.

The distribution of W = X_1 + ... + X_n with independent X_i ~ Bern(p_i)
(the Poisson-binomial law) is computed by iterated two-tap convolution,

    (P_W(0), ..., P_W(n)) = (1-p_1, p_1) * ... * (1-p_n, p_n),

in O(n^2).  This is deliberately the slow, trustworthy route: every
analytic bound in the package is tested against the pmf, entropy and exact
total variation distance produced here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlogy

from .poisson import EntropyValue, poisson_log_pmf, poisson_tail_bound

__all__ = [
    "BernoulliSystem",
    "Pmf",
    "exact_distribution",
    "pmf_entropy",
    "tv_to_poisson",
]

# n above which the dense convolution is refused; the bound pipeline is the
# intended tool at that scale.
DEFAULT_MAX_N = 100_000


@dataclass(frozen=True)
class BernoulliSystem:
    """An independent Bernoulli system given by its success probabilities."""

    probs: np.ndarray

    def __init__(self, probs):
        probs = np.atleast_1d(np.asarray(probs, dtype=np.float64))
        if probs.size == 0:
            raise ValueError("a Bernoulli system needs at least one variable")
        if np.any(probs < 0.0) or np.any(probs > 1.0) or not np.all(np.isfinite(probs)):
            raise ValueError("all probabilities must lie in [0, 1]")
        object.__setattr__(self, "probs", probs)

    @property
    def n(self) -> int:
        return int(self.probs.size)

    @property
    def lam(self) -> float:
        """Mean of the sum, lam = sum p_i."""
        return float(np.sum(self.probs))

    @property
    def sum_p_squared(self) -> float:
        return float(np.sum(self.probs**2))


@dataclass(frozen=True)
class Pmf:
    """Dense probability mass function on {0, ..., n}."""

    mass: np.ndarray

    def __init__(self, mass):
        mass = np.asarray(mass, dtype=np.float64)
        if mass.ndim != 1 or mass.size == 0:
            raise ValueError("pmf must be a non-empty 1-d array")
        if np.any(mass < 0.0):
            raise ValueError("pmf entries must be non-negative")
        total = float(np.sum(mass))
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"pmf must sum to 1 within 1e-10, got {total!r}")
        object.__setattr__(self, "mass", mass)

    @property
    def support_size(self) -> int:
        return int(self.mass.size)

    def mean(self) -> float:
        return float(np.dot(np.arange(self.mass.size), self.mass))


def _as_probs(system) -> np.ndarray:
    if isinstance(system, BernoulliSystem):
        return system.probs
    return BernoulliSystem(system).probs


def exact_distribution(system, max_n: int = DEFAULT_MAX_N) -> Pmf:
    """Poisson-binomial pmf of a Bernoulli system by iterated convolution.

    Runs the n two-tap convolutions in a fixed left-to-right order, so the
    result is bit-identical for a given input regardless of the environment;
    reordering the probabilities changes it only at rounding level.
    """
    probs = _as_probs(system)
    n = probs.size
    if n > max_n:
        raise ValueError(
            f"n={n} exceeds the exact-oracle cap {max_n}; use the bound "
            "pipeline (chenstein/bounds modules) at this scale"
        )
    mass = np.zeros(n + 1, dtype=np.float64)
    mass[0] = 1.0
    for i, p in enumerate(probs):
        head = mass[: i + 2]
        shifted = head[:-1] * p
        head[:] *= 1.0 - p
        head[1:] += shifted
    return Pmf(mass)


def pmf_entropy(pmf: Pmf) -> EntropyValue:
    """-sum m_k ln m_k in nats, with 0 ln 0 = 0."""
    mass = pmf.mass if isinstance(pmf, Pmf) else Pmf(pmf).mass
    nats = float(-np.sum(xlogy(mass, mass)))
    return EntropyValue(
        nats=nats,
        certified_abs_error=1e-14 * mass.size,
        method="exact",
    )


def tv_to_poisson(pmf: Pmf, lam: float, tol: float = 1e-12) -> float:
    """Exact d_TV between a finite-support pmf and Po(lam).

    On a countable space the total variation distance is half the L1
    distance.  Over the support {0..n} the difference is summed directly;
    beyond it the finite pmf is zero, so the remaining contribution is the
    Poisson tail P(Z > n).  That tail is accumulated by direct summation
    (never as 1 minus a near-1 partial sum, which would cancel) until the
    certified geometric remainder drops below ``tol``.
    """
    mass = pmf.mass if isinstance(pmf, Pmf) else Pmf(pmf).mass
    if not lam > 0.0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if tol <= 0.0:
        raise ValueError(f"tol must be > 0, got {tol}")
    n = mass.size - 1

    k = np.arange(n + 1, dtype=np.float64)
    log_pois = k * math.log(lam) - lam - gammaln(k + 1.0)
    on_support = float(np.sum(np.abs(mass - np.exp(log_pois))))

    # P(Z > n): sum pmf terms upward until the certified remainder is < tol.
    tail_terms = []
    j = n + 1
    while True:
        tail_terms.append(math.exp(poisson_log_pmf(lam, j)))
        if j + 1 > lam and poisson_tail_bound(lam, j) <= tol:
            break
        j += 1
    tail = math.fsum(tail_terms)

    tv = 0.5 * (on_support + tail)
    # Mathematically tv <= 1; guard the few-ulp float excursions only.
    return min(1.0, max(0.0, tv))
