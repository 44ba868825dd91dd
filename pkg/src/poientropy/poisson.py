"""Poisson and binomial primitives, including certified Poisson entropy.

The entropy of Z ~ Po(lam) in nats is

    H(Z) = lam * ln(e / lam) + sum_{k>=1} lam^k e^-lam ln(k!) / k!

which has no closed form.  Two evaluation routes are provided:

* :func:`poisson_entropy_series` sums the series with a certified geometric
  tail bound, so the returned absolute-error certificate is a genuine bound
  on the truncation error.
* :func:`poisson_entropy_asymptotic` uses the large-mean expansion
  H(Z) ~ 0.5 ln(2 pi e lam) - 1/(12 lam) - 1/(24 lam^2); its error field is
  the heuristic 1/lam^3 and is labelled as such (the expansion's remainder
  is not controlled here).

:func:`poisson_entropy` dispatches between the two, and
:func:`chen_stein_residual` evaluates the characterising identity
lam E[f(Z+1)] - E[Z f(Z)], which vanishes exactly for Poisson Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

__all__ = [
    "EntropyValue",
    "poisson_log_pmf",
    "poisson_tail_bound",
    "poisson_entropy_series",
    "poisson_entropy_asymptotic",
    "poisson_entropy",
    "binomial_entropy",
    "chen_stein_residual",
]

_LN_2PI = math.log(2.0 * math.pi)

# Above this mean the series route is rejected as uneconomical; callers are
# steered to the asymptotic expansion instead.
SERIES_LAMBDA_CEILING = 1.0e7

# Default dispatch point between series and asymptotic evaluation.  At 1000
# the expansion error ~ lam^-3 = 1e-9 is already far below display precision
# while the series cost is still sub-millisecond.
SERIES_ASYMPTOTIC_SWITCH = 1000.0


@dataclass(frozen=True)
class EntropyValue:
    """An entropy in nats together with an absolute-error certificate.

    ``certified_abs_error`` bounds the truncation error of the evaluation;
    for the asymptotic route it is a heuristic (see ``method``).  Float
    rounding is excluded from the certificate and is orders of magnitude
    below it in every supported regime.
    """

    nats: float
    certified_abs_error: float
    method: str = field(default="", compare=False)

    def __post_init__(self):
        if self.certified_abs_error < 0.0:
            raise ValueError("certified_abs_error must be >= 0")


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not (lam > 0.0) or math.isinf(lam):
        raise ValueError(f"Poisson mean must lie in (0, inf), got {lam}")
    return lam


def poisson_log_pmf(lam: float, k: int) -> float:
    """ln P(Z = k) = k ln(lam) - lam - ln(k!) for Z ~ Po(lam)."""
    lam = _check_lambda(lam)
    if k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k}")
    if k == 0:
        return -lam
    return k * math.log(lam) - lam - math.lgamma(k + 1)


def poisson_tail_bound(lam: float, k: int) -> float:
    """Certified upper bound on P(Z > k) for Z ~ Po(lam), requires k + 1 > lam.

    Successive pmf ratios beyond k are at most r = lam / (k + 2) < 1, so the
    tail is dominated by the geometric series pmf(k+1) / (1 - r).
    """
    lam = _check_lambda(lam)
    if k + 1 <= lam:
        raise ValueError(f"tail bound needs k + 1 > lam, got k={k}, lam={lam}")
    r = lam / (k + 2)
    log_tail = poisson_log_pmf(lam, k + 1) - math.log1p(-r)
    return math.exp(log_tail) if log_tail > -745.0 else 0.0


def _series_tail_bound(lam: float, K: int) -> float:
    """Upper bound on sum_{k>K} pmf(k) * ln(k!) for the entropy series.

    For k >= 2, ln(k!) <= k ln k, and t_k = pmf(k) * k ln k satisfies
    t_{k+1}/t_k = lam ln(k+1) / (k ln k), which for k >= K+1 is at most
    q = lam ln(K+2) / ((K+1) ln(K+1)).  With q < 1 the tail is dominated by
    the geometric series t_{K+1} / (1 - q).
    """
    q = lam * math.log(K + 2) / ((K + 1) * math.log(K + 1))
    if q >= 0.9:
        return math.inf
    kp1 = K + 1
    log_t = poisson_log_pmf(lam, kp1) + math.log(kp1) + math.log(math.log(kp1))
    log_tail = log_t - math.log1p(-q)
    return math.exp(log_tail) if log_tail > -745.0 else 0.0


def poisson_entropy_series(
    lam: float, tol: float = 1e-9, lambda_ceiling: float = SERIES_LAMBDA_CEILING
) -> EntropyValue:
    """Entropy of Po(lam) by direct summation with a certified tail bound.

    The truncation point K >= max(2 lam, 16) is grown until the dominated
    geometric tail on sum_{k>K} pmf(k) ln(k!) drops below ``tol``; that tail
    bound is returned as the certificate.  Rejects means above
    ``lambda_ceiling`` (default 1e7), where the series is uneconomical and
    the asymptotic route should be used.
    """
    lam = _check_lambda(lam)
    if tol <= 0.0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if lam > lambda_ceiling:
        raise ValueError(
            f"series evaluation rejected for lam={lam:g} > ceiling {lambda_ceiling:g}; "
            "use poisson_entropy_asymptotic"
        )

    K = max(int(math.ceil(2.0 * lam)), 16)
    tail = _series_tail_bound(lam, K)
    while tail > tol:
        K += max(16, K // 4)
        tail = _series_tail_bound(lam, K)

    # ln(k!) factors double as both the summand weight and part of log pmf.
    k = np.arange(2, K + 1, dtype=np.float64)
    log_fact = gammaln(k + 1.0)
    log_pmf = k * math.log(lam) - lam - log_fact
    series = float(np.sum(np.exp(log_pmf) * log_fact))

    nats = lam * (1.0 - math.log(lam)) + series
    return EntropyValue(nats=nats, certified_abs_error=tail, method="series")


def poisson_entropy_asymptotic(lam: float) -> EntropyValue:
    """Large-mean expansion 0.5 ln(2 pi e lam) - 1/(12 lam) - 1/(24 lam^2).

    Requires lam >= 1.  The reported error 1/lam^3 is a heuristic scale for
    the first omitted correction, not a proven remainder bound; reports
    built on it flag the certificate as heuristic.
    """
    lam = _check_lambda(lam)
    if lam < 1.0:
        raise ValueError(f"asymptotic expansion requires lam >= 1, got {lam}")
    nats = 0.5 * (_LN_2PI + 1.0 + math.log(lam)) - 1.0 / (12.0 * lam) - 1.0 / (
        24.0 * lam * lam
    )
    return EntropyValue(
        nats=nats, certified_abs_error=lam**-3, method="asymptotic"
    )


def _poisson_entropy_from_log_mean(log_lam: float) -> EntropyValue:
    # Asymptotic route driven by ln(lam); used when lam itself overflows float.
    nats = 0.5 * (_LN_2PI + 1.0 + log_lam)
    if log_lam < 300.0:
        inv = math.exp(-log_lam)
        nats -= inv / 12.0 + inv * inv / 24.0
    err = math.exp(-3.0 * log_lam) if log_lam < 240.0 else 0.0
    return EntropyValue(nats=nats, certified_abs_error=err, method="asymptotic")


def poisson_entropy(
    lam: float, tol: float = 1e-9, series_cutoff: float = SERIES_ASYMPTOTIC_SWITCH
) -> EntropyValue:
    """Entropy of Po(lam): series for lam <= series_cutoff, expansion above."""
    lam = _check_lambda(lam)
    if lam <= series_cutoff:
        return poisson_entropy_series(lam, tol=tol)
    return poisson_entropy_asymptotic(lam)


def binomial_entropy(n: int, p: float) -> EntropyValue:
    """Entropy of Binomial(n, p) in nats by full enumeration over k = 0..n.

    These entropies increase with n towards H(Po(n p)) when the mean is held
    fixed (Poisson is the maximum-entropy law among Bernoulli-sum
    distributions of a given mean), which is exercised as a property test.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return EntropyValue(nats=0.0, certified_abs_error=0.0, method="exact")

    k = np.arange(n + 1, dtype=np.float64)
    log_pmf = (
        gammaln(n + 1.0)
        - gammaln(k + 1.0)
        - gammaln(n - k + 1.0)
        + k * math.log(p)
        + (n - k) * math.log1p(-p)
    )
    pmf = np.exp(log_pmf)
    nats = float(-np.sum(pmf * log_pmf))
    # Rounding estimate; comfortably inside the 1e-10 * n contract.
    return EntropyValue(
        nats=nats, certified_abs_error=1e-12 * (n + 1), method="exact"
    )


def chen_stein_residual(lam: float, f, cutoff: int) -> float:
    """sum_{k=0}^{cutoff} pmf(k) * (lam f(k+1) - k f(k)) for Z ~ Po(lam).

    The full expectation lam E[f(Z+1)] - E[Z f(Z)] is exactly zero for every
    bounded f; truncating at ``cutoff`` leaves a residual of magnitude at
    most sup|f| * (lam + cutoff) * P(Z > cutoff).  Requires cutoff >= 10 lam
    so that truncation, not the identity, dominates the result.
    """
    lam = _check_lambda(lam)
    if cutoff < 10.0 * lam:
        raise ValueError(
            f"cutoff must be >= 10 * lam, got cutoff={cutoff}, lam={lam}"
        )
    terms = []
    for k in range(cutoff + 1):
        pk = math.exp(poisson_log_pmf(lam, k))
        terms.append(pk * (lam * f(k + 1) - k * f(k)))
    return math.fsum(terms)
