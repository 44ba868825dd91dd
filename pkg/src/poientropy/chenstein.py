"""Chen-Stein dependency coefficients and total-variation bounds.

For indicators {X_a} over an index set I with neighbourhoods of dependence
B_a (a in B_a required), the classical coefficients are

    b1 = sum_a sum_{b in B_a} p_a p_b
    b2 = sum_a sum_{b in B_a, b != a} p_ab,   p_ab = E[X_a X_b]
    b3 = sum_a s_a,  s_a = E| E[X_a - p_a | sigma(X_b : b outside B_a)] |

and the Arratia-Goldstein-Gordon theorem bounds the total variation
distance of W = sum X_a from Po(lam), lam = sum p_a, by

    d_TV <= (b1 + b2) (1 - e^-lam)/lam + b3 min(1, 1.4/sqrt(lam)).

For independent summands (B_a = {a}) this collapses to the Barbour-Hall
upper bound ((1 - e^-lam)/lam) sum p_i^2, which together with the matching
lower bound (1/32) min(1, 1/lam) sum p_i^2 brackets the exact distance
within a factor of 32.  Le Cam's older bound sum p_i^2 is kept for
comparison.

Sources: Arratia, Goldstein & Gordon (1989, 1990); Barbour & Hall (1984);
Le Cam (1960).  Total variation here is half the L1 distance; some older
tables use the un-halved convention and differ by a factor of 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from .exact import BernoulliSystem
from .logspace import LogScalar, log1mexp, log_sum_exp

__all__ = [
    "DependencySpec",
    "dependency_spec_from_dict",
    "ChenSteinCoefficients",
    "TvBoundReport",
    "coefficients_from_spec",
    "coefficients_independent",
    "tv_upper_barbour_hall",
    "tv_lower_barbour_hall",
    "tv_upper_lecam",
    "tv_upper_agg",
    "tv_bound_report",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class DependencySpec:
    """Marginals, neighbourhoods and pair moments for a dependent system.

    ``pair_expectations`` maps ordered index pairs (a, b) with b in
    B_a \\ {a} to p_ab = E[X_a X_b]; since that moment is symmetric, each
    unordered pair may be supplied once and is mirrored automatically.
    ``b3_terms`` is either a sequence of the long-range terms s_a >= 0 or
    the literal string "zero" asserting the structural claim b3 = 0 (valid
    when indicators are independent of everything outside their
    neighbourhood).  Computing s_a in general needs model-specific
    reasoning, so it is always caller-supplied.
    """

    m: int
    marginals: tuple
    neighborhoods: tuple
    pair_expectations: Mapping
    b3_terms: Union[tuple, str]

    def __init__(self, m, marginals, neighborhoods, pair_expectations, b3_terms):
        m = int(m)
        if m < 1:
            raise ValueError(f"index set size m must be >= 1, got {m}")
        marginals = tuple(float(p) for p in marginals)
        if len(marginals) != m:
            raise ValueError(f"expected {m} marginals, got {len(marginals)}")
        for a, p in enumerate(marginals):
            if not 0.0 < p <= 1.0:
                raise ValueError(f"marginal p_{a}={p} must lie in (0, 1]")

        hoods = []
        for a in range(m):
            try:
                hood = frozenset(int(b) for b in neighborhoods[a])
            except (KeyError, IndexError):
                raise ValueError(f"missing neighbourhood for index {a}") from None
            if a not in hood:
                raise ValueError(f"neighbourhood B_{a} must contain {a} itself")
            if any(b < 0 or b >= m for b in hood):
                raise ValueError(f"neighbourhood B_{a} has out-of-range indices")
            hoods.append(hood)

        pairs = {}
        for (a, b), value in dict(pair_expectations).items():
            a, b, value = int(a), int(b), float(value)
            if a == b:
                raise ValueError(f"pair expectation given for diagonal ({a},{a})")
            cap = min(marginals[a], marginals[b])
            if not 0.0 <= value <= cap + 1e-15:
                raise ValueError(
                    f"p_({a},{b})={value} must lie in [0, min(p_a, p_b)={cap}]"
                )
            for key in ((a, b), (b, a)):
                if key in pairs and pairs[key] != value:
                    raise ValueError(f"conflicting values for pair expectation {key}")
                pairs[key] = value
        for a in range(m):
            for b in hoods[a]:
                if b != a and (a, b) not in pairs:
                    raise ValueError(
                        f"missing pair_expectation for declared neighbour pair ({a},{b})"
                    )

        if isinstance(b3_terms, str):
            if b3_terms != "zero":
                raise ValueError(
                    "b3_terms must be a sequence of s_a values or the literal 'zero'"
                )
            b3_norm: Union[tuple, str] = "zero"
        else:
            b3_norm = tuple(float(s) for s in b3_terms)
            if len(b3_norm) != m:
                raise ValueError(f"expected {m} b3 terms, got {len(b3_norm)}")
            if any(s < 0.0 for s in b3_norm):
                raise ValueError("b3 terms s_a must be >= 0")

        object.__setattr__(self, "m", m)
        object.__setattr__(self, "marginals", marginals)
        object.__setattr__(self, "neighborhoods", tuple(hoods))
        object.__setattr__(self, "pair_expectations", pairs)
        object.__setattr__(self, "b3_terms", b3_norm)


def dependency_spec_from_dict(doc: Mapping) -> DependencySpec:
    """Build a DependencySpec from the documented JSON layout.

    Expected fields: ``m`` (int), ``marginals`` (list, or map of 0-based
    index to probability), ``neighborhoods`` (same keying, values are index
    lists), ``pair_expectations`` (list of [a, b, value] triples) and ``b3``
    (list of s_a values or the string "zero").
    """
    try:
        m = int(doc["m"])
        marginals = _indexed_field(doc["marginals"], m, "marginals")
        neighborhoods = _indexed_field(doc["neighborhoods"], m, "neighborhoods")
        triples = doc["pair_expectations"]
        b3 = doc["b3"]
    except KeyError as exc:
        raise ValueError(f"dependency spec document missing field {exc}") from None
    pairs = {}
    for entry in triples:
        if len(entry) != 3:
            raise ValueError(f"pair_expectations entries must be [a, b, value], got {entry}")
        a, b, value = entry
        pairs[(int(a), int(b))] = float(value)
    return DependencySpec(m, marginals, neighborhoods, pairs, b3)


def _indexed_field(raw, m: int, name: str) -> list:
    # Accept either a plain list or a {"0": ..., "1": ...} map.
    if isinstance(raw, Mapping):
        out = []
        for a in range(m):
            if a in raw:
                out.append(raw[a])
            elif str(a) in raw:
                out.append(raw[str(a)])
            else:
                raise ValueError(f"{name} is missing index {a}")
        return out
    return list(raw)


@dataclass(frozen=True)
class ChenSteinCoefficients:
    """The (b1, b2, b3, lam) tuple plus the index-set size.

    All four quantities live in log space so the random-orientation model at
    n = 100 (with lam^2 ~ 1e50 against 2^-100) stays representable.  The
    index-set size is ``m`` for sizes that fit an int, or ``log2_m`` for
    huge index sets such as the 2^n cube vertices; exactly one is set.
    """

    b1: LogScalar
    b2: LogScalar
    b3: LogScalar
    lam: LogScalar
    m: Optional[int] = None
    log2_m: Optional[float] = None

    def __post_init__(self):
        for name in ("b1", "b2", "b3", "lam"):
            value = getattr(self, name)
            if not isinstance(value, LogScalar):
                object.__setattr__(self, name, LogScalar.from_float(value))
            if getattr(self, name).sign < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.lam.sign == 0:
            raise ValueError("lam must be positive")
        if (self.m is None) == (self.log2_m is None):
            raise ValueError("exactly one of m and log2_m must be given")
        if self.m is not None and self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")

    @property
    def log_m(self) -> float:
        """ln of the index-set size."""
        if self.m is not None:
            return math.log(self.m)
        return self.log2_m * _LN2

    @property
    def log_m_minus_1(self) -> float:
        """ln(m - 1); the 1 is dropped once it is far below log precision."""
        if self.m is not None:
            if self.m < 2:
                raise ValueError("m - 1 requires m >= 2")
            return math.log(self.m - 1)
        if self.log2_m * _LN2 > 710.0:
            return self.log2_m * _LN2
        return math.log(2.0**self.log2_m - 1.0)

    @property
    def log_m_plus_2(self) -> float:
        """ln(m + 2), with the +2 correction dropped below float resolution."""
        log_m = self.log_m
        if log_m > 690.0:
            return log_m
        return log_m + math.log1p(2.0 * math.exp(-log_m))


def coefficients_from_spec(spec: DependencySpec) -> ChenSteinCoefficients:
    """Evaluate the b1/b2/b3 double sums of a materialised dependency spec."""
    b1 = LogScalar.zero()
    b2 = LogScalar.zero()
    lam = LogScalar.zero()
    for a in range(spec.m):
        p_a = LogScalar.from_float(spec.marginals[a])
        lam = lam + p_a
        for b in spec.neighborhoods[a]:
            b1 = b1 + p_a * LogScalar.from_float(spec.marginals[b])
            if b != a:
                b2 = b2 + LogScalar.from_float(spec.pair_expectations[(a, b)])
    if spec.b3_terms == "zero":
        b3 = LogScalar.zero()
    else:
        b3 = LogScalar.zero()
        for s in spec.b3_terms:
            b3 = b3 + LogScalar.from_float(s)
    return ChenSteinCoefficients(b1=b1, b2=b2, b3=b3, lam=lam, m=spec.m)


def coefficients_independent(system) -> ChenSteinCoefficients:
    """Coefficients for independent summands: B_a = {a}, so b1 = sum p_i^2
    and b2 = b3 = 0."""
    system = system if isinstance(system, BernoulliSystem) else BernoulliSystem(system)
    return ChenSteinCoefficients(
        b1=LogScalar.from_float(system.sum_p_squared),
        b2=LogScalar.zero(),
        b3=LogScalar.zero(),
        lam=LogScalar.from_float(system.lam),
        m=system.n,
    )


def log_bh_factor(log_lam: float) -> float:
    """ln((1 - e^-lam)/lam) from ln(lam)."""
    if log_lam > 6.62:  # lam > 750: 1 - e^-lam is exactly 1.0 in doubles
        return -log_lam
    return log1mexp(math.exp(log_lam)) - log_lam


def tv_upper_barbour_hall(lam: float, sum_p_squared: float) -> float:
    """Barbour-Hall upper bound ((1 - e^-lam)/lam) * sum p_i^2."""
    if not lam > 0.0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if sum_p_squared < 0.0:
        raise ValueError("sum_p_squared must be >= 0")
    if sum_p_squared == 0.0:
        return 0.0
    return math.exp(log_bh_factor(math.log(lam)) + math.log(sum_p_squared))


def tv_lower_barbour_hall(lam: float, sum_p_squared: float) -> float:
    """Barbour-Hall lower bound (1/32) min(1, 1/lam) * sum p_i^2."""
    if not lam > 0.0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if sum_p_squared < 0.0:
        raise ValueError("sum_p_squared must be >= 0")
    return (1.0 / 32.0) * min(1.0, 1.0 / lam) * sum_p_squared


def tv_upper_lecam(sum_p_squared: float) -> float:
    """Le Cam's bound: d_TV <= sum p_i^2 (may exceed 1; reported as-is)."""
    if sum_p_squared < 0.0:
        raise ValueError("sum_p_squared must be >= 0")
    return sum_p_squared


def log_tv_upper_agg(coeffs: ChenSteinCoefficients) -> float:
    """ln of the AGG bound (b1+b2)(1-e^-lam)/lam + b3 min(1, 1.4/sqrt(lam))."""
    log_lam = coeffs.lam.logmag
    parts = []
    b12 = coeffs.b1 + coeffs.b2
    if b12.sign != 0:
        parts.append(b12.logmag + log_bh_factor(log_lam))
    if coeffs.b3.sign != 0:
        parts.append(coeffs.b3.logmag + min(0.0, math.log(1.4) - 0.5 * log_lam))
    if not parts:
        return -math.inf
    return log_sum_exp(parts)


def tv_upper_agg(coeffs: ChenSteinCoefficients) -> float:
    """Arratia-Goldstein-Gordon total variation upper bound.

    Returned unclamped: values above 1 are vacuous but faithful to the
    formula, and report builders annotate rather than clamp them.
    """
    log_value = log_tv_upper_agg(coeffs)
    return math.exp(log_value) if log_value > -745.0 else 0.0


@dataclass(frozen=True)
class TvBoundReport:
    """All total-variation bounds available for one system.

    The Barbour-Hall and Le Cam entries assume independent summands and are
    None when only dependency coefficients are known; ``method_notes``
    records vacuous (> 1) values and the unclamped AGG figure.
    """

    lecam_upper: Optional[float]
    bh_upper: Optional[float]
    bh_lower: Optional[float]
    agg_upper: Optional[float]
    method_notes: str = field(default="", compare=False)


def tv_bound_report(
    lam: Optional[float] = None,
    sum_p_squared: Optional[float] = None,
    coeffs: Optional[ChenSteinCoefficients] = None,
) -> TvBoundReport:
    """Assemble every applicable TV bound for one system.

    Pass (lam, sum_p_squared) for an independent system, coefficients for a
    dependent one, or both to see the bounds side by side.
    """
    if coeffs is None and (lam is None or sum_p_squared is None):
        raise ValueError("need either (lam, sum_p_squared) or coefficients")

    notes = []
    lecam = bh_up = bh_lo = agg = None
    if lam is not None and sum_p_squared is not None:
        lecam = tv_upper_lecam(sum_p_squared)
        bh_up = tv_upper_barbour_hall(lam, sum_p_squared)
        bh_lo = tv_lower_barbour_hall(lam, sum_p_squared)
    if coeffs is not None:
        agg = tv_upper_agg(coeffs)
        notes.append(f"agg_unclamped={agg!r}")
    for name, value in (("lecam_upper", lecam), ("agg_upper", agg)):
        if value is not None and value > 1.0:
            notes.append(f"{name} > 1 is vacuous (d_TV <= 1 always)")
    return TvBoundReport(
        lecam_upper=lecam,
        bh_upper=bh_up,
        bh_lower=bh_lo,
        agg_upper=agg,
        method_notes="; ".join(notes),
    )
