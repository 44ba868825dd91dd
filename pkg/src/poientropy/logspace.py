"""Log-domain scalar arithmetic and special functions.

Everything downstream (Chen-Stein coefficients, truncation factors, the
random-orientation model on the n-cube) routinely produces magnitudes like
2**-100 or C(100, 70)**2 / 2**100 that a plain float cannot hold without an
overflow/underflow cliff.  This module provides a signed log-magnitude scalar
(:class:`LogScalar`) plus the handful of special functions the bound
formulas need: lgamma, log-binomial, log-sum-exp and log(1 - e^-x).

All functions are pure; values are immutable and safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "LogScalar",
    "log_gamma",
    "log_binomial",
    "log_sum_exp",
    "log1mexp",
]

_LN2 = math.log(2.0)

# Largest n for which the binomial coefficient is taken through exact integer
# arithmetic; beyond that the lgamma route is used.  Both routes are tested
# to agree on the overlap.
_EXACT_BINOMIAL_MAX_N = 64


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for x > 0.

    Raises ValueError for x <= 0 (the reflection branch is never needed
    here, and silently returning values at the poles would hide bugs).
    """
    if x <= 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k) for integers 0 <= k <= n.

    Exact integer arithmetic for n <= 64, lgamma otherwise; the two branches
    agree to better than 1e-10 relative on the overlap, which doubles as an
    internal cross-check of the lgamma route.
    """
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"log_binomial requires 0 <= k <= n, got n={n}, k={k}")
    if n <= _EXACT_BINOMIAL_MAX_N:
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_sum_exp(xs: Iterable[float]) -> float:
    """ln(sum of e^x over xs), evaluated without overflow.

    An empty sequence returns -inf (the log of an empty sum), by convention.
    """
    values = list(xs)
    if not values:
        return -math.inf
    hi = max(values)
    if math.isinf(hi):  # +inf dominates; all -inf stays -inf
        return hi
    return hi + math.log(math.fsum(math.exp(x - hi) for x in values))


def log1mexp(x: float) -> float:
    """ln(1 - e^-x) for x > 0.

    Uses the standard two-branch split at x = ln 2: below it 1 - e^-x loses
    precision, so go through expm1; above it log1p is the accurate form.
    """
    if x <= 0.0:
        raise ValueError(f"log1mexp requires x > 0, got {x}")
    if x < _LN2:
        return math.log(-math.expm1(-x))
    return math.log1p(-math.exp(-x))


def _lse2(a: float, b: float) -> float:
    # Two-term log-sum-exp; symmetric in (a, b) so LogScalar addition commutes
    # bit-for-bit.
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


@dataclass(frozen=True)
class LogScalar:
    """A real number stored as sign and natural log of magnitude.

    ``sign`` is -1, 0 or +1 and ``logmag`` is ln|x| (-inf iff sign == 0).
    Multiplication and division are exact in log space; addition and
    subtraction route through log-sum-exp with sign handling, so the usual
    caveat about catastrophic cancellation of nearly equal magnitudes
    applies, exactly as for floats.
    """

    sign: int
    logmag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if (self.sign == 0) != (self.logmag == -math.inf):
            raise ValueError("sign == 0 must coincide with logmag == -inf")
        if math.isnan(self.logmag):
            raise ValueError("logmag must not be NaN")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(0, -math.inf)

    @classmethod
    def one(cls) -> "LogScalar":
        return cls(1, 0.0)

    @classmethod
    def from_float(cls, x) -> "LogScalar":
        """Build from a float or an (arbitrarily large) int."""
        if isinstance(x, LogScalar):
            return x
        if x == 0:
            return cls.zero()
        sign = 1 if x > 0 else -1
        # math.log accepts big ints directly, so exact integer inputs such as
        # binomial coefficients keep full log precision.
        return cls(sign, math.log(x if sign > 0 else -x))

    @classmethod
    def from_log(cls, logmag: float, sign: int = 1) -> "LogScalar":
        if sign == 0 or logmag == -math.inf:
            return cls.zero()
        return cls(1 if sign > 0 else -1, logmag)

    # -- conversions ---------------------------------------------------------

    def to_float(self) -> float:
        """Nearest float; underflows to 0.0 and overflows to +-inf."""
        if self.sign == 0:
            return 0.0
        if self.logmag > 709.0:  # exp overflow threshold
            return math.inf * self.sign
        return self.sign * math.exp(self.logmag)

    def __float__(self) -> float:
        return self.to_float()

    def __abs__(self) -> "LogScalar":
        return LogScalar.from_log(self.logmag, 1) if self.sign else LogScalar.zero()

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self) -> "LogScalar":
        if self.sign == 0:
            return self
        return LogScalar(-self.sign, self.logmag)

    def __mul__(self, other: "LogScalar") -> "LogScalar":
        other = LogScalar.from_float(other)
        if self.sign == 0 or other.sign == 0:
            return LogScalar.zero()
        return LogScalar(self.sign * other.sign, self.logmag + other.logmag)

    def __truediv__(self, other: "LogScalar") -> "LogScalar":
        other = LogScalar.from_float(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by zero LogScalar")
        if self.sign == 0:
            return LogScalar.zero()
        return LogScalar(self.sign * other.sign, self.logmag - other.logmag)

    def __add__(self, other: "LogScalar") -> "LogScalar":
        other = LogScalar.from_float(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        if self.sign == other.sign:
            return LogScalar(self.sign, _lse2(self.logmag, other.logmag))
        # Opposite signs: the larger magnitude wins.
        if self.logmag == other.logmag:
            return LogScalar.zero()
        big, small = (self, other) if self.logmag > other.logmag else (other, self)
        return LogScalar(big.sign, big.logmag + log1mexp(big.logmag - small.logmag))

    def __sub__(self, other: "LogScalar") -> "LogScalar":
        return self + (-LogScalar.from_float(other))

    # -- ordering ------------------------------------------------------------

    def _cmp(self, other: "LogScalar") -> int:
        other = LogScalar.from_float(other)
        if self.sign != other.sign:
            return -1 if self.sign < other.sign else 1
        if self.sign == 0:
            return 0
        if self.logmag == other.logmag:
            return 0
        mag_cmp = -1 if self.logmag < other.logmag else 1
        return mag_cmp * self.sign

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogScalar(0)"
        prefix = "-" if self.sign < 0 else ""
        return f"LogScalar({prefix}exp({self.logmag!r}))"
