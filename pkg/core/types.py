# core/types.py
"""
Value types shared by the span engine.

Everything here is an immutable value: the interval endpoints are raw
``mpmath.libmp`` mpf tuples (sign, mantissa, exponent, bitcount), i.e.
dyadic rationals, and every arithmetic operation rounds outward.
"""
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

from mpmath.libmp import (
    from_int, from_man_exp, from_rational, to_rational,
    mpf_lt, mpf_gt, round_floor, round_ceiling,
)
from mpmath.libmp.libmpi import mpi_add, mpi_sub, mpi_mul, mpi_div, mpi_neg

from core.exceptions import (
    MDomainError, QDomainError, RDomainError, MagnitudeCapError,
)


# Harmonic sums at oracle scale are plain reduced fractions.
ExactRational = Fraction


class Verdict(enum.Enum):
    """Outcome of a strict comparison against an integer target"""
    LESS = 'less'
    GREATER = 'greater'


class Backend(enum.Enum):
    EXACT = 'exact'
    INTERVAL = 'interval'
    ASYMPTOTIC = 'asymptotic'


@dataclass(frozen=True)
class SpanQuery:
    m: int
    q: int
    r: int

    @property
    def target(self) -> int:
        """Integer the unscaled span Q_m^n is compared with (q*r)"""
        return self.q * self.r

    @property
    def is_unit(self) -> bool:
        return self.q == 1 and self.r == 1

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.m, self.q, self.r)

    def __str__(self):
        return f"(m={self.m}, q={self.q}, r={self.r})"


@dataclass(frozen=True)
class RealInterval:
    """Outward-rounded enclosure [lo, hi] of a real number"""
    lo: tuple
    hi: tuple
    precision_bits: int

    def __post_init__(self):
        if mpf_gt(self.lo, self.hi):
            raise ValueError("Interval lower endpoint exceeds upper endpoint")

    # Constructors

    @classmethod
    def from_int(cls, value: int, bits: int) -> 'RealInterval':
        point = from_int(value)
        return cls(point, point, bits)

    @classmethod
    def from_fraction(cls, value, bits: int) -> 'RealInterval':
        value = Fraction(value)
        return cls(
            from_rational(value.numerator, value.denominator, bits, round_floor),
            from_rational(value.numerator, value.denominator, bits, round_ceiling),
            bits,
        )

    @classmethod
    def from_fixed_point(cls, lower: int, upper: int, scale_bits: int, bits: int) -> 'RealInterval':
        """Enclosure [lower / 2^scale_bits, upper / 2^scale_bits], exact endpoints"""
        return cls(from_man_exp(lower, -scale_bits), from_man_exp(upper, -scale_bits), bits)

    @classmethod
    def from_pair(cls, pair, bits: int) -> 'RealInterval':
        lo, hi = pair
        return cls(lo, hi, bits)

    # Exact views of the endpoints

    @property
    def lower(self) -> Fraction:
        return Fraction(*to_rational(self.lo))

    @property
    def upper(self) -> Fraction:
        return Fraction(*to_rational(self.hi))

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    @property
    def pair(self):
        return (self.lo, self.hi)

    def contains(self, value) -> bool:
        value = Fraction(value)
        return self.lower <= value <= self.upper

    def contains_interval(self, other: 'RealInterval') -> bool:
        return self.lower <= other.lower and other.upper <= self.upper

    def overlaps(self, other: 'RealInterval') -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def is_below(self, value: int) -> bool:
        """Certified strict hi < value"""
        return mpf_lt(self.hi, from_int(value))

    def is_above(self, value: int) -> bool:
        """Certified strict lo > value"""
        return mpf_gt(self.lo, from_int(value))

    def floor_if_certified(self) -> Optional[int]:
        """k when k < lo <= hi < k + 1, otherwise None"""
        k = math.floor(self.lower)
        if self.lower > k and self.upper < k + 1:
            return k
        return None

    # Arithmetic, always rounded outward

    def _coerce(self, other) -> 'RealInterval':
        if isinstance(other, RealInterval):
            return other
        if isinstance(other, int):
            return RealInterval.from_int(other, self.precision_bits)
        return RealInterval.from_fraction(other, self.precision_bits)

    def _prec(self, other: 'RealInterval') -> int:
        return max(self.precision_bits, other.precision_bits)

    def __add__(self, other):
        other = self._coerce(other)
        prec = self._prec(other)
        return RealInterval.from_pair(mpi_add(self.pair, other.pair, prec), prec)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = self._coerce(other)
        prec = self._prec(other)
        return RealInterval.from_pair(mpi_sub(self.pair, other.pair, prec), prec)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __mul__(self, other):
        other = self._coerce(other)
        prec = self._prec(other)
        return RealInterval.from_pair(mpi_mul(self.pair, other.pair, prec), prec)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.lower <= 0 <= other.upper:
            raise ZeroDivisionError("Interval divisor contains zero")
        prec = self._prec(other)
        return RealInterval.from_pair(mpi_div(self.pair, other.pair, prec), prec)

    def __neg__(self):
        return RealInterval.from_pair(mpi_neg(self.pair, self.precision_bits), self.precision_bits)

    def __str__(self):
        return f"[{float(self.lower)!r}, {float(self.upper)!r}] @{self.precision_bits}b"


@dataclass(frozen=True)
class BoundsWindow:
    lb: int
    ml: int
    mh: int
    ub: int
    width_cap: int
    lb_raw: int
    precision_bits: int = 0

    def __post_init__(self):
        if not (1 <= self.lb <= self.ml < self.mh <= self.ub):
            raise ValueError(f"Inconsistent bounds window: {self}")
        if self.mh != self.ml + 1:
            raise ValueError(f"Midpoint candidates must be consecutive: {self}")

    @property
    def width(self) -> int:
        return self.ub - self.lb

    def __contains__(self, f) -> bool:
        return self.lb <= f <= self.ub


@dataclass(frozen=True)
class MidpointCandidates:
    c: int

    @property
    def candidates(self) -> Tuple[int, int]:
        return (self.c, self.c + 1)

    def __contains__(self, f) -> bool:
        return f in self.candidates


@dataclass(frozen=True)
class Comparison:
    n: int
    verdict: Verdict
    precision_bits: int

    def as_dict(self):
        return {'n': self.n, 'verdict': self.verdict.value, 'precision_bits': self.precision_bits}


@dataclass(frozen=True)
class Certificate:
    comparisons: Tuple[Comparison, ...]
    final_precision_bits: int

    def __post_init__(self):
        for comparison in self.comparisons:
            if not isinstance(comparison.verdict, Verdict):
                raise ValueError(f"Non-strict verdict recorded at n={comparison.n}")

    def verdict_at(self, n: int) -> Optional[Verdict]:
        for comparison in reversed(self.comparisons):
            if comparison.n == n:
                return comparison.verdict
        return None

    def as_dict(self):
        return {
            'comparisons': [c.as_dict() for c in self.comparisons],
            'final_precision_bits': self.final_precision_bits,
        }


SpanValue = Union[Fraction, RealInterval]


@dataclass(frozen=True)
class SpanResult:
    query: SpanQuery
    f: int
    sum_below: SpanValue
    sum_above: SpanValue
    backend: Backend
    certificate: Certificate
    window: BoundsWindow
    erratum: Optional[str] = None

    @property
    def precision_bits(self) -> int:
        return self.certificate.final_precision_bits

    @property
    def is_exact(self) -> bool:
        return self.backend is Backend.EXACT


@dataclass(frozen=True)
class TheoremReport:
    bounds_hold: bool
    midpoint_holds: Optional[bool]
    window_width_ok: bool
    details: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def all_hold(self) -> bool:
        return self.bounds_hold and self.window_width_ok and self.midpoint_holds is not False


_RULE_ERRORS = {
    'm': MDomainError,
    'q': QDomainError,
    'r': RDomainError,
}


def validate_query(m, q, r, magnitude_cap: Optional[int] = None) -> SpanQuery:
    """
    Validate a raw (m, q, r) triple.

    Raises the domain error for the first violated rule, in m, q, r,
    magnitude-cap order.
    """
    from core.serializers import SpanQuerySerializer
    from core.conf import engine_settings

    if magnitude_cap is None:
        magnitude_cap = engine_settings().magnitude_cap

    serializer = SpanQuerySerializer(
        data={'m': m, 'q': q, 'r': r},
        context={'magnitude_cap': magnitude_cap},
    )
    if serializer.is_valid():
        return SpanQuery(**serializer.validated_data)

    errors = serializer.errors
    for name, error_class in _RULE_ERRORS.items():
        if name in errors:
            raise error_class(str(errors[name][0]), value={'m': m, 'q': q, 'r': r}[name])
    message = str(errors.get('non_field_errors', ['Invalid query'])[0])
    raise MagnitudeCapError(message, value=(m, q, r))
