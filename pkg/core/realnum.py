# core/realnum.py
"""
Adaptive-precision certified real arithmetic.

All enclosures are built from ``mpmath.libmp`` primitives with directed
rounding (floor for lower endpoints, ceiling for upper endpoints).
Transcendental primitives are additionally padded by one relative unit at
the working precision.
"""
import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

from mpmath.libmp import (
    from_int, from_rational, mpf_exp, mpf_log, mpf_euler, mpf_abs, mpf_shift,
    mpf_add, mpf_sub, round_floor, round_ceiling, fzero, bernfrac,
)

from core.exceptions import PrecisionExhausted, RangeTooLarge, EnclosureDomainError
from core.types import RealInterval, Backend, Verdict

logger = logging.getLogger(__name__)

GUARD_BITS = 8
DIRECT_SUM_CAP = 10 ** 8
ASYMPTOTIC_MIN_N = 10


@dataclass(frozen=True)
class PrecisionPolicy:
    start_bits: int = 96
    cap_bits: int = 65536
    growth: int = 2
    direct_threshold: int = 10 ** 6

    def __post_init__(self):
        if self.start_bits < 32:
            raise ValueError(f"start_bits must be at least 32 (got {self.start_bits})")
        if self.cap_bits < self.start_bits:
            raise ValueError(f"cap_bits ({self.cap_bits}) must not be below start_bits ({self.start_bits})")
        if self.growth < 2:
            raise ValueError("growth factor must be at least 2")
        if self.direct_threshold < 1:
            raise ValueError("direct_threshold must be positive")

    def schedule(self) -> Iterator[int]:
        """start, start*growth, ... and finally the cap itself"""
        bits = self.start_bits
        while bits < self.cap_bits:
            yield bits
            bits *= self.growth
        yield self.cap_bits

    def doubled(self) -> 'PrecisionPolicy':
        return PrecisionPolicy(
            start_bits=min(self.start_bits * 2, self.cap_bits),
            cap_bits=self.cap_bits,
            growth=self.growth,
            direct_threshold=self.direct_threshold,
        )


DEFAULT_POLICY = PrecisionPolicy()


def _pad(pair, prec):
    """Widen [lo, hi] outward by |endpoint| * 2^-prec on each side"""
    lo, hi = pair
    if lo != fzero:
        lo = mpf_sub(lo, mpf_shift(mpf_abs(lo), -prec), prec + 2, round_floor)
    if hi != fzero:
        hi = mpf_add(hi, mpf_shift(mpf_abs(hi), -prec), prec + 2, round_ceiling)
    return lo, hi


@lru_cache(maxsize=512)
def exp_enclosure(x: int, bits: int) -> RealInterval:
    """Enclosure of e^x for a non-negative integer x"""
    if x < 0:
        raise EnclosureDomainError(f"exp_enclosure expects a non-negative integer (got {x})")
    wp = bits + GUARD_BITS
    point = from_int(x)
    pair = (mpf_exp(point, wp, round_floor), mpf_exp(point, wp, round_ceiling))
    return RealInterval.from_pair(_pad(pair, wp), wp)


def ln_enclosure(num: int, den: int, bits: int) -> RealInterval:
    """Enclosure of ln(num/den); only ratios above 1 are accepted"""
    if den < 1 or num <= den:
        raise EnclosureDomainError(f"ln_enclosure requires num > den >= 1 (got {num}/{den})")
    wp = bits + GUARD_BITS
    lo = mpf_log(from_rational(num, den, wp, round_floor), wp, round_floor)
    hi = mpf_log(from_rational(num, den, wp, round_ceiling), wp, round_ceiling)
    return RealInterval.from_pair(_pad((lo, hi), wp), wp)


class _EulerGammaCache:
    """Enclosure of the Euler-Mascheroni constant, grown on demand"""

    def __init__(self):
        self._lock = threading.Lock()
        self._value = None

    def get(self, bits: int) -> RealInterval:
        value = self._value
        if value is not None and value.precision_bits >= bits:
            return value
        with self._lock:
            if self._value is None or self._value.precision_bits < bits:
                wp = bits + GUARD_BITS
                pair = (mpf_euler(wp, round_floor), mpf_euler(wp, round_ceiling))
                self._value = RealInterval.from_pair(_pad(pair, wp), wp)
                logger.debug(f"Euler gamma enclosure computed at {wp} bits")
            return self._value


_euler_gamma = _EulerGammaCache()


def euler_gamma_enclosure(bits: int) -> RealInterval:
    return _euler_gamma.get(bits)


def _direct_fixed_point(m: int, n: int, bits: int):
    """Floor/ceiling fixed-point sums of 1/i over [m, n] with scale 2^bits"""
    scale = 1 << bits
    lower = sum(scale // i for i in range(m, n + 1))
    # ceil(scale / i) <= floor(scale / i) + 1
    upper = lower + (n - m + 1)
    return lower, upper


def harmonic_span_enclosure(m: int, n: int, bits: int) -> RealInterval:
    """Direct outward-rounded enclosure of Q_m^n = 1/m + ... + 1/n"""
    if m < 1 or n < m:
        raise RangeTooLarge(f"Harmonic span needs 1 <= m <= n (got m={m}, n={n})")
    count = n - m + 1
    if count > DIRECT_SUM_CAP:
        raise RangeTooLarge(
            f"Direct summation of {count} terms exceeds the cap of {DIRECT_SUM_CAP}; "
            f"use the asymptotic backend"
        )
    lower, upper = _direct_fixed_point(m, n, bits)
    return RealInterval.from_fixed_point(lower, upper, bits, bits)


@lru_cache(maxsize=None)
def _bernoulli(index: int) -> Fraction:
    return Fraction(*bernfrac(index))


def _asymptotic_floor(bits: int) -> int:
    """Smallest n whose expansion still reaches 2^-bits before the terms turn"""
    return ASYMPTOTIC_MIN_N + (bits + GUARD_BITS) // 8


def harmonic_number_asymptotic(n: int, bits: int) -> RealInterval:
    """
    Euler-Maclaurin enclosure of H_n.

    H_n = ln n + gamma + 1/(2n) - sum B_2k / (2k n^2k). The series envelops
    H_n, so the first omitted term bounds the remainder. Terms are added
    until that bound drops below 2^-(bits + guard) or the terms start to
    grow again.
    """
    if n < ASYMPTOTIC_MIN_N:
        raise RangeTooLarge(f"Asymptotic expansion needs n >= {ASYMPTOTIC_MIN_N} (got {n})")
    wp = bits + GUARD_BITS
    point = from_int(n)
    ln_n = RealInterval.from_pair(
        _pad((mpf_log(point, wp, round_floor), mpf_log(point, wp, round_ceiling)), wp), wp
    )
    tolerance = Fraction(1, 1 << wp)
    correction = Fraction(1, 2 * n)
    previous = None
    k = 1
    while True:
        term = _bernoulli(2 * k) / (2 * k * n ** (2 * k))
        if abs(term) < tolerance or (previous is not None and abs(term) >= abs(previous)):
            remainder = abs(term)
            break
        correction -= term
        previous = term
        k += 1
    low, high = correction - remainder, correction + remainder
    tail = RealInterval(
        from_rational(low.numerator, low.denominator, wp, round_floor),
        from_rational(high.numerator, high.denominator, wp, round_ceiling),
        wp,
    )
    return ln_n + euler_gamma_enclosure(bits) + tail


def harmonic_number_enclosure(n: int, bits: int, direct_threshold: int = 0) -> RealInterval:
    """
    H_n, summed directly when n is within direct_threshold or too small for
    the expansion to reach the requested precision.
    """
    if n < 1:
        return RealInterval.from_int(0, bits)
    if n <= min(direct_threshold, DIRECT_SUM_CAP) or n < _asymptotic_floor(bits):
        return harmonic_span_enclosure(1, n, bits)
    return harmonic_number_asymptotic(n, bits)


def span_enclosure(m: int, n: int, bits: int, direct_threshold: int = 10 ** 6):
    """
    Enclosure of Q_m^n with automatic backend choice.

    Returns (interval, backend): direct summation up to direct_threshold
    terms, H_n - H_{m-1} above that. Each harmonic number is itself summed
    directly when it is short enough, so the width keeps shrinking as bits
    grow.
    """
    if n - m + 1 <= direct_threshold:
        return harmonic_span_enclosure(m, n, bits), Backend.INTERVAL
    enclosure = (
        harmonic_number_enclosure(n, bits, direct_threshold)
        - harmonic_number_enclosure(m - 1, bits, direct_threshold)
    )
    return enclosure, Backend.ASYMPTOTIC


@dataclass(frozen=True)
class SpanComparison:
    n: int
    verdict: Verdict
    precision_bits: int
    enclosure: RealInterval
    backend: Backend


def compare_span_to_target(m: int, n: int, target: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> SpanComparison:
    """
    Strict comparison of Q_m^n against an integer target.

    Precision grows along the policy schedule until the enclosure excludes
    the target. A tie is impossible (Q_m^n is never an integer), so running
    out of precision is reported as PrecisionExhausted.
    """
    if m < 2 or n < m:
        raise RangeTooLarge(f"Comparison needs 2 <= m <= n (got m={m}, n={n})")
    if target < 1:
        raise ValueError(f"target must be a positive integer (got {target})")

    for bits in policy.schedule():
        enclosure, backend = span_enclosure(m, n, bits, policy.direct_threshold)
        if enclosure.is_below(target):
            return SpanComparison(n, Verdict.LESS, bits, enclosure, backend)
        if enclosure.is_above(target):
            return SpanComparison(n, Verdict.GREATER, bits, enclosure, backend)
        logger.info(f"Q_{m}^{n} vs {target} undecided at {bits} bits, refining")

    raise PrecisionExhausted(
        f"Could not separate Q_{m}^{n} from {target} within {policy.cap_bits} bits",
        precision_bits=policy.cap_bits,
    )


def certify_floor(expr: Callable[[int], RealInterval], policy: PrecisionPolicy = DEFAULT_POLICY) -> tuple[int, int]:
    """
    Floor of a real given as a refinable enclosure ``expr(bits)``, with the
    precision that certified it.

    The value must be a non-integer; k is returned once an enclosure lies
    strictly inside (k, k + 1).
    """
    for bits in policy.schedule():
        k = expr(bits).floor_if_certified()
        if k is not None:
            return k, bits
        logger.info(f"Floor undecided at {bits} bits, refining")
    raise PrecisionExhausted(
        f"Floor could not be certified within {policy.cap_bits} bits",
        precision_bits=policy.cap_bits,
    )


def certified_floor(expr: Callable[[int], RealInterval], policy: PrecisionPolicy = DEFAULT_POLICY) -> int:
    return certify_floor(expr, policy)[0]


def certified_ceiling(expr: Callable[[int], RealInterval], policy: PrecisionPolicy = DEFAULT_POLICY) -> int:
    # non-integer value: ceiling is floor + 1
    return certified_floor(expr, policy) + 1
