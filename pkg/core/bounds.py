# core/bounds.py
"""
Closed-form windows for the term count f.

With F = m(e^{qr} - 1):

    ceil(F - e^{qr}) <= f(m, q, r) <= floor(F)

and the window splits at floor(F - e^{qr}/2) / floor(F - e^{qr}/2) + 1.
For q = r = 1 those two integers are the midpoint candidates, one of
which is f itself.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from core.exceptions import MDomainError, RangeTooLarge
from core.oracle import exact_harmonic_span
from core.realnum import (
    DEFAULT_POLICY, PrecisionPolicy, certified_floor, certify_floor,
    exp_enclosure, ln_enclosure,
)
from core.types import BoundsWindow, MidpointCandidates, RealInterval, SpanQuery, validate_query

logger = logging.getLogger(__name__)

LEMMA_TERM_CAP = 10 ** 4


def _upper_expr(m: int, x: int):
    def expr(bits):
        return (exp_enclosure(x, bits) - 1) * m
    return expr


def _lower_expr(m: int, x: int):
    def expr(bits):
        growth = exp_enclosure(x, bits)
        return (growth - 1) * m - growth
    return expr


def _split_expr(m: int, x: int):
    def expr(bits):
        growth = exp_enclosure(x, bits)
        return (growth - 1) * m - growth / 2
    return expr


def f_bounds(query: SpanQuery, policy: PrecisionPolicy = DEFAULT_POLICY) -> BoundsWindow:
    """Bound window [lb, ub] with the (ml, mh) split, every floor/ceiling certified"""
    m, x = query.m, query.target

    ub, ub_bits = certify_floor(_upper_expr(m, x), policy)
    lb_floor, lb_bits = certify_floor(_lower_expr(m, x), policy)
    ml, ml_bits = certify_floor(_split_expr(m, x), policy)
    cap_floor, cap_bits = certify_floor(lambda bits: exp_enclosure(x, bits), policy)
    # non-integer values: ceiling is floor + 1
    lb_raw, width_cap = lb_floor + 1, cap_floor + 1

    window = BoundsWindow(
        lb=max(1, lb_raw),
        ml=ml,
        mh=ml + 1,
        ub=ub,
        width_cap=width_cap,
        lb_raw=lb_raw,
        precision_bits=max(ub_bits, lb_bits, ml_bits, cap_bits),
    )
    logger.debug(f"Bounds for {query}: {window}")
    return window


def f_bounds_unit(m: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> BoundsWindow:
    """Window for q = r = 1: ceil(m(e-1) - e) <= f(m) <= floor(m(e-1))"""
    return f_bounds(validate_query(m, 1, 1), policy)


def f_bounds_target(m: int, q: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> BoundsWindow:
    """Window for r = 1: ceil(m(e^q-1) - e^q) <= f(m, q) <= floor(m(e^q-1))"""
    return f_bounds(validate_query(m, q, 1), policy)


def midpoint_candidates(m: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> MidpointCandidates:
    """floor(m(e-1) - e/2) and its successor; meaningful for q = r = 1 only"""
    if m < 2:
        raise MDomainError(f"m must be greater than 1 (got {m})", value=m)
    return MidpointCandidates(c=certified_floor(_split_expr(m, 1), policy))


@dataclass(frozen=True)
class LemmaSandwich:
    m: int
    n: int
    low: Fraction
    mid: RealInterval
    high: Fraction
    holds: bool


def _decide_sandwich(m, n, low, high, policy):
    """Refine ln((n+1)/m) until it is strictly inside or strictly outside (low, high)"""
    mid = None
    for bits in policy.schedule():
        mid = ln_enclosure(n + 1, m, bits)
        if low < mid.lower and mid.upper < high:
            return mid, True
        if mid.upper <= low or mid.lower >= high:
            return mid, False
    logger.warning(f"Lemma sandwich for m={m}, n={n} undecided at {policy.cap_bits} bits")
    return mid, False


def lemma_sandwich(m: int, n: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> LemmaSandwich:
    """Q_{m+1}^{n+1} < ln((n+1)/m) < Q_m^n, with exact outer sums"""
    if m < 2 or n <= m:
        raise RangeTooLarge(f"Lemma needs 2 <= m < n (got m={m}, n={n})")
    if n - m > LEMMA_TERM_CAP:
        raise RangeTooLarge(f"Lemma range of {n - m} terms exceeds the exact cap of {LEMMA_TERM_CAP}")

    low = exact_harmonic_span(m + 1, n + 1)
    high = exact_harmonic_span(m, n)
    mid, holds = _decide_sandwich(m, n, low, high, policy)
    return LemmaSandwich(m=m, n=n, low=low, mid=mid, high=high, holds=holds)


def lemma_sweep(m_max: int, span: int, policy: PrecisionPolicy = DEFAULT_POLICY):
    """
    Every (m, n) with 2 <= m < n <= m + span and m <= m_max.

    Yields LemmaSandwich records; the exact sums are carried forward
    incrementally along n.
    """
    for m in range(2, m_max + 1):
        high = Fraction(1, m)
        low = Fraction(1, m + 1)
        for n in range(m + 1, m + span + 1):
            high += Fraction(1, n)
            low += Fraction(1, n + 1)
            mid, holds = _decide_sandwich(m, n, low, high, policy)
            yield LemmaSandwich(m=m, n=n, low=low, mid=mid, high=high, holds=holds)


def unit_step_sandwich(m: int, bits: int = 96) -> bool:
    """1/(m+1) < ln((m+1)/m) < 1/m"""
    step = ln_enclosure(m + 1, m, bits)
    return Fraction(1, m + 1) < step.lower and step.upper < Fraction(1, m)
