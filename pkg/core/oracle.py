# core/oracle.py
"""
Brute-force ground truth for the term count.

``brute_force_f`` accumulates 1/(r*m) + 1/(r*(m+1)) + ... in exact
rational arithmetic and stops at the first sum above q. The float replica
reruns the double-precision program that printed the published table (bound
formulas included) with Kahan-compensated accumulation.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from core.exceptions import CapExceeded
from core.types import SpanQuery

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_CAP = 10 ** 4
DEFAULT_REPLICA_CAP = 10 ** 7


@dataclass(frozen=True)
class OracleResult:
    f: int
    sum_below: Fraction
    sum_above: Fraction


def exact_harmonic_span(m: int, n: int) -> Fraction:
    """Q_m^n as a reduced fraction"""
    total = Fraction(0)
    for i in range(m, n + 1):
        total += Fraction(1, i)
    return total


def brute_force_f(query: SpanQuery, cap: int = DEFAULT_ORACLE_CAP) -> OracleResult:
    """
    Count of terms whose scaled sum is the largest one strictly below q.

    Raises CapExceeded when more than ``cap`` terms would be needed.
    """
    # Cheap float sizing pass so hopeless queries fail before the exact loop
    estimate = replica_f(query, max_terms=cap + 3)
    if estimate is None or estimate > cap + 2:
        raise CapExceeded(f"Exact oracle needs more than {cap} terms for {query}", cap=cap)

    q, r = query.q, query.r
    total = Fraction(0)
    count = 0
    denominator = query.m
    while True:
        extended = total + Fraction(1, r * denominator)
        if extended >= q:
            break
        total = extended
        count += 1
        denominator += 1
        if count > cap:
            raise CapExceeded(f"Exact oracle needs more than {cap} terms for {query}", cap=cap)

    sum_above = extended
    logger.debug(f"Oracle {query}: f={count}")
    return OracleResult(f=count, sum_below=total, sum_above=sum_above)


class KahanAccumulator:
    """Running double-precision sum with Kahan compensation"""

    def __init__(self):
        self.sum = 0.0
        self.carry = 0.0

    def add(self, value):
        value -= self.carry
        previous_sum = self.sum
        self.sum += value
        self.carry = (self.sum - previous_sum) - value

    def __float__(self):
        return self.sum


def replica_f(query: SpanQuery, max_terms: int = DEFAULT_REPLICA_CAP):
    """
    The double-precision "Real Value" loop, with compensated summation.

    Returns None when the loop would run past ``max_terms``.
    """
    q, r = float(query.q), float(query.r)
    acc = KahanAccumulator()
    i = 0
    m = float(query.m)
    while True:
        acc.add(1.0 / (r * m))
        i += 1
        m += 1.0
        if not float(acc) < q:
            break
        if i > max_terms:
            return None
    return i - 1


@dataclass(frozen=True)
class FloatProgramOutput:
    lower_bound: int
    upper_bound: int
    midlow: int
    midhigh: int
    real_value: int


def replicate_float_program(query: SpanQuery, max_terms: int = DEFAULT_REPLICA_CAP) -> FloatProgramOutput:
    """LB, UB, midpoints and the Real Value as the double-precision program prints them"""
    growth = math.exp(query.q * query.r)
    m = float(query.m)
    real_value = replica_f(query, max_terms=max_terms)
    if real_value is None:
        raise CapExceeded(f"Float replica needs more than {max_terms} terms for {query}", cap=max_terms)
    return FloatProgramOutput(
        lower_bound=math.ceil((growth - 1) * m - growth),
        upper_bound=math.floor((growth - 1) * m),
        midlow=math.floor((growth - 1) * m - growth / 2),
        midhigh=math.ceil((growth - 1) * m - growth / 2),
        real_value=real_value,
    )
