# core/utils/formatting.py
from decimal import Decimal, Context, ROUND_DOWN
from fractions import Fraction

from core.types import RealInterval


def render_fraction(value: Fraction, digits: int = 10) -> str:
    """Decimal string of ``value`` truncated to ``digits`` significant digits"""
    if digits < 1:
        raise ValueError(f"digits must be at least 1 (got {digits})")
    context = Context(prec=digits, rounding=ROUND_DOWN)
    quotient = context.divide(Decimal(value.numerator), Decimal(value.denominator))
    return format(quotient, 'f')


def render_value(value, digits: int = 10) -> str:
    """Exact values render directly, enclosures by their midpoint"""
    if isinstance(value, RealInterval):
        return render_fraction(value.midpoint, digits)
    return render_fraction(Fraction(value), digits)


def provenance(value) -> str:
    if isinstance(value, RealInterval):
        return f"enclosure, width < 2^{_width_exponent(value)}, {value.precision_bits} bits"
    value = Fraction(value)
    return f"exact {value.numerator}/{value.denominator}" if value.denominator < 10 ** 12 else "exact"


def _width_exponent(interval: RealInterval) -> int:
    width = interval.width
    if width == 0:
        return -interval.precision_bits
    # num < 2^a and den >= 2^(b-1) give width < 2^(a-b+1)
    return width.numerator.bit_length() - width.denominator.bit_length() + 1
