from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from core.exceptions import MagnitudeCapError, MDomainError, QDomainError, RDomainError
from core.types import (
    BoundsWindow, Certificate, Comparison, ExactRational, RealInterval, SpanQuery, Verdict,
    validate_query,
)


class ValidateQueryTests(SimpleTestCase):

    def test_accepts_table_inputs(self):
        self.assertEqual(validate_query(5, 1, 1), SpanQuery(5, 1, 1))
        self.assertEqual(validate_query(3, 3, 3).target, 9)

    def test_rejects_m_below_two(self):
        with self.assertRaises(MDomainError) as cm:
            validate_query(1, 1, 1)
        self.assertIn('m must be greater than 1', str(cm.exception))
        self.assertEqual(cm.exception.rule, 'm')

    def test_rejects_q_and_r(self):
        with self.assertRaises(QDomainError):
            validate_query(2, 0, 1)
        with self.assertRaises(RDomainError):
            validate_query(2, 1, 0)

    def test_first_rule_wins(self):
        with self.assertRaises(MDomainError):
            validate_query(0, 0, 0)

    def test_magnitude_cap(self):
        with self.assertRaises(MagnitudeCapError):
            validate_query(2, 8, 9)
        self.assertEqual(validate_query(2, 8, 8).target, 64)
        self.assertEqual(validate_query(2, 8, 9, magnitude_cap=100).target, 72)

    def test_domain_errors_are_value_errors(self):
        with self.assertRaises(ValueError):
            validate_query(2, -1, 1)

    @given(
        m=st.integers(min_value=-3, max_value=40),
        q=st.integers(min_value=-3, max_value=12),
        r=st.integers(min_value=-3, max_value=12),
    )
    @settings(max_examples=200, deadline=None)
    def test_accepts_exactly_the_lattice(self, m, q, r):
        inside = m >= 2 and q >= 1 and r >= 1 and q * r <= 64
        try:
            validate_query(m, q, r)
            accepted = True
        except ValueError:
            accepted = False
        self.assertEqual(accepted, inside)


class ExactRationalTests(SimpleTestCase):

    fractions = st.fractions(min_value=-100, max_value=100, max_denominator=1000)

    @given(fractions, fractions, fractions)
    @settings(max_examples=100, deadline=None)
    def test_addition_is_associative_and_commutative(self, a, b, c):
        self.assertEqual((a + b) + c, a + (b + c))
        self.assertEqual(a + b, b + a)

    def test_always_reduced(self):
        value = ExactRational(6, 8)
        self.assertEqual((value.numerator, value.denominator), (3, 4))


class RealIntervalTests(SimpleTestCase):

    def test_fraction_enclosure_contains_value(self):
        third = RealInterval.from_fraction(Fraction(1, 3), 64)
        self.assertTrue(third.contains(Fraction(1, 3)))
        self.assertLess(third.width, Fraction(1, 2 ** 60))

    def test_arithmetic_rounds_outward(self):
        third = RealInterval.from_fraction(Fraction(1, 3), 64)
        seventh = RealInterval.from_fraction(Fraction(1, 7), 64)
        self.assertTrue((third + seventh).contains(Fraction(10, 21)))
        self.assertTrue((third - seventh).contains(Fraction(4, 21)))
        self.assertTrue((third * seventh).contains(Fraction(1, 21)))
        self.assertTrue((third / seventh).contains(Fraction(7, 3)))
        self.assertTrue((1 - third).contains(Fraction(2, 3)))
        self.assertTrue((-third).contains(Fraction(-1, 3)))

    def test_division_by_interval_with_zero(self):
        straddle = RealInterval(
            RealInterval.from_int(-1, 64).lo, RealInterval.from_int(1, 64).hi, 64
        )
        with self.assertRaises(ZeroDivisionError):
            RealInterval.from_int(1, 64) / straddle

    def test_rejects_reversed_endpoints(self):
        with self.assertRaises(ValueError):
            RealInterval(RealInterval.from_int(2, 64).lo, RealInterval.from_int(1, 64).hi, 64)

    def test_floor_if_certified(self):
        self.assertEqual(RealInterval.from_fraction(Fraction(7, 2), 64).floor_if_certified(), 3)
        self.assertIsNone(RealInterval.from_int(3, 64).floor_if_certified())

    def test_strict_comparisons(self):
        half = RealInterval.from_fraction(Fraction(1, 2), 64)
        self.assertTrue(half.is_below(1))
        self.assertFalse(half.is_above(1))
        self.assertTrue(half.is_above(0))


class BoundsWindowTests(SimpleTestCase):

    def test_membership_and_width(self):
        window = BoundsWindow(lb=6, ml=7, mh=8, ub=8, width_cap=3, lb_raw=6)
        self.assertIn(7, window)
        self.assertNotIn(9, window)
        self.assertEqual(window.width, 2)

    def test_inconsistent_windows_rejected(self):
        with self.assertRaises(ValueError):
            BoundsWindow(lb=5, ml=4, mh=5, ub=8, width_cap=3, lb_raw=5)
        with self.assertRaises(ValueError):
            BoundsWindow(lb=1, ml=2, mh=4, ub=8, width_cap=3, lb_raw=1)


class CertificateTests(SimpleTestCase):

    def test_verdict_lookup(self):
        certificate = Certificate(
            comparisons=(Comparison(11, Verdict.LESS, 96), Comparison(12, Verdict.GREATER, 96)),
            final_precision_bits=96,
        )
        self.assertEqual(certificate.verdict_at(11), Verdict.LESS)
        self.assertIsNone(certificate.verdict_at(13))
        self.assertEqual(certificate.as_dict()['comparisons'][1]['verdict'], 'greater')
