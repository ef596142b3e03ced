from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import assume, given, settings, strategies as st

from core.bounds import (
    f_bounds, f_bounds_target, f_bounds_unit, lemma_sandwich, lemma_sweep, midpoint_candidates,
    unit_step_sandwich,
)
from core.exceptions import MDomainError, RangeTooLarge
from core.realnum import DEFAULT_POLICY, PrecisionPolicy
from core.types import SpanQuery

LN2 = Fraction('0.6931471805599453094172321214581766')


class FBoundsTests(SimpleTestCase):

    def assertWindow(self, query, lb, ml, mh, ub):
        window = f_bounds(query)
        self.assertEqual((window.lb, window.ml, window.mh, window.ub), (lb, ml, mh, ub))

    def test_table_rows(self):
        self.assertWindow(SpanQuery(5, 1, 1), 6, 7, 8, 8)
        self.assertWindow(SpanQuery(23, 2, 3), 8853, 9054, 9055, 9255)
        self.assertWindow(SpanQuery(3, 10, 1), 44050, 55063, 55064, 66076)
        self.assertWindow(SpanQuery(2, 1, 10), 22025, 33037, 33038, 44050)

    def test_smallest_query(self):
        window = f_bounds(SpanQuery(2, 1, 1))
        self.assertEqual((window.lb, window.ub), (1, 3))
        self.assertEqual(window.lb_raw, 1)
        self.assertEqual(window.width_cap, 3)

    def test_special_cases(self):
        self.assertEqual(f_bounds_unit(5), f_bounds(SpanQuery(5, 1, 1)))
        self.assertEqual(f_bounds_target(3, 10), f_bounds(SpanQuery(3, 10, 1)))
        with self.assertRaises(MDomainError):
            f_bounds_unit(1)

    @given(
        m=st.integers(min_value=2, max_value=10 ** 6),
        q=st.integers(min_value=1, max_value=8),
        r=st.integers(min_value=1, max_value=8),
    )
    @settings(max_examples=100, deadline=None)
    def test_window_invariants(self, m, q, r):
        assume(q * r <= 8)
        window = f_bounds(SpanQuery(m, q, r))
        self.assertTrue(1 <= window.lb <= window.ml < window.mh <= window.ub)
        self.assertEqual(window.mh, window.ml + 1)
        self.assertLessEqual(window.width, window.width_cap)

    def test_records_certifying_precision(self):
        self.assertEqual(f_bounds(SpanQuery(5, 1, 1)).precision_bits, DEFAULT_POLICY.start_bits)
        policy = PrecisionPolicy(start_bits=32)
        window = f_bounds(SpanQuery(10 ** 15, 1, 1), policy)
        self.assertGreater(window.precision_bits, 32)
        self.assertIn(window.precision_bits, list(policy.schedule()))

    def test_stable_under_doubled_precision(self):
        query = SpanQuery(1000, 2, 3)
        coarse = f_bounds(query, DEFAULT_POLICY)
        fine = f_bounds(query, DEFAULT_POLICY.doubled())
        self.assertEqual(
            (coarse.lb, coarse.ml, coarse.mh, coarse.ub, coarse.width_cap),
            (fine.lb, fine.ml, fine.mh, fine.ub, fine.width_cap),
        )


class MidpointCandidateTests(SimpleTestCase):

    def test_table_rows(self):
        self.assertEqual(midpoint_candidates(1000).candidates, (1716, 1717))
        self.assertEqual(midpoint_candidates(105).candidates, (179, 180))
        self.assertEqual(midpoint_candidates(5).candidates, (7, 8))

    def test_rejects_small_m(self):
        with self.assertRaises(MDomainError):
            midpoint_candidates(1)

    @given(st.integers(min_value=2, max_value=10 ** 5))
    @settings(max_examples=100, deadline=None)
    def test_matches_window_split(self, m):
        window = f_bounds(SpanQuery(m, 1, 1))
        self.assertEqual(midpoint_candidates(m).candidates, (window.ml, window.mh))
        self.assertIn(window.ml, window)
        self.assertIn(window.mh, window)


class LemmaTests(SimpleTestCase):

    def test_smallest_pair(self):
        sandwich = lemma_sandwich(2, 3)
        self.assertEqual(sandwich.low, Fraction(7, 12))
        self.assertEqual(sandwich.high, Fraction(5, 6))
        self.assertLess(abs(sandwich.mid.midpoint - LN2), Fraction(1, 10 ** 20))
        self.assertTrue(sandwich.holds)

    def test_table_pair(self):
        sandwich = lemma_sandwich(5, 11)
        self.assertTrue(sandwich.holds)
        self.assertLess(sandwich.low, sandwich.mid.lower)
        self.assertLess(sandwich.mid.upper, sandwich.high)

    def test_range_errors(self):
        with self.assertRaises(RangeTooLarge):
            lemma_sandwich(2, 2)
        with self.assertRaises(RangeTooLarge):
            lemma_sandwich(1, 5)
        with self.assertRaises(RangeTooLarge):
            lemma_sandwich(2, 2 + 10 ** 4 + 1)

    def test_sweep_is_strict(self):
        records = list(lemma_sweep(40, 60))
        self.assertEqual(len(records), 39 * 60)
        self.assertTrue(all(record.holds for record in records))

    def test_sweep_matches_single_pairs(self):
        for record in lemma_sweep(6, 4):
            single = lemma_sandwich(record.m, record.n)
            self.assertEqual((record.low, record.high), (single.low, single.high))

    @given(st.integers(min_value=1, max_value=10 ** 7))
    @settings(max_examples=100, deadline=None)
    def test_unit_step(self, m):
        self.assertTrue(unit_step_sandwich(m))
