from django.test import TestCase

from core.models import Erratum
from core.services import ErratumService, SpanSolverService, SweepRecord, TheoremService
from core.types import SpanQuery, TheoremReport


class ErratumServiceTests(TestCase):

    def setUp(self):
        self.query = SpanQuery(5, 1, 1)
        self.result = SpanSolverService.solve_f(self.query)

    def test_record(self):
        success, erratum, error = ErratumService.record(
            Erratum.Kind.BOUNDS, self.query, '[6, 8]', 'f=7', self.result.certificate, detail='manual',
        )
        self.assertTrue(success)
        self.assertEqual(error, '')
        stored = Erratum.objects.get(pk=erratum.pk)
        self.assertEqual((stored.m, stored.q, stored.r), (5, 1, 1))
        self.assertEqual(stored.certificate['final_precision_bits'], 96)
        self.assertEqual(len(stored.certificate['comparisons']), len(self.result.certificate.comparisons))
        self.assertIn('bounds (m=5, q=1, r=1)', str(stored))

    def test_record_without_certificate(self):
        success, erratum, _ = ErratumService.record(Erratum.Kind.TABLE, self.query, 'RV=8', 'RV=7')
        self.assertTrue(success)
        self.assertEqual(erratum.certificate, {})

    def test_record_sweep_failures(self):
        report = TheoremReport(
            bounds_hold=False, midpoint_holds=False, window_width_ok=True, details=('bounds VIOLATED',),
        )
        record = SweepRecord(
            raw=self.query.as_tuple(), query=self.query, result=self.result, report=report, oracle_f=8,
        )
        stored = ErratumService.record_sweep(record)
        self.assertEqual(
            sorted(erratum.kind for erratum in stored),
            sorted([Erratum.Kind.BOUNDS, Erratum.Kind.MIDPOINT, Erratum.Kind.ORACLE]),
        )
        self.assertEqual(Erratum.objects.count(), 3)

    def test_clean_record_stores_nothing(self):
        report = TheoremService.verify_theorems(self.query, self.result)
        record = SweepRecord(raw=self.query.as_tuple(), query=self.query, result=self.result, report=report)
        self.assertEqual(ErratumService.record_sweep(record), [])
        self.assertFalse(Erratum.objects.exists())

    def test_ordering(self):
        for m in (9, 3):
            ErratumService.record(Erratum.Kind.MIDPOINT, SpanQuery(m, 1, 1), 'x', 'y')
        self.assertEqual([erratum.m for erratum in Erratum.objects.all()], [3, 9])
