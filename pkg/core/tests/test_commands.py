import json
import os
import tempfile
from io import StringIO
from unittest import mock

from django.conf import settings as django_settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from core.exceptions import PrecisionExhausted
from core.models import Erratum


def run(*args, **kwargs):
    out, err = StringIO(), StringIO()
    call_command(*args, stdout=out, stderr=err, **kwargs)
    return out.getvalue(), err.getvalue()


def write_golden(text):
    handle = tempfile.NamedTemporaryFile('w', suffix='.csv', delete=False)
    handle.write(text)
    handle.close()
    return handle.name


class SolveCommandTests(SimpleTestCase):

    def test_plain_output(self):
        out, _ = run('solve', '--m', '5', '--q', '1', '--r', '1')
        self.assertIn('f = 7', out)
        self.assertIn('lb=6 ml=7 mh=8 ub=8', out)
        self.assertIn('backend = interval', out)

    def test_json_output(self):
        out, _ = run('solve', '--m', '23', '--q', '2', '--r', '3', '--format', 'json')
        data = json.loads(out)
        self.assertEqual(data['f'], 9055)
        for key in ('m', 'q', 'r', 'f', 'lb', 'ml', 'mh', 'ub', 'sum_below', 'sum_above', 'backend', 'precision_bits'):
            self.assertIn(key, data)
        self.assertIsInstance(data['sum_above'], str)

    def test_csv_output(self):
        out, _ = run('solve', '--m', '5', '--format', 'csv')
        header, row = out.splitlines()
        self.assertTrue(header.startswith('m,q,r,f,lb,ml,mh,ub,sum_below,sum_above,backend'))
        self.assertTrue(row.startswith('5,1,1,7,6,7,8,8,'))

    def test_oracle_flag(self):
        out, _ = run('solve', '--m', '5', '--oracle', '--digits', '5')
        self.assertIn('sum_below = 0.93654 [exact 25961/27720]', out)
        self.assertIn('backend = exact', out)

    def test_invalid_m(self):
        with self.assertRaises(CommandError) as cm:
            run('solve', '--m', '1', '--q', '1', '--r', '1')
        self.assertEqual(cm.exception.returncode, 2)
        self.assertIn('m must be greater than 1', str(cm.exception))

    def test_invalid_precision(self):
        with self.assertRaises(CommandError) as cm:
            run('solve', '--m', '5', '--precision-start', '16')
        self.assertEqual(cm.exception.returncode, 2)

    def test_digits_must_be_positive(self):
        for digits in ('-3', '0'):
            with self.subTest(digits=digits):
                with self.assertRaises(CommandError) as cm:
                    run('solve', '--m', '5', '--digits', digits)
                self.assertEqual(cm.exception.returncode, 2)
                self.assertIn('--digits must be at least 1', str(cm.exception))

    def test_zero_precision_start_is_rejected(self):
        with self.assertRaises(CommandError) as cm:
            run('solve', '--m', '5', '--precision-start', '0')
        self.assertEqual(cm.exception.returncode, 2)

    def test_oracle_over_cap(self):
        with self.assertRaises(CommandError) as cm:
            run('solve', '--m', '3', '--q', '3', '--r', '3', '--oracle')
        self.assertEqual(cm.exception.returncode, 2)

    def test_precision_exhausted(self):
        with mock.patch(
            'core.services.SpanSolverService.solve_f',
            side_effect=PrecisionExhausted('undecided', precision_bits=65536),
        ):
            with self.assertRaises(CommandError) as cm:
                run('solve', '--m', '5')
        self.assertEqual(cm.exception.returncode, 3)


class BoundsCommandTests(SimpleTestCase):

    def test_json(self):
        out, _ = run('bounds', '--m', '3', '--q', '10', '--format', 'json')
        data = json.loads(out)
        self.assertEqual((data['lb'], data['ml'], data['mh'], data['ub']), (44050, 55063, 55064, 66076))

    def test_plain_mentions_clamp_only_when_needed(self):
        out, _ = run('bounds', '--m', '5')
        self.assertIn('lb=6 ml=7 mh=8 ub=8', out)
        self.assertNotIn('clamped', out)


class TableCommandTests(SimpleTestCase):

    def test_reproduces_golden_file(self):
        out, err = run('table')
        with open(django_settings.HSPAN_TABLE_GOLDEN, newline='') as handle:
            self.assertEqual(out, handle.read())
        self.assertEqual(err, '')
        self.assertIn('6,100000,1,1,171826,171826,171827,171827,171828\n', out)
        self.assertNotIn('\r', out)

    def test_mismatch_exits_one(self):
        path = write_golden('EN,m,q,r,LB,ML,RV,MH,UB\n1,5,1,1,6,7,8,8,8\n')
        self.addCleanup(os.remove, path)
        with self.assertRaises(CommandError) as cm:
            run('table', '--expected', path)
        self.assertEqual(cm.exception.returncode, 1)

    def test_inputs_only_file(self):
        path = write_golden('EN,m,q,r\n1,5,1,1\n2,11,1,1\n')
        self.addCleanup(os.remove, path)
        out, _ = run('table', '--expected', path)
        self.assertEqual(out.splitlines()[2], '2,11,1,1,17,17,18,18,18')

    def test_unreadable_file(self):
        with self.assertRaises(CommandError) as cm:
            run('table', '--expected', '/nonexistent/table.csv')
        self.assertEqual(cm.exception.returncode, 2)


class VerifyCommandTests(SimpleTestCase):

    def test_unit_sweep(self):
        out, _ = run('verify', '--m-max', '100')
        self.assertIn('100% bounds_hold, 100% midpoint_holds (q=r=1 subset)', out)
        self.assertIn('queries: 99 (0 errors)', out)
        self.assertIn('oracle: 99/99 agree', out)

    def test_single_query(self):
        out, _ = run('verify', '--m-max', '2', verbosity=2)
        self.assertIn('queries: 1 (0 errors)', out)
        self.assertIn('(m=2, q=1, r=1): f=2, all flags true', out)

    def test_empty_domain(self):
        with self.assertRaises(CommandError) as cm:
            run('verify', '--m-max', '0')
        self.assertEqual(cm.exception.returncode, 2)

    def test_scaled_sweep_without_midpoint_subset(self):
        out, _ = run('verify', '--m-min', '2', '--m-max', '6', '--q-max', '2', '--r-max', '2', '--oracle-cap', '0')
        self.assertIn('queries: 20 (0 errors)', out)
        self.assertIn('oracle: 0/20 agree', out)

    def test_lemma_and_replica(self):
        out, _ = run('verify', '--m-max', '20', '--lemma-span', '10', '--replica', '--oracle-cap', '0')
        self.assertIn('lemma: 100% of 190 pairs strict', out)
        self.assertIn('replica: 19/19 agree', out)

    def test_failure_exits_one(self):
        with mock.patch('core.services.TheoremService.verify_theorems') as verify:
            verify.return_value.all_hold = False
            verify.return_value.bounds_hold = False
            verify.return_value.midpoint_holds = False
            verify.return_value.window_width_ok = True
            verify.return_value.details = ('bounds VIOLATED',)
            with self.assertRaises(CommandError) as cm:
                run('verify', '--m-max', '3', '--oracle-cap', '0')
        self.assertEqual(cm.exception.returncode, 1)


class LemmaCommandTests(SimpleTestCase):

    def test_holds(self):
        out, _ = run('lemma', '--m', '2', '--n', '3')
        self.assertIn('Q_3^4 = 0.5833333333', out)
        self.assertIn('holds', out)

    def test_degenerate_pair(self):
        with self.assertRaises(CommandError) as cm:
            run('lemma', '--m', '2', '--n', '2')
        self.assertEqual(cm.exception.returncode, 2)


class RecordingTests(TestCase):

    def test_table_mismatch_recorded(self):
        path = write_golden('EN,m,q,r,LB,ML,RV,MH,UB\n1,5,1,1,6,7,8,8,8\n')
        self.addCleanup(os.remove, path)
        with self.assertRaises(CommandError):
            run('table', '--expected', path, '--record')
        erratum = Erratum.objects.get()
        self.assertEqual(erratum.kind, Erratum.Kind.TABLE)
        self.assertEqual((erratum.expected, erratum.observed), ('RV=8', 'RV=7'))
        self.assertEqual(erratum.detail, 'EN 1')

    def test_clean_sweep_records_nothing(self):
        run('verify', '--m-max', '10', '--record')
        self.assertFalse(Erratum.objects.exists())
