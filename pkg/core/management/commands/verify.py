import logging

from django.core.management.base import BaseCommand, CommandError

from core.bounds import lemma_sweep
from core.conf import engine_settings
from core.management.commands._common import (
    EXIT_INVALID, EXIT_MISMATCH, add_precision_argument, policy_from_options,
)
from core.models import Erratum
from core.oracle import replica_f
from core.services import ErratumService, SweepService

logger = logging.getLogger(__name__)


def _percent(passed, total):
    if total == 0:
        return 'n/a'
    if passed == total:
        return '100%'
    return f"{100 * passed / total:.2f}%"


class Command(BaseCommand):
    help = 'Sweep (m, q, r) ranges and check the closed-form claims against certified answers.'

    def add_arguments(self, parser):
        parser.add_argument('--m-min', type=int, default=2, dest='m_min')
        parser.add_argument('--m-max', type=int, default=100, dest='m_max')
        parser.add_argument('--q-max', type=int, default=1, dest='q_max')
        parser.add_argument('--r-max', type=int, default=1, dest='r_max')
        parser.add_argument('--jobs', type=int, default=None, help='Worker processes (default HSPAN_SWEEP_JOBS)')
        parser.add_argument(
            '--oracle-cap', type=int, default=None, dest='oracle_cap',
            help='Exact oracle term cap; 0 disables the oracle cross-check',
        )
        parser.add_argument(
            '--lemma-span', type=int, default=0, dest='lemma_span',
            help='Also check the log sandwich for n up to m + span',
        )
        parser.add_argument('--replica', action='store_true', help='Compare the double-precision loop too')
        parser.add_argument('--record', action='store_true', help='Persist every erratum found')
        add_precision_argument(parser)

    def handle(self, *args, **options):
        conf = engine_settings()
        m_min, m_max = options['m_min'], options['m_max']
        if m_max < 2 or m_min > m_max:
            raise CommandError(f"Empty m range [{m_min}, {m_max}]; m must be greater than 1", returncode=EXIT_INVALID)
        if options['q_max'] < 1 or options['r_max'] < 1:
            raise CommandError("q-max and r-max must be positive", returncode=EXIT_INVALID)
        jobs = options['jobs'] or conf.sweep_jobs
        oracle_cap = conf.oracle_cap if options['oracle_cap'] is None else options['oracle_cap']
        policy = policy_from_options(options)

        records = SweepService.sweep(
            range(max(m_min, 2), m_max + 1),
            range(1, options['q_max'] + 1),
            range(1, options['r_max'] + 1),
            policy=policy,
            jobs=jobs,
            oracle_cap=oracle_cap,
        )

        solved = [record for record in records if record.result is not None]
        errors = [record for record in records if record.error is not None]
        unit = [record for record in solved if record.query.is_unit]
        checked = [record for record in solved if record.oracle_f is not None]

        bounds_ok = sum(1 for record in solved if record.report.bounds_hold)
        midpoint_ok = sum(1 for record in unit if record.report.midpoint_holds)
        width_ok = sum(1 for record in solved if record.report.window_width_ok)
        oracle_ok = sum(1 for record in checked if record.oracle_agrees)

        if options['verbosity'] >= 2:
            for record in solved:
                flags = 'all flags true' if record.report.all_hold else '; '.join(record.report.details)
                self.stdout.write(f"{record.query}: f={record.result.f}, {flags}")

        self.stdout.write(f"queries: {len(records)} ({len(errors)} errors)")
        self.stdout.write(
            f"{_percent(bounds_ok, len(solved))} bounds_hold, "
            f"{_percent(midpoint_ok, len(unit))} midpoint_holds (q=r=1 subset)"
        )
        self.stdout.write(f"{_percent(width_ok, len(solved))} window_width_ok")
        self.stdout.write(
            f"oracle: {oracle_ok}/{len(checked)} agree ({len(solved) - len(checked)} beyond cap)"
        )

        failures = [record for record in records if not record.ok]
        for record in failures:
            reason = record.error or '; '.join(record.report.details)
            if record.oracle_agrees is False:
                reason = f"{reason}; oracle f={record.oracle_f}"
            self.stderr.write(f"FAILED {record.raw}: {reason}")

        divergences = self._replica(solved) if options['replica'] else []
        lemma_failures = self._lemma(m_max, options['lemma_span'], policy) if options['lemma_span'] else []

        errata = 0
        if options['record']:
            for record in failures:
                errata += len(ErratumService.record_sweep(record))
            for record, replica in divergences:
                success, _, _ = ErratumService.record(
                    Erratum.Kind.TABLE, record.query, f"f={record.result.f}", f"f={replica}",
                    record.result.certificate, detail="double-precision loop",
                )
                errata += int(success)
        self.stdout.write(f"errata: {len(failures) + len(divergences)} found, {errata} recorded")

        if failures or lemma_failures:
            logger.error(f"verify: {len(failures)} failing queries, {len(lemma_failures)} failing lemma pairs")
            raise CommandError(
                f"{len(failures)} quer(ies) and {len(lemma_failures)} lemma pair(s) failed",
                returncode=EXIT_MISMATCH,
            )
        self.stdout.write(self.style.SUCCESS("all invariants hold"))

    def _replica(self, solved):
        divergences = []
        for record in solved:
            replica = replica_f(record.query)
            if replica != record.result.f:
                divergences.append((record, replica))
                self.stdout.write(self.style.WARNING(
                    f"replica: {record.query} double loop gives {replica}, certified f={record.result.f}"
                ))
        self.stdout.write(f"replica: {len(solved) - len(divergences)}/{len(solved)} agree")
        return divergences

    def _lemma(self, m_max, span, policy):
        failures = []
        total = 0
        for sandwich in lemma_sweep(m_max, span, policy):
            total += 1
            if not sandwich.holds:
                failures.append(sandwich)
                self.stderr.write(f"FAILED lemma m={sandwich.m}, n={sandwich.n}")
        self.stdout.write(f"lemma: {_percent(total - len(failures), total)} of {total} pairs strict")
        return failures
