import logging

from django.core.management.base import BaseCommand, CommandError

from core.conf import engine_settings
from core.exceptions import HarmonicSpanError, PrecisionExhausted
from core.management.commands._common import (
    EXIT_INVALID, EXIT_MISMATCH, EXIT_PRECISION, add_precision_argument,
    policy_from_options, render_csv,
)
from core.models import Erratum
from core.serializers import TableRowSerializer
from core.services import ErratumService, PrintedTableService
from core.types import SpanQuery

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Recompute the EN,m,q,r,LB,ML,RV,MH,UB table and diff it against the printed values.'

    def add_arguments(self, parser):
        parser.add_argument('--expected', default=None, help='Golden CSV (default HSPAN_TABLE_GOLDEN)')
        parser.add_argument('--record', action='store_true', help='Persist mismatches as errata')
        parser.add_argument(
            '--replica', action='store_true',
            help='Also report where the double-precision program disagrees',
        )
        add_precision_argument(parser)

    def handle(self, *args, **options):
        path = options['expected'] or engine_settings().table_golden
        policy = policy_from_options(options)

        try:
            golden = PrintedTableService.load_golden(path)
        except (OSError, ValueError) as e:
            raise CommandError(f"Cannot read golden table: {e}", returncode=EXIT_INVALID)

        try:
            computed = PrintedTableService.recompute(golden, policy)
        except PrecisionExhausted as e:
            raise CommandError(str(e), returncode=EXIT_PRECISION)
        except HarmonicSpanError as e:
            raise CommandError(f"Invalid table row: {e}", returncode=EXIT_INVALID)

        self.stdout.write(
            render_csv(TableRowSerializer.COLUMNS, [row.as_csv_row() for row in computed]),
            ending='',
        )

        mismatches = PrintedTableService.diff(golden, computed)
        for line in mismatches:
            self.stderr.write(line)

        if options['replica']:
            for line in PrintedTableService.replica_divergences(computed):
                self.stderr.write(self.style.WARNING(f"replica: {line}"))

        if options['record'] and mismatches:
            self._record(golden, computed)

        if mismatches:
            logger.error(f"Printed table differs in {len(mismatches)} cell(s) for {path}")
            raise CommandError(f"{len(mismatches)} cell(s) differ from the printed table", returncode=EXIT_MISMATCH)

    def _record(self, golden, computed):
        for expected, row in zip(golden, computed):
            for column, value in row.values().items():
                printed = expected.get(column)
                if printed is None or printed == value:
                    continue
                ErratumService.record(
                    Erratum.Kind.TABLE,
                    SpanQuery(row.m, row.q, row.r),
                    expected=f"{column}={printed}",
                    observed=f"{column}={value}",
                    detail=f"EN {row.en}",
                )
