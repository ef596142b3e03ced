import json
import logging

from django.core.management.base import BaseCommand, CommandError

from core.conf import engine_settings
from core.exceptions import CapExceeded, HarmonicSpanError, PrecisionExhausted
from core.management.commands._common import (
    EXIT_INVALID, EXIT_PRECISION, add_query_arguments, policy_from_options,
    query_from_options, render_csv,
)
from core.serializers import SpanResultSerializer
from core.services import SpanSolverService

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Certified term count f(m, q, r) with its bound window and flanking sums.'

    def add_arguments(self, parser):
        add_query_arguments(parser)
        parser.add_argument('--format', choices=['plain', 'json', 'csv'], default='plain')
        parser.add_argument(
            '--oracle', action='store_true',
            help='Use the exact rational oracle instead of the interval engine',
        )
        parser.add_argument('--digits', type=int, default=None, help='Significant digits for sums')

    def handle(self, *args, **options):
        conf = engine_settings()
        query = query_from_options(options)
        policy = policy_from_options(options)
        digits = options['digits'] if options['digits'] is not None else conf.sum_digits
        if digits < 1:
            raise CommandError(f"--digits must be at least 1 (got {digits})", returncode=EXIT_INVALID)

        try:
            result = SpanSolverService.solve_f(
                query, policy, exact=options['oracle'], oracle_cap=conf.oracle_cap,
            )
        except PrecisionExhausted as e:
            raise CommandError(str(e), returncode=EXIT_PRECISION)
        except CapExceeded as e:
            raise CommandError(f"{e}; drop --oracle to use the interval engine", returncode=EXIT_INVALID)
        except HarmonicSpanError as e:
            logger.error(f"solve failed for {query}: {str(e)}")
            raise CommandError(str(e), returncode=EXIT_INVALID)

        if options['format'] == 'json':
            self.stdout.write(json.dumps(SpanResultSerializer.build(result, digits)))
        elif options['format'] == 'csv':
            data = SpanResultSerializer.build(result, digits)
            self.stdout.write(render_csv(list(data.keys()), [list(data.values())]), ending='')
        else:
            for line in SpanResultSerializer.describe(result, digits):
                self.stdout.write(line)
            if result.erratum:
                self.stdout.write(self.style.WARNING(f"Closed-form window missed f: {result.erratum}"))
