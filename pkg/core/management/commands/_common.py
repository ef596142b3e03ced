import csv
import io

from django.core.management.base import CommandError

from core.conf import default_policy
from core.exceptions import QueryValidationError
from core.types import validate_query

EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_PRECISION = 3


def add_query_arguments(parser):
    parser.add_argument('--m', type=int, required=True, help='Start denominator, m > 1')
    parser.add_argument('--q', type=int, default=1, help='Target integer (default 1)')
    parser.add_argument('--r', type=int, default=1, help='Step multiple (default 1)')
    add_precision_argument(parser)


def add_precision_argument(parser):
    parser.add_argument(
        '--precision-start', type=int, default=None, dest='precision_start',
        help='Initial working precision in bits (default HSPAN_PRECISION_START_BITS)',
    )


def query_from_options(options):
    try:
        return validate_query(options['m'], options['q'], options['r'])
    except QueryValidationError as e:
        raise CommandError(f"Invalid query ({e.rule}): {e}", returncode=EXIT_INVALID)


def policy_from_options(options):
    try:
        return default_policy(start_bits=options.get('precision_start'))
    except ValueError as e:
        raise CommandError(f"Invalid precision policy: {e}", returncode=EXIT_INVALID)


def render_csv(header, rows):
    """CSV text with LF line endings regardless of platform"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()
