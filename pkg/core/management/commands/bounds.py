import json

from django.core.management.base import BaseCommand, CommandError

from core.bounds import f_bounds
from core.exceptions import PrecisionExhausted
from core.management.commands._common import (
    EXIT_PRECISION, add_query_arguments, policy_from_options, query_from_options, render_csv,
)
from core.serializers import BoundsWindowSerializer


class Command(BaseCommand):
    help = 'Closed-form bound window lb <= ml < mh <= ub for f(m, q, r).'

    def add_arguments(self, parser):
        add_query_arguments(parser)
        parser.add_argument('--format', choices=['plain', 'json', 'csv'], default='plain')

    def handle(self, *args, **options):
        query = query_from_options(options)
        policy = policy_from_options(options)

        try:
            window = f_bounds(query, policy)
        except PrecisionExhausted as e:
            raise CommandError(str(e), returncode=EXIT_PRECISION)

        data = BoundsWindowSerializer({'query': query, 'window': window}).data
        if options['format'] == 'json':
            self.stdout.write(json.dumps(data))
        elif options['format'] == 'csv':
            self.stdout.write(render_csv(list(data.keys()), [list(data.values())]), ending='')
        else:
            self.stdout.write(f"window for {query}: lb={window.lb} ml={window.ml} mh={window.mh} ub={window.ub}")
            self.stdout.write(f"width {window.width} (cap {window.width_cap})")
            if window.lb_raw != window.lb:
                self.stdout.write(f"lower bound clamped from {window.lb_raw} to {window.lb}")
