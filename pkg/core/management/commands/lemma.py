from django.core.management.base import BaseCommand, CommandError

from core.bounds import lemma_sandwich
from core.conf import engine_settings
from core.exceptions import RangeTooLarge
from core.management.commands._common import (
    EXIT_INVALID, EXIT_MISMATCH, add_precision_argument, policy_from_options,
)
from core.utils.formatting import render_fraction, render_value


class Command(BaseCommand):
    help = 'Check Q_{m+1}^{n+1} < ln((n+1)/m) < Q_m^n for one pair (m, n).'

    def add_arguments(self, parser):
        parser.add_argument('--m', type=int, required=True)
        parser.add_argument('--n', type=int, required=True)
        add_precision_argument(parser)

    def handle(self, *args, **options):
        m, n = options['m'], options['n']
        policy = policy_from_options(options)
        digits = engine_settings().sum_digits

        try:
            sandwich = lemma_sandwich(m, n, policy)
        except RangeTooLarge as e:
            raise CommandError(str(e), returncode=EXIT_INVALID)

        self.stdout.write(f"Q_{m + 1}^{n + 1} = {render_fraction(sandwich.low, digits)}")
        self.stdout.write(f"ln({n + 1}/{m}) = {render_value(sandwich.mid, digits)} [{sandwich.mid.precision_bits} bits]")
        self.stdout.write(f"Q_{m}^{n} = {render_fraction(sandwich.high, digits)}")
        if not sandwich.holds:
            raise CommandError(f"Sandwich fails for m={m}, n={n}", returncode=EXIT_MISMATCH)
        self.stdout.write(self.style.SUCCESS("holds"))
