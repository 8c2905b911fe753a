"""
Management command: fka_check

Evaluates one catalog inequality and prints its report as a single JSON line.

Usage:
    python manage.py fka_check hpw-sharp --N 1 --k 0.5 --a 1 --profile exppow:c=1
    python manage.py fka_check ENTROPY --N 1 --k 0 --a 2 --profile gaussian:t=0.5
    python manage.py fka_check pitt --N 1 --k 0 --a 2 --profile gaussian --p 1.5 --q 3 --l 0.2

Exit codes:
    0  the report passes
    1  the report fails (an exact inequality is violated, or an empirical
       ratio is not finite)
    2  invalid flags, unknown check or inadmissible input
    3  the exponents violate a hypothesis of the inequality
    4  a norm diverges or the quadrature was refused
"""

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import (
    CalibrationError,
    ConstraintViolation,
    DivergenceError,
    DomainError,
    QuadratureError,
)
from harness.checks import run_check
from harness.forms import EXPONENT_FIELDS, CheckForm, error_text

FLAG_NAMES = {name: '--' + name.replace('_', '-') for name in EXPONENT_FIELDS}


class Command(BaseCommand):
    help = 'Evaluate one inequality of the catalog on one profile.'

    def add_arguments(self, parser):
        parser.add_argument('check', help="Catalog id, e.g. 'hpw-sharp' or 'HPW_SHARP'")
        parser.add_argument('--N', type=int, required=True)
        parser.add_argument('--k', type=float, default=0.0)
        parser.add_argument('--a', type=float, required=True)
        parser.add_argument('--profile', default='gaussian:t=0.5')
        parser.add_argument('--m', type=int, default=0)
        parser.add_argument('--tolerance', type=float, default=None)
        parser.add_argument('--partner', default='', help='Second profile for HL_REARRANGE')
        parser.add_argument('--seed', type=int, default=0)
        for name, flag in FLAG_NAMES.items():
            parser.add_argument(flag, dest=name, type=float, default=None)

    def handle(self, *args, **options):
        keys = ('check', 'N', 'k', 'a', 'profile', 'm', 'tolerance', 'partner') + EXPONENT_FIELDS
        form = CheckForm(data={key: options.get(key) for key in keys})
        if not form.is_valid():
            raise CommandError(error_text(form), returncode=2)
        data = form.cleaned_data
        check_options = {'seed': options['seed']}
        if data['partner']:
            check_options['partner'] = data['partner']

        try:
            report = run_check(
                data['check'], data['params'], data['radial_profile'], form.exponents(),
                tolerance=data['tolerance'], options=check_options,
            )
        except ConstraintViolation as exc:
            raise CommandError(str(exc), returncode=3) from exc
        except (QuadratureError, CalibrationError, DivergenceError) as exc:
            raise CommandError(f'numerical refusal: {exc}', returncode=4) from exc
        except DomainError as exc:
            raise CommandError(str(exc), returncode=2) from exc

        self.stdout.write(report.to_json())
        if not report.passed:
            raise CommandError(report.summary_line(), returncode=1)
