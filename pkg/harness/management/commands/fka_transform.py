"""
Management command: fka_transform

Samples F_{k,a} f for a radial profile and writes the radial factor as CSV.

Usage:
    python manage.py fka_transform --N 1 --k 0 --a 2 --profile exppow:c=0.5
    python manage.py fka_transform --N 1 --k 0.5 --a 1 --profile mode:ell=2 --m 1 \\
        --grid 0:8:161 --path kernel --out image.csv

Output:
    header r,re,im, one row per grid radius.  Without --grid the rows are the
    nodes of the output quadrature grid.  The kernel path also prints the
    calibrated c_ka on stderr.

Exit codes:
    2  invalid flags or inadmissible (N, k, a)
    3  a hypothesis of the requested path is violated
    4  the transform was refused (tail, oscillation budget, calibration)
"""

import csv

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import (
    CalibrationError,
    ConstraintViolation,
    DivergenceError,
    DomainError,
    QuadratureError,
)
from harness.forms import TransformForm, error_text
from transform.engine import transform_profile


def write_csv(result, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['r', 're', 'im'])
    for r, v in zip(result.grid, result.values):
        writer.writerow([repr(float(r)), repr(float(v.real)), repr(float(v.imag))])


class Command(BaseCommand):
    help = 'Sample the (k,a)-generalized Fourier transform of a radial profile as CSV.'

    def add_arguments(self, parser):
        parser.add_argument('--N', type=int, required=True, help='Dimension')
        parser.add_argument('--k', type=float, default=0.0, help='Total multiplicity <k>')
        parser.add_argument('--a', type=float, required=True, help='Deformation parameter a > 0')
        parser.add_argument('--profile', required=True, help="Profile, e.g. 'gaussian:t=0.5'")
        parser.add_argument('--m', type=int, default=0, help='Harmonic degree')
        parser.add_argument('--grid', default='', help='lo:hi:n output radii')
        parser.add_argument('--path', default='hankel', help='hankel, kernel or spectral')
        parser.add_argument('--out', default='', help='CSV file (default: stdout)')

    def handle(self, *args, **options):
        form = TransformForm(data={key: options.get(key) for key in ('N', 'k', 'a', 'profile', 'm', 'grid', 'path', 'out')})
        if not form.is_valid():
            raise CommandError(error_text(form), returncode=2)
        data = form.cleaned_data

        try:
            result = transform_profile(data['params'], data['radial_profile'], data['grid'], path=data['path'])
        except ConstraintViolation as exc:
            raise CommandError(str(exc), returncode=3) from exc
        except (QuadratureError, CalibrationError, DivergenceError) as exc:
            raise CommandError(f'transform refused: {exc}', returncode=4) from exc
        except DomainError as exc:
            raise CommandError(str(exc), returncode=2) from exc

        if result.constant is not None:
            self.stderr.write(
                f'c_ka={result.constant.real:.15g} calibrated (closed form {data["params"].c_ka:.15g})'
            )

        if data['out']:
            with open(data['out'], 'w', newline='', encoding='utf-8') as fh:
                write_csv(result, fh)
            self.stdout.write(self.style.SUCCESS(f'Wrote {result.grid.size} rows to {data["out"]}'))
        else:
            write_csv(result, self.stdout)
