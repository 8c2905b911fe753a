"""
Management command: fka_suite

Runs a suite config and writes one JSON report per line.

Usage:
    python manage.py fka_suite harness/fixtures/default_suite.json
    python manage.py fka_suite my_suite.json --out reports.jsonl --record

The output path is --out, else the config's "output", else stdout.  A
summary line per report goes to stderr when the reports go to stdout.

Exit codes:
    0  every exact-constant report passed
    1  at least one exact-constant report failed
    2  the config file is missing, not JSON or invalid
"""

import json

from django.core.management.base import BaseCommand, CommandError
from django.utils import timezone

from harness.models import CheckRecord, SuiteRun
from harness.reports import write_reports
from harness.suite import SuiteConfig, SuiteConfigError, run_suite


class Command(BaseCommand):
    help = 'Run a suite of inequality checks from a JSON config.'

    def add_arguments(self, parser):
        parser.add_argument('config', help='Suite config (JSON)')
        parser.add_argument('--out', default='', help='Report file (JSON lines)')
        parser.add_argument('--record', action='store_true', help='Archive the run in the database')
        parser.add_argument('--workers', type=int, default=None, help='Worker cap below FKA_THREADS')

    def handle(self, *args, **options):
        try:
            with open(options['config'], encoding='utf-8') as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise CommandError(f'cannot read {options["config"]}: {exc}', returncode=2) from exc
        except json.JSONDecodeError as exc:
            raise CommandError(f'{options["config"]} is not valid JSON: {exc}', returncode=2) from exc
        try:
            config = SuiteConfig.from_dict(raw)
        except SuiteConfigError as exc:
            raise CommandError(f'invalid suite config:\n{exc}', returncode=2) from exc

        run = SuiteRun.objects.create(config=raw, seed=config.seed) if options['record'] else None
        result = run_suite(config, workers=options['workers'])

        output = options['out'] or config.output
        log = self.stdout
        if output:
            with open(output, 'w', encoding='utf-8', newline='\n') as fh:
                write_reports(result.reports, fh)
        else:
            write_reports(result.reports, self.stdout)
            log = self.stderr

        for report in result.reports:
            style = self.style.SUCCESS if report.passed else self.style.ERROR
            log.write(style(report.summary_line()))
        for reason in result.skipped:
            log.write(self.style.WARNING(f'SKIP {reason}'))

        if run is not None:
            CheckRecord.objects.bulk_create(
                CheckRecord.from_report(run, i, report) for i, report in enumerate(result.reports)
            )
            run.output = output
            run.finished_at = timezone.now()
            run.exit_code = result.exit_code
            run.summary = result.summary()
            run.save()

        if result.exit_code:
            raise CommandError(result.summary(), returncode=result.exit_code)
        log.write(self.style.SUCCESS(result.summary()))
