"""
Suite runner.

A suite is the product (check, exponents, params, profile) over a validated
SuiteConfig; profile-free checks take one profile per harmonic degree.
Jobs run on the ordered worker pool and come back in catalog order, then
params order, then profile order, then exponent-grid order, so the report
file does not depend on FKA_THREADS.

Jobs whose inputs fall outside a check's hypotheses are skipped: they are
logged and counted in the summary but produce no report.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field

from django.conf import settings

from core.exceptions import (
    CalibrationError,
    ConstraintViolation,
    DivergenceError,
    DomainError,
    QuadratureError,
)
from core.profiles import parse_profile
from core.workers import run_ordered
from .catalog import CATALOG, EXACT, get
from .checks import run_check
from .forms import SuiteConfigForm, error_text
from .reports import CheckReport

logger = logging.getLogger(__name__)

SKIPPED = (DomainError, ConstraintViolation, DivergenceError)
REFUSED = (QuadratureError, CalibrationError)


class SuiteConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    params: list = field(default_factory=list)
    profiles: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    tolerance: float = None
    output: str = ''
    seed: int = 0

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise SuiteConfigError('a suite config is a JSON object')
        unknown = set(data) - {'params', 'profiles', 'checks', 'tolerance', 'output', 'seed'}
        if unknown:
            raise SuiteConfigError(f'unknown suite config keys: {", ".join(sorted(unknown))}')
        form = SuiteConfigForm(data=data)
        if not form.is_valid():
            raise SuiteConfigError(error_text(form))
        cleaned = form.cleaned_data
        tolerance = cleaned.get('tolerance')
        return cls(
            params=cleaned['params'],
            profiles=cleaned['profiles'],
            checks=cleaned['checks'],
            tolerance=settings.FKA_CHECK_TOLERANCE if tolerance is None else tolerance,
            output=cleaned.get('output') or '',
            seed=cleaned['seed'],
        )

    def profile_objects(self):
        """Profiles with the suite seed filled into seedless mixtures."""
        out = []
        for text, m in self.profiles:
            if text.strip().lower().startswith('mixture') and 'seed=' not in text:
                text = f'{text},seed={self.seed}' if ':' in text else f'{text}:seed={self.seed}'
            out.append(parse_profile(text, m))
        return out

    def jobs(self):
        order = {check_id: i for i, check_id in enumerate(CATALOG)}
        checks = sorted(enumerate(self.checks), key=lambda item: (order[item[1][0]], item[0]))
        profiles = self.profile_objects()
        for _, (check_id, grid, options) in checks:
            names = sorted(grid)
            combos = list(itertools.product(*(grid[n] for n in names))) if names else [()]
            chosen = _one_per_degree(profiles) if get(check_id).profile_free else profiles
            for params in self.params:
                for profile in chosen:
                    for combo in combos:
                        yield SuiteJob(check_id, params, profile, dict(zip(names, combo)),
                                       {'seed': self.seed, **options})


def _one_per_degree(profiles):
    """First profile of each harmonic degree, in config order."""
    seen = {}
    for profile in profiles:
        seen.setdefault(profile.m, profile)
    return list(seen.values())


@dataclass
class SuiteJob:
    check_id: str
    params: object
    profile: object
    exponents: dict
    options: dict

    def label(self):
        return f'{self.check_id} {self.params} {self.profile.describe()} {self.exponents}'


@dataclass
class SuiteResult:
    reports: list
    skipped: list

    @property
    def failures(self):
        return [r for r in self.reports if r.mode == EXACT and not r.passed]

    @property
    def exit_code(self):
        return 1 if self.failures else 0

    def summary(self):
        exact = sum(1 for r in self.reports if r.mode == EXACT)
        return (f'{len(self.reports)} reports, {exact - len(self.failures)}/{exact} exact checks passed, '
                f'{len(self.skipped)} skipped')


def _refused_report(job, tolerance, exc):
    definition = get(job.check_id)
    return CheckReport(
        check_id=definition.id,
        anchor=definition.anchor,
        params=job.params.summary(),
        profile=job.profile.describe(),
        lhs=math.nan,
        rhs=math.nan,
        mode=definition.constant_mode,
        tolerance=tolerance,
        exponents={**definition.defaults, **job.exponents},
        notes=f'numerical refusal: {exc}',
    )


def run_job(job, tolerance):
    """A CheckReport, or the reason the job was skipped."""
    try:
        return run_check(job.check_id, job.params, job.profile, job.exponents,
                         tolerance=tolerance, workers=1, options=job.options)
    except SKIPPED as exc:
        logger.info('skipped %s: %s', job.label(), exc)
        return f'{job.label()}: {exc}'
    except REFUSED as exc:
        logger.warning('refused %s: %s', job.label(), exc)
        return _refused_report(job, tolerance, exc)


def run_suite(config, workers=None):
    jobs = list(config.jobs())
    logger.info('running %d suite jobs', len(jobs))
    outcomes = run_ordered(lambda job: run_job(job, config.tolerance), jobs, workers)
    reports = [o for o in outcomes if isinstance(o, CheckReport)]
    skipped = [o for o in outcomes if isinstance(o, str)]
    result = SuiteResult(reports, skipped)
    logger.info('suite finished: %s', result.summary())
    return result
