import json
import math
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from core.exceptions import ConstraintViolation, DomainError, FamilyTooSmall
from core.geometry import DeformationParams
from core.profiles import ExpPow, RadialProfile, parse_profile
from spectral.expansion import random_mixture
from .catalog import CATALOG, EMPIRICAL, EXACT, REPORT_ONLY, evaluator, get, normalize_id, ordered
from .checks import (
    check_donoho_stark,
    check_entropy,
    damping_slope,
    default_family,
    estimate_empirical_constant,
    hy_failure_probe,
    run_check,
)
from .forms import CheckForm, ParamsForm, SuiteConfigForm, TransformForm
from .models import CheckRecord, SuiteRun
from .reports import CheckReport
from .suite import SuiteConfig, SuiteConfigError, run_suite

EUCLID_1D = DeformationParams(1, 0.0, 2.0)
DUNKL_1D = DeformationParams(1, 0.5, 2.0)
LAGUERRE_1D = DeformationParams(1, 0.5, 1.0)
GAUSSIAN = parse_profile('gaussian:t=0.5')


class CatalogTests(SimpleTestCase):

    def test_ids_are_normalized(self):
        self.assertEqual(normalize_id('hpw-sharp'), 'HPW_SHARP')
        self.assertEqual(get(' entropy_gen ').id, 'ENTROPY_GEN')

    def test_unknown_id(self):
        with self.assertRaises(DomainError):
            get('FOURIER_MAGIC')

    def test_catalog_order(self):
        self.assertEqual(ordered(['nash', 'HY', 'NASH']), ['HY', 'NASH'])

    def test_every_entry_has_an_evaluator(self):
        for check_id, definition in CATALOG.items():
            self.assertIn(definition.constant_mode, (EXACT, EMPIRICAL, REPORT_ONLY))
            self.assertTrue(callable(evaluator(check_id)), msg=check_id)


class ReportTests(SimpleTestCase):

    def report(self, lhs, rhs, mode=EXACT):
        return CheckReport('HY', 'prop.HY', EUCLID_1D.summary(), 'gaussian:t=0.5', lhs, rhs, mode, 1e-5)

    def test_json_has_sorted_keys_and_string_infinities(self):
        text = self.report(math.inf, 1.0).to_json()
        data = json.loads(text)
        self.assertEqual(list(data), sorted(data))
        self.assertEqual(data['lhs'], 'inf')
        self.assertEqual(data['ratio'], 'inf')
        self.assertFalse(data['pass'])

    def test_pass_criteria(self):
        self.assertTrue(self.report(1.0 + 1e-6, 1.0).passed)
        self.assertFalse(self.report(1.001, 1.0).passed)
        self.assertTrue(self.report(5.0, 1.0, EMPIRICAL).passed)
        self.assertFalse(self.report(1.0, 0.0, EMPIRICAL).passed)
        self.assertTrue(self.report(math.nan, math.nan, REPORT_ONLY).passed)

    def test_zero_over_zero(self):
        self.assertEqual(self.report(0.0, 0.0).ratio, 0.0)

    def test_slack_is_relative_to_the_size_of_a_negative_bound(self):
        self.assertTrue(self.report(-1.0 - 1e-6, -1.0).passed)
        self.assertTrue(self.report(-1.0 + 1e-6, -1.0).passed)
        self.assertFalse(self.report(-0.99, -1.0).passed)


class DilationTests(SimpleTestCase):
    """Dilation-invariant checks give the same ratio for psi(t r) at every t."""

    CHECKS = [
        ('HY', {'p': 1.5}),
        ('PITT', {'p': 2.0, 'q': 3.0, 'l': 0.5}),
        ('HL_WEIGHTED', {'p': 1.5}),
        ('HPW_SHARP', {}),
    ]
    SCALES = [2.0 ** j for j in (-6, -4, -2, 0, 2, 4, 6)]

    def test_ratios_do_not_move_under_dilation(self):
        profiles = {t: GAUSSIAN.dilate(t) for t in self.SCALES}
        for check_id, exponents in self.CHECKS:
            base = run_check(check_id, DUNKL_1D, profiles[1.0], exponents).ratio
            for t in self.SCALES:
                report = run_check(check_id, DUNKL_1D, profiles[t], exponents)
                self.assertTrue(report.passed, msg=f'{check_id} t={t}: {report.to_json()}')
                self.assertLess(abs(report.ratio / base - 1.0), 1e-3, msg=f'{check_id} t={t}')


class HausdorffYoungTests(SimpleTestCase):

    def test_gaussian_satisfies_the_bound(self):
        for p in (1.25, 1.5, 1.75):
            report = run_check('HY', EUCLID_1D, GAUSSIAN, {'p': p})
            self.assertTrue(report.passed, msg=report.to_json())
            self.assertLess(report.ratio, 1.0)

    def test_p_above_two_is_a_constraint_violation(self):
        with self.assertRaises(ConstraintViolation):
            run_check('HY', EUCLID_1D, GAUSSIAN, {'p': 3.0})

    def test_dual_form_is_restricted_to_reflection_invariant_cases(self):
        with self.assertRaises(DomainError):
            run_check('HL_DUAL', DeformationParams(2, 0.5, 2.0), GAUSSIAN)

    def test_failure_probe(self):
        ratios = hy_failure_probe(EUCLID_1D, p=3.0, n_max=4)
        self.assertEqual(len(ratios), 5)
        self.assertTrue(all(math.isfinite(r) and r > 0 for r in ratios))
        with self.assertRaises(ConstraintViolation):
            hy_failure_probe(EUCLID_1D, p=1.5)


class HeisenbergTests(SimpleTestCase):

    def test_dilated_ground_states_saturate_the_sharp_bound(self):
        for params in (EUCLID_1D, DUNKL_1D, LAGUERRE_1D):
            for c in (1.0 / params.a, 0.3, 2.0):
                report = run_check('HPW_SHARP', params, RadialProfile(0, ExpPow(c)))
                self.assertLess(abs(report.ratio - 1.0), 1e-5, msg=f'{params} c={c}')

    def test_random_mixtures_stay_below_the_bound(self):
        for seed in range(3):
            profile = parse_profile(f'mixture:ell_max=4,seed={seed}')
            report = run_check('HPW_SHARP', LAGUERRE_1D, profile)
            self.assertLessEqual(report.ratio, 1.0 + 1e-6)
            self.assertTrue(report.passed)

    def test_unit_powers_reduce_to_the_sharp_form(self):
        sharp = run_check('HPW_SHARP', DUNKL_1D, GAUSSIAN)
        ab = run_check('HPW_AB', DUNKL_1D, GAUSSIAN, {'alpha': 1.0, 'beta': 1.0})
        self.assertAlmostEqual(ab.ratio, sharp.ratio, places=12)

    def test_powers_below_one_are_refused(self):
        with self.assertRaises(ConstraintViolation):
            run_check('HPW_AB', EUCLID_1D, GAUSSIAN, {'alpha': 0.5, 'beta': 1.0})
        with self.assertRaises(ConstraintViolation):
            run_check('HPW_FRAC', EUCLID_1D, GAUSSIAN, {'alpha': 1.5, 'beta': 0.5})


class L1L2Tests(SimpleTestCase):

    def test_nash_constant_on_the_line(self):
        # K = 2, D = 1, s = 1: C = 3
        report = run_check('NASH', EUCLID_1D, GAUSSIAN)
        self.assertIn('C=3', report.notes)
        self.assertAlmostEqual(report.lhs, math.sqrt(math.pi), places=10)
        l1 = math.sqrt(2 * math.pi)
        spread = math.sqrt(math.sqrt(math.pi) / 2)
        self.assertTrue(math.isclose(report.rhs, 3 * l1 ** (4 / 3) * spread ** (2 / 3), rel_tol=1e-6))
        self.assertLess(report.ratio, 0.2)

    def test_clarkson_passes(self):
        for params in (EUCLID_1D, LAGUERRE_1D):
            self.assertTrue(run_check('CLARKSON', params, GAUSSIAN).passed)

    def test_gaussian_damping(self):
        report = run_check('GAUSS_DAMP', EUCLID_1D, GAUSSIAN, {'t': 2.0})
        self.assertTrue(report.passed, msg=report.to_json())

    def test_damping_slope(self):
        result = damping_slope(EUCLID_1D)
        self.assertAlmostEqual(result['expected'], -0.125)
        self.assertLess(result['relative_error'], 0.02)


class EntropyTests(SimpleTestCase):

    def test_gaussian_entropy_sum(self):
        report = check_entropy(EUCLID_1D, GAUSSIAN)
        self.assertAlmostEqual(report.lhs, math.log(2 * math.pi), places=6)
        self.assertAlmostEqual(report.rhs, math.log(math.pi * math.e), places=6)
        self.assertTrue(report.passed)

    def test_unnormalized_form_is_scale_invariant(self):
        small = check_entropy(DUNKL_1D, GAUSSIAN, normalized=False)
        large = check_entropy(DUNKL_1D, GAUSSIAN.scaled(3.0), normalized=False)
        self.assertAlmostEqual(small.rhs - small.lhs, large.rhs - large.lhs, places=6)

    def test_variance_form(self):
        for c in (0.5, 1.0, 2.0):
            self.assertTrue(run_check('ENTROPY_VAR', LAGUERRE_1D, GAUSSIAN, {'c': c}).passed)

    def test_seeded_mixtures_respect_the_bound(self):
        family = [DeformationParams(1, k, 2.0) for k in (0.0, 0.5, 1.5)]
        for seed in range(50):
            params = family[seed % 3]
            profile = random_mixture(params, 0, 2 + seed % 5, seed)
            report = check_entropy(params, profile)
            self.assertTrue(report.passed, msg=report.to_json())
            self.assertGreaterEqual(report.rhs, report.lhs - 1e-6, msg=f'seed={seed}')


class ConcentrationTests(SimpleTestCase):

    def test_donoho_stark(self):
        report = check_donoho_stark(EUCLID_1D, GAUSSIAN, 2.0, 2.0)
        self.assertTrue(report.passed)
        self.assertGreater(report.lhs, 0.0)
        self.assertAlmostEqual(report.rhs, 16.0)

    def test_small_sets_are_vacuous(self):
        report = check_donoho_stark(EUCLID_1D, GAUSSIAN, 0.0, 0.0)
        self.assertEqual(report.lhs, 0.0)
        self.assertIn('vacuous', report.notes)

    def test_benedicks_ratio_is_finite(self):
        report = run_check('BAB', DUNKL_1D, GAUSSIAN, {'S': 0.5, 'V': 0.5})
        self.assertTrue(math.isfinite(report.ratio))


class WeightTests(SimpleTestCase):

    def test_pitt_needs_homogeneous_exponents(self):
        with self.assertRaises(ConstraintViolation) as ctx:
            run_check('PITT', EUCLID_1D, GAUSSIAN, {'p': 2.0, 'q': 2.0, 'alpha': -0.25, 'l': 0.3})
        self.assertEqual(ctx.exception.condition, 'eq.homo-pitt')

    def test_pitt_defaults(self):
        report = run_check('PITT', DUNKL_1D, GAUSSIAN)
        self.assertIn('B1=', report.notes)
        self.assertTrue(math.isfinite(report.ratio))

    def test_pitt_over_an_exponent_grid(self):
        grid = [
            (2.0, 2.0, 0.25), (2.0, 2.0, 0.5), (2.0, 2.0, 0.75),
            (2.0, 3.0, 0.5), (2.0, 3.0, 0.75),
            (2.0, 4.0, 0.6), (2.0, 4.0, 0.8),
            (1.5, 1.5, 0.2), (1.5, 1.5, 0.5),
            (1.5, 2.0, 0.3), (1.5, 2.0, 0.6),
            (1.5, 3.0, 0.4),
        ]
        self.assertEqual(DUNKL_1D.D, 2.0)
        for p, q, l in grid:
            report = run_check('PITT', DUNKL_1D, GAUSSIAN, {'p': p, 'q': q, 'l': l})
            label = f'p={p} q={q} l={l}'
            self.assertTrue(report.passed, msg=label)
            self.assertTrue(math.isfinite(report.ratio) and report.ratio > 0, msg=label)
            b1 = float(report.notes.split('B1=')[1].split(',')[0])
            self.assertTrue(math.isfinite(b1) and b1 > 0, msg=label)

    def test_hardy_and_rearrangement(self):
        self.assertTrue(run_check('HARDY_WEIGHTED', EUCLID_1D, GAUSSIAN).passed)
        report = run_check('HL_REARRANGE', EUCLID_1D, parse_profile('mode:ell=2'))
        self.assertTrue(report.passed)


class EmpiricalConstantTests(SimpleTestCase):

    def test_family_size(self):
        self.assertEqual(len(default_family(EUCLID_1D, 10)), 10)
        with self.assertRaises(FamilyTooSmall):
            default_family(EUCLID_1D, 5)
        with self.assertRaises(FamilyTooSmall):
            estimate_empirical_constant('L1L2', EUCLID_1D, [GAUSSIAN] * 3)

    def test_exact_entries_have_nothing_to_estimate(self):
        with self.assertRaises(DomainError):
            estimate_empirical_constant('HY', EUCLID_1D, default_family(EUCLID_1D, 10))

    def test_lower_direction_constant(self):
        value = estimate_empirical_constant('HPW_FRAC', EUCLID_1D, default_family(EUCLID_1D, 10, seed=2))
        self.assertTrue(math.isfinite(value))
        self.assertGreater(value, 0.0)


class FormTests(SimpleTestCase):

    def test_inadmissible_parameters_carry_the_condition(self):
        form = ParamsForm(data={'N': 1, 'k': 0, 'a': 0.5, 'profile': 'gaussian'})
        self.assertFalse(form.is_valid())
        self.assertEqual(form.errors.as_data()['__all__'][0].code, 'a+2⟨k⟩+N>2')

    def test_bad_profile(self):
        form = ParamsForm(data={'N': 1, 'k': 0, 'a': 2, 'profile': 'wavelet'})
        self.assertFalse(form.is_valid())
        self.assertIn('profile', form.errors)

    def test_grid(self):
        form = TransformForm(data={'N': 1, 'a': 2, 'profile': 'gaussian', 'grid': '0:4:5'})
        self.assertTrue(form.is_valid(), form.errors)
        np.testing.assert_allclose(form.cleaned_data['grid'], [0, 1, 2, 3, 4])
        self.assertEqual(form.cleaned_data['path'], 'hankel')
        self.assertFalse(TransformForm(data={'N': 1, 'a': 2, 'profile': 'gaussian', 'grid': '4:0:5'}).is_valid())

    def test_check_form_exponents(self):
        form = CheckForm(data={'check': 'hy', 'N': 1, 'a': 2, 'profile': 'gaussian', 'p': 1.5})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['check'], 'HY')
        self.assertEqual(form.exponents(), {'p': 1.5})

    def test_suite_form_needs_params_for_checks(self):
        form = SuiteConfigForm(data={'checks': ['HY'], 'profiles': ['gaussian']})
        self.assertFalse(form.is_valid())
        self.assertIn('params', form.errors)


class SuiteTests(SimpleTestCase):

    def config(self, **overrides):
        data = {
            'params': [{'N': 1, 'k': 0, 'a': 2}],
            'profiles': ['gaussian:t=0.5', 'mixture:ell_max=3'],
            'checks': ['NASH', 'HPW_SHARP', {'id': 'PITT', 'exponents': {'alpha': [-0.25], 'l': [0.3]}}],
            'seed': 5,
        }
        data.update(overrides)
        return SuiteConfig.from_dict(data)

    def test_reports_come_in_catalog_order(self):
        result = run_suite(self.config())
        self.assertEqual([r.check_id for r in result.reports], ['HPW_SHARP', 'HPW_SHARP', 'NASH', 'NASH'])
        self.assertEqual(len(result.skipped), 2)
        self.assertEqual(result.exit_code, 0)

    def test_seedless_mixtures_take_the_suite_seed(self):
        profiles = self.config().profile_objects()
        self.assertIn('seed=5', profiles[1].describe())

    def test_reports_do_not_depend_on_worker_count(self):
        config = self.config()
        one = [r.to_json() for r in run_suite(config, workers=1).reports]
        many = [r.to_json() for r in run_suite(config, workers=4).reports]
        self.assertEqual(one, many)

    def test_empty_suite(self):
        result = run_suite(SuiteConfig.from_dict({}))
        self.assertEqual(result.reports, [])
        self.assertEqual(result.exit_code, 0)

    def test_unknown_keys(self):
        with self.assertRaises(SuiteConfigError):
            SuiteConfig.from_dict({'check': ['HY']})

    def test_shipped_suite_covers_the_catalog(self):
        path = Path(__file__).resolve().parent / 'fixtures' / 'default_suite.json'
        config = SuiteConfig.from_dict(json.loads(path.read_text(encoding='utf-8')))
        self.assertEqual({check_id for check_id, _, _ in config.checks}, set(CATALOG))
        self.assertIn(3, {params.N for params in config.params})
        jobs = list(config.jobs())
        labels = [job.label() for job in jobs]
        self.assertEqual(len(labels), len(set(labels)))

    def test_profile_free_checks_run_once_per_degree(self):
        config = self.config(
            params=[{'N': 1, 'k': 0, 'a': 2}, {'N': 1, 'k': 0.5, 'a': 2}],
            profiles=['gaussian:t=0.5', 'exppow:c=1'],
            checks=[{'id': 'HY_FAIL_PROBE', 'exponents': {'n_max': [2]}}],
        )
        reports = run_suite(config).reports
        self.assertEqual(len(reports), 2)
        self.assertEqual({r.profile for r in reports}, {'mode-sums:m=0'})
        self.assertEqual(len({r.to_json() for r in reports}), 2)


class TransformCommandTests(SimpleTestCase):

    def test_csv_output(self):
        out = StringIO()
        call_command('fka_transform', N=1, a=2.0, profile='gaussian:t=0.5', grid='0:2:5', stdout=out)
        lines = out.getvalue().strip().splitlines()
        self.assertEqual(lines[0], 'r,re,im')
        self.assertEqual(len(lines), 6)
        r, re, im = (float(x) for x in lines[1].split(','))
        self.assertEqual(r, 0.0)
        self.assertAlmostEqual(re, 1.0, places=7)
        self.assertAlmostEqual(im, 0.0, places=7)

    def test_inadmissible_parameters_exit_2(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('fka_transform', N=1, a=0.5, profile='gaussian', stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)


class CheckCommandTests(SimpleTestCase):

    def test_report_is_one_json_line(self):
        out = StringIO()
        call_command('fka_check', 'hpw-sharp', N=1, k=0.5, a=1.0, profile='exppow:c=1', stdout=out)
        data = json.loads(out.getvalue())
        self.assertEqual(data['check'], 'HPW_SHARP')
        self.assertEqual(data['anchor'], 'thm.Heisenberg-BSKO')
        self.assertTrue(data['pass'])

    def test_unknown_check_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('fka_check', 'NOPE', N=1, a=2.0, stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_constraint_violation_exits_3(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('fka_check', 'PITT', N=1, a=2.0, p=2.0, q=2.0, alpha=-0.25, l=0.3, stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 3)

    def test_failed_exact_check_exits_1(self):
        failing = CheckReport('HY', 'prop.HY', EUCLID_1D.summary(), 'gaussian:t=0.5', 2.0, 1.0, EXACT, 1e-5)
        out = StringIO()
        with mock.patch('harness.management.commands.fka_check.run_check', return_value=failing):
            with self.assertRaises(CommandError) as ctx:
                call_command('fka_check', 'HY', N=1, a=2.0, stdout=out)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertFalse(json.loads(out.getvalue())['pass'])

    def test_nonfinite_empirical_ratio_exits_1(self):
        failing = CheckReport('PITT', 'cor.pitt', EUCLID_1D.summary(), 'gaussian:t=0.5', 1.0, 0.0, EMPIRICAL, 1e-5)
        out = StringIO()
        with mock.patch('harness.management.commands.fka_check.run_check', return_value=failing):
            with self.assertRaises(CommandError) as ctx:
                call_command('fka_check', 'PITT', N=1, a=2.0, stdout=out)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertFalse(json.loads(out.getvalue())['pass'])


class SuiteCommandTests(TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)
        self.config_path = self.dir / 'suite.json'
        self.config_path.write_text(json.dumps({
            'params': [{'N': 1, 'k': 0.5, 'a': 2}],
            'profiles': ['gaussian:t=0.5', 'exppow:c=2'],
            'checks': ['HPW_SHARP', 'ENTROPY'],
            'seed': 1,
        }), encoding='utf-8')

    def run_suite_command(self, *args, **options):
        call_command('fka_suite', str(self.config_path), *args, stdout=StringIO(), stderr=StringIO(), **options)

    def test_runs_are_byte_identical(self):
        first, second = self.dir / 'a.jsonl', self.dir / 'b.jsonl'
        self.run_suite_command(out=str(first))
        self.run_suite_command(out=str(second), workers=1)
        self.assertEqual(first.read_bytes(), second.read_bytes())
        self.assertEqual(len(first.read_text(encoding='utf-8').splitlines()), 4)

    def test_reports_go_to_stdout_without_an_output(self):
        out, err = StringIO(), StringIO()
        call_command('fka_suite', str(self.config_path), stdout=out, stderr=err)
        lines = out.getvalue().splitlines()
        self.assertEqual(len(lines), 4)
        self.assertTrue(all(json.loads(line)['pass'] for line in lines))
        self.assertIn('exact checks passed', err.getvalue())

    def test_record_archives_the_run(self):
        self.run_suite_command(out=str(self.dir / 'r.jsonl'), record=True)
        run = SuiteRun.objects.get()
        self.assertEqual(run.exit_code, 0)
        self.assertEqual(run.records.count(), 4)
        self.assertEqual(run.failed_count, 0)
        self.assertEqual(list(run.records.values_list('check_id', flat=True)),
                         ['HPW_SHARP', 'HPW_SHARP', 'ENTROPY', 'ENTROPY'])
        self.assertEqual(CheckRecord.objects.filter(mode=CheckRecord.Mode.EXACT).count(), 4)

    def test_invalid_config_exits_2(self):
        self.config_path.write_text('{"params": [{"N": 1, "k": 0, "a": 0.5}], "profiles": ["gaussian"], '
                                    '"checks": ["HY"]}', encoding='utf-8')
        with self.assertRaises(CommandError) as ctx:
            self.run_suite_command()
        self.assertEqual(ctx.exception.returncode, 2)

    def test_missing_file_exits_2(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('fka_suite', str(self.dir / 'missing.json'), stdout=StringIO(), stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
