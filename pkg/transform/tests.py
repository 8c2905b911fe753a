import cmath
import math
from io import StringIO
from unittest import mock

import numpy as np
from django.core.management import call_command
from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from core.exceptions import CalibrationError, DomainError, InadmissibleParameters, UnsupportedDeformation
from core.geometry import DeformationParams, lp_norm, measure_nodes, weighted_norm
from core.profiles import ExpPow, Gaussian, LaguerreMode, PowerCutoff, RadialProfile, parse_profile
from .engine import fka_1d, fka_radial, inverse_fka, inversion_sign, transform_profile
from .hankel import hankel, output_grid
from .kernels import (
    calibrate_c,
    fka_1d_via_kernel,
    kernel_b_1d,
    kernel_bound,
    semigroup_kernel_1d,
    semigroup_report,
)

EUCLID_1D = DeformationParams(1, 0.0, 2.0)
DUNKL_1D = DeformationParams(1, 0.5, 2.0)
LAGUERRE_1D = DeformationParams(1, 0.5, 1.0)
XI = np.linspace(0.0, 4.0, 17)


def sup_relative(values, expected):
    return float(np.max(np.abs(values - expected)) / np.max(np.abs(expected)))


class KernelTests(SimpleTestCase):

    def test_euclidean_kernel_is_plane_wave(self):
        x = np.linspace(-5.0, 5.0, 21)
        for y in (-2.0, 0.3, 1.7):
            np.testing.assert_allclose(kernel_b_1d(EUCLID_1D, x, y), np.exp(-1j * x * y), atol=1e-12)

    def test_kernel_is_one_at_origin(self):
        self.assertAlmostEqual(abs(kernel_b_1d(LAGUERRE_1D, 0.0, 3.0) - 1.0), 0.0, places=12)

    def test_kernel_is_symmetric(self):
        x, y = 0.7, -1.9
        self.assertAlmostEqual(abs(kernel_b_1d(DUNKL_1D, x, y) - kernel_b_1d(DUNKL_1D, y, x)), 0.0, places=12)

    def test_kernel_bound(self):
        self.assertAlmostEqual(kernel_bound(EUCLID_1D), 1.0, places=6)
        self.assertAlmostEqual(EUCLID_1D.kernel_bound_C, (2 * math.pi) ** -0.5, places=6)

    def test_growing_kernel_has_no_bound(self):
        params = DeformationParams(1, 0.1, 1.0)
        self.assertIsNone(kernel_bound(params))
        with self.assertRaises(InadmissibleParameters):
            params.require_bounded_kernel('test')

    def test_kernel_needs_one_dimension(self):
        with self.assertRaises(DomainError):
            kernel_b_1d(DeformationParams(2, 0.0, 2.0), 1.0, 1.0)


class HankelPathTests(SimpleTestCase):

    def test_gaussian_is_self_dual(self):
        f = RadialProfile(0, Gaussian(0.5))
        result = fka_radial(EUCLID_1D, f, XI)
        self.assertLess(sup_relative(result.values, np.exp(-XI ** 2 / 2)), 1e-8)

    def test_ground_state_is_fixed(self):
        for params in (DUNKL_1D, LAGUERRE_1D, DeformationParams(2, 0.0, 2.0), DeformationParams(1, 0.3, 0.8)):
            f = RadialProfile(0, ExpPow(1.0 / params.a))
            result = fka_radial(params, f, XI)
            self.assertLess(sup_relative(result.values, f.evaluate(params, XI)), 1e-7, msg=str(params))

    def test_laguerre_modes_are_eigenfunctions(self):
        for params, m, ell in [(EUCLID_1D, 1, 2), (LAGUERRE_1D, 0, 3), (LAGUERRE_1D, 1, 1), (DUNKL_1D, 0, 1)]:
            f = RadialProfile(m, LaguerreMode(ell))
            eigenvalue = cmath.exp(-1j * math.pi * (ell + m / params.a))
            result = fka_radial(params, f, XI)
            self.assertLess(sup_relative(result.values, eigenvalue * f.evaluate(params, XI)), 1e-6,
                            msg=f'{params} m={m} ell={ell}')

    def test_eigenrelation_up_to_degree_eight(self):
        for params in (EUCLID_1D, DUNKL_1D, LAGUERRE_1D):
            for m in (0, 1, 2):
                for ell in range(9):
                    f = RadialProfile(m, LaguerreMode(ell))
                    eigenvalue = cmath.exp(-1j * math.pi * (ell + m / params.a))
                    result = fka_radial(params, f, XI)
                    self.assertLess(sup_relative(result.values, eigenvalue * f.evaluate(params, XI)), 1e-6,
                                    msg=f'{params} m={m} ell={ell}')

    def test_indicator_has_sinc_transform(self):
        f = RadialProfile(0, PowerCutoff(0.0, 1.0))
        xi = np.linspace(0.1, 6.0, 12)
        expected = 2.0 * np.sin(xi) / xi / math.sqrt(2 * math.pi)
        self.assertLess(sup_relative(fka_radial(EUCLID_1D, f, xi).values, expected), 1e-8)

    def test_plancherel_on_output_grid(self):
        for params, text in [(EUCLID_1D, 'gaussian:t=0.3'), (LAGUERRE_1D, 'mixture:ell_max=4,seed=2'),
                             (DUNKL_1D, 'mode:ell=2'), (DeformationParams(2, 0.0, 2.0), 'exppow:c=2')]:
            f = parse_profile(text)
            image = fka_radial(params, f).as_profile()
            self.assertTrue(math.isclose(
                weighted_norm(params, image, 2, closed_form=False), lp_norm(params, f, 2), rel_tol=1e-6,
            ), msg=f'{params} {text}')

    def test_plancherel_in_three_dimensions(self):
        for k, a in [(0.0, 1.0), (0.0, 2.0), (1.0, 1.0), (1.0, 2.0)]:
            params = DeformationParams(3, k, a)
            for text in ('gaussian:t=0.5', 'exppow:c=0.8', 'mode:ell=4'):
                for m in (0, 1):
                    f = parse_profile(text, m)
                    image = fka_radial(params, f).as_profile()
                    ratio = weighted_norm(params, image, 2, closed_form=False) / lp_norm(params, f, 2)
                    self.assertLess(abs(ratio - 1.0), 1e-6, msg=f'{params} {text} m={m}')

    def test_plancherel_at_extreme_dilations(self):
        f = RadialProfile(0, Gaussian(0.5))
        for params in (EUCLID_1D, DUNKL_1D):
            for t in (2.0 ** -6, 2.0 ** 6):
                g = f.dilate(t)
                image = fka_radial(params, g).as_profile()
                self.assertTrue(math.isclose(
                    weighted_norm(params, image, 2, closed_form=False), lp_norm(params, g, 2), rel_tol=1e-6,
                ), msg=f'{params} t={t}')

    def test_dilated_output_grid_is_stretched(self):
        f = RadialProfile(0, Gaussian(0.5))
        nu = DUNKL_1D.lam(0)
        base = output_grid(DUNKL_1D, f, nu)
        wide = output_grid(DUNKL_1D, f.dilate(16.0), nu)
        self.assertEqual(wide.size, base.size)
        self.assertAlmostEqual(wide.u_hi, 16.0 * base.u_hi)

    @given(t=st.floats(min_value=0.5, max_value=2.0))
    @hypothesis_settings(max_examples=8, deadline=None)
    def test_dilation(self, t):
        params = LAGUERRE_1D
        f = RadialProfile(0, Gaussian(0.7))
        dilated = fka_radial(params, f.dilate(t), XI).values
        rescaled = t ** (-params.D) * fka_radial(params, f, XI / t).values
        self.assertLess(sup_relative(dilated, rescaled), 1e-7)

    def test_output_grid_covers_the_tail(self):
        f = RadialProfile(0, Gaussian(0.5))
        grid = output_grid(EUCLID_1D, f, EUCLID_1D.lam(0))
        self.assertGreaterEqual(grid.u_hi, 4.0)
        tail = hankel(EUCLID_1D, f, EUCLID_1D.lam(0), grid.radii(2.0)[-1:])
        self.assertLess(abs(tail[0]), 1e-5)

    def test_fka_1d_splits_even_and_odd(self):
        even, odd = fka_1d(EUCLID_1D, RadialProfile(0, Gaussian(0.5)), RadialProfile(1, Gaussian(0.5)), XI)
        self.assertEqual((even.m, odd.m), (0, 1))
        # F(x e^{-x^2/2}) = -i xi e^{-xi^2/2}
        self.assertLess(sup_relative(odd.values, -1j * np.exp(-XI ** 2 / 2)), 1e-8)


class PathAgreementTests(SimpleTestCase):

    def test_kernel_and_hankel_paths_agree(self):
        for params, text, m in [(LAGUERRE_1D, 'gaussian:t=0.5', 0), (DUNKL_1D, 'exppow:c=0.5', 1),
                                (EUCLID_1D, 'mode:ell=2', 0)]:
            f = parse_profile(text, m)
            kernel = transform_profile(params, f, XI, path='kernel')
            hankel_path = transform_profile(params, f, XI, path='hankel')
            self.assertEqual(kernel.path, 'kernel')
            self.assertLess(sup_relative(kernel.values, hankel_path.values), 1e-6, msg=f'{params} {text}')

    def test_three_paths_agree_on_low_modes(self):
        for params in (EUCLID_1D, DUNKL_1D, LAGUERRE_1D):
            for m in (0, 1):
                for ell in range(5):
                    f = RadialProfile(m, LaguerreMode(ell))
                    hankel_path = transform_profile(params, f, XI, path='hankel')
                    for path in ('kernel', 'spectral'):
                        other = transform_profile(params, f, XI, path=path)
                        self.assertLess(sup_relative(other.values, hankel_path.values), 1e-6,
                                        msg=f'{path} {params} m={m} ell={ell}')

    def test_spectral_and_hankel_paths_agree_on_mixtures(self):
        f = parse_profile('mixture:ell_max=5,seed=4', m=1)
        spectral = transform_profile(LAGUERRE_1D, f, XI, path='spectral')
        hankel_path = transform_profile(LAGUERRE_1D, f, XI, path='hankel')
        self.assertLess(sup_relative(spectral.values, hankel_path.values), 1e-7)

    def test_unknown_path(self):
        with self.assertRaises(DomainError):
            transform_profile(EUCLID_1D, RadialProfile(0, Gaussian()), XI, path='fft')

    def test_kernel_path_refuses_higher_degrees(self):
        with self.assertRaises(DomainError):
            fka_1d_via_kernel(EUCLID_1D, RadialProfile(2, Gaussian()), XI)
        with self.assertRaises(DomainError):
            fka_1d_via_kernel(DeformationParams(2, 0.0, 2.0), RadialProfile(0, Gaussian()), XI)


class CalibrationTests(SimpleTestCase):

    def test_calibrated_constant_matches_closed_form(self):
        for params in (EUCLID_1D, DUNKL_1D, LAGUERRE_1D):
            c = calibrate_c(params)
            self.assertTrue(math.isclose(c.real, params.c_ka, rel_tol=1e-7), msg=str(params))
            self.assertLess(abs(c.imag), 1e-7)

    def test_kernel_path_reports_the_calibrated_constant(self):
        f = RadialProfile(0, Gaussian(0.5))
        result = transform_profile(DUNKL_1D, f, XI, path='kernel')
        self.assertIsNotNone(result.constant)
        self.assertTrue(math.isclose(result.constant.real, DUNKL_1D.c_ka, rel_tol=1e-7))
        self.assertIsNone(transform_profile(DUNKL_1D, f, XI, path='hankel').constant)

    def test_constant_must_survive_refinement(self):
        params = DeformationParams(1, 0.25, 2.0)
        with mock.patch('transform.kernels._calibrate_once', side_effect=[0.4, 0.4 * (1 + 1e-6)]):
            with self.assertRaises(CalibrationError):
                calibrate_c(params)

    def test_transform_command_prints_the_constant(self):
        out, err = StringIO(), StringIO()
        call_command('fka_transform', N=1, k=0.5, a=2.0, profile='gaussian:t=0.5', grid='0:2:5', path='kernel',
                     stdout=out, stderr=err)
        self.assertIn('calibrated', err.getvalue())
        self.assertEqual(len(out.getvalue().strip().splitlines()), 6)


class InversionTests(SimpleTestCase):

    def test_inversion_signs(self):
        self.assertEqual(inversion_sign(LAGUERRE_1D, 3), 1)
        self.assertEqual(inversion_sign(EUCLID_1D, 1), -1)
        self.assertEqual(inversion_sign(EUCLID_1D, 2), 1)
        self.assertEqual(inversion_sign(DeformationParams(1, 0.5, 0.5), 1), 1)
        self.assertEqual(inversion_sign(DeformationParams(1, 0.5, 2.0 / 3.0), 1), -1)

    def test_no_inversion_formula(self):
        with self.assertRaises(UnsupportedDeformation):
            inversion_sign(DeformationParams(1, 0.5, 0.75), 0)

    def test_transforming_twice_reflects(self):
        for a in (2.0, 1.0, 0.5):
            params = DeformationParams(1, 0.5, a)
            for text, m in [('exppow:c=0.3', 0), ('mixture:ell_max=3,seed=4', 1)]:
                f = parse_profile(text, m)
                radii, values, weights = measure_nodes(params, f, extra_power=2 * m)
                image = fka_radial(params, f).as_profile()
                twice = fka_radial(params, image, radii).values
                expected = inversion_sign(params, m) * values
                error = math.sqrt(float(np.sum(np.abs(twice - expected) ** 2 * weights)))
                norm = math.sqrt(float(np.sum(np.abs(values) ** 2 * weights)))
                self.assertLess(error, 1e-6 * norm, msg=f'a={a} {text} m={m}')

    def test_inverse_undoes_eigenphase(self):
        f = RadialProfile(1, LaguerreMode(1))
        back = inverse_fka(EUCLID_1D, f, XI)
        # F^-1 multiplies mode (ell, m) by exp(+i pi (ell + m/a))
        eigenvalue = cmath.exp(1j * math.pi * 1.5)
        self.assertLess(sup_relative(back.values, eigenvalue * f.evaluate(EUCLID_1D, XI)), 1e-6)


class SemigroupTests(SimpleTestCase):

    def test_operator_norm_matches_prediction(self):
        for params in (EUCLID_1D, DUNKL_1D):
            for z in (0.5, 1.0, 1.0 + 0.5j):
                report = semigroup_report(params, z)
                ratio = report['largest_singular_value'] / report['predicted_norm']
                self.assertLess(abs(ratio - 1.0), 0.01, msg=f'{params} z={z}')
            self.assertLess(semigroup_report(params, 0.5)['composition_error'], 0.01)

    def test_kernel_refuses_negative_time(self):
        with self.assertRaises(DomainError):
            semigroup_kernel_1d(EUCLID_1D, 1.0, 1.0, -0.5)

    def test_kernel_is_positive_for_real_time(self):
        x = np.linspace(-3.0, 3.0, 13)
        values = semigroup_kernel_1d(DUNKL_1D, x[:, None], x[None, :], 0.7)
        self.assertTrue(np.all(values.real > 0))
        self.assertLess(float(np.max(np.abs(values.imag))), 1e-12)
