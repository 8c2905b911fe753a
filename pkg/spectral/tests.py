import math

import mpmath
import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from core.exceptions import DomainError
from core.geometry import DeformationParams, lp_norm
from core.profiles import Gaussian, PowerCutoff, RadialProfile
from core.quadrature import build_grid
from .expansion import (
    apply_power,
    eigenvalues,
    laguerre_mode,
    mode_norm_sq,
    project,
    random_mixture,
    spectral_fka,
    synthesize,
    transform_order,
)

EUCLID_1D = DeformationParams(1, 0.0, 2.0)
LAGUERRE_1D = DeformationParams(1, 0.5, 1.0)
FRACTIONAL_1D = DeformationParams(1, 0.5, 2.0 / 3.0)


class ModeTests(SimpleTestCase):

    def test_ground_state_norm(self):
        self.assertAlmostEqual(mode_norm_sq(EUCLID_1D, 0, 0), math.sqrt(math.pi) / 2, places=14)

    def test_mode_norm_matches_mpmath(self):
        params, m, ell = LAGUERRE_1D, 1, 3
        lam = params.lam(m)
        expected = mpmath.quad(
            lambda r: (mpmath.laguerre(ell, lam, 2 * r) * mpmath.exp(-r)) ** 2 * r ** (lam + 0), [0, mpmath.inf],
        )
        self.assertTrue(math.isclose(mode_norm_sq(params, m, ell), float(expected), rel_tol=1e-10))

    def test_modes_are_orthogonal(self):
        params = LAGUERRE_1D
        grid = build_grid(12.0)
        radii = grid.radii(params.a)
        e = params.a * (params.lam(0) + 1) - 1
        weights = grid.measure_weights(params.a, e)
        m2 = laguerre_mode(params, 0, 2).evaluate(params, radii)
        m5 = laguerre_mode(params, 0, 5).evaluate(params, radii)
        self.assertLess(abs(np.sum(m2 * m5 * weights)), 1e-10)


class ProjectionTests(SimpleTestCase):

    def test_mixture_coefficients_are_recovered(self):
        f = random_mixture(LAGUERRE_1D, 0, 5, seed=11)
        coeffs = project(LAGUERRE_1D, f, L_max=10)
        np.testing.assert_allclose(coeffs.coeffs[:6], np.asarray(f.descriptor.coeffs), atol=1e-10)
        np.testing.assert_allclose(coeffs.coeffs[6:], 0.0, atol=1e-10)
        self.assertLess(coeffs.residual, 1e-6)

    def test_gaussian_expansion_converges(self):
        f = RadialProfile(0, Gaussian(0.3))
        coeffs = project(EUCLID_1D, f)
        self.assertLess(coeffs.residual, 1e-6)
        self.assertTrue(math.isclose(coeffs.norm, lp_norm(EUCLID_1D, f, 2), rel_tol=1e-8))

    def test_ground_state_is_first_mode(self):
        f = RadialProfile(0, Gaussian(0.5))
        coeffs = project(EUCLID_1D, f, L_max=6)
        np.testing.assert_allclose(coeffs.coeffs, [1, 0, 0, 0, 0, 0, 0], atol=1e-12)

    def test_truncated_expansion_leaves_a_residual(self):
        f = RadialProfile(0, Gaussian(1.0)) + RadialProfile(0, Gaussian(0.5))
        coeffs = project(EUCLID_1D, f, L_max=8)
        self.assertGreater(coeffs.residual, 0.0)
        self.assertLess(coeffs.residual, 1e-3)

    def test_indicator_is_projected_on_the_grid(self):
        f = RadialProfile(0, PowerCutoff(0.0, 1.0))
        coarse = project(EUCLID_1D, f, L_max=10)
        fine = project(EUCLID_1D, f, L_max=40)
        self.assertLess(fine.residual, coarse.residual)
        self.assertLess(fine.residual, lp_norm(EUCLID_1D, f, 2))

    def test_degree_cap(self):
        with self.assertRaises(DomainError):
            project(EUCLID_1D, RadialProfile(0, Gaussian()), L_max=70)


class DiagonalActionTests(SimpleTestCase):

    def test_eigenvalues(self):
        np.testing.assert_allclose(eigenvalues(EUCLID_1D, 0, 3), [1, -1, 1, -1], atol=1e-15)
        np.testing.assert_allclose(eigenvalues(EUCLID_1D, 1, 1), [-1j, 1j], atol=1e-15)

    def test_transform_preserves_norm(self):
        coeffs = project(LAGUERRE_1D, random_mixture(LAGUERRE_1D, 1, 6, seed=3), L_max=8)
        self.assertAlmostEqual(spectral_fka(coeffs).norm, coeffs.norm, places=12)

    @given(seed=st.integers(min_value=0, max_value=10_000), m=st.integers(min_value=0, max_value=3))
    @hypothesis_settings(max_examples=20, deadline=None)
    def test_transform_has_finite_order(self, seed, m):
        for params in (EUCLID_1D, LAGUERRE_1D, FRACTIONAL_1D):
            coeffs = project(params, random_mixture(params, m, 4, seed), L_max=6)
            cycled = apply_power(coeffs, transform_order(params.a))
            np.testing.assert_allclose(cycled.coeffs, coeffs.coeffs, atol=1e-9)

    def test_inverse_power(self):
        coeffs = project(EUCLID_1D, random_mixture(EUCLID_1D, 0, 3, seed=1), L_max=4)
        back = apply_power(spectral_fka(coeffs), -1)
        np.testing.assert_allclose(back.coeffs, coeffs.coeffs, atol=1e-12)

    def test_transform_order(self):
        self.assertEqual(transform_order(2.0), 4)
        self.assertEqual(transform_order(1.0), 2)
        self.assertEqual(transform_order(2.0 / 3.0), 4)
        with self.assertRaises(DomainError):
            transform_order(math.sqrt(2.0))


class SynthesisTests(SimpleTestCase):

    def test_random_mixture_has_unit_norm(self):
        for m in (0, 1, 2):
            f = random_mixture(LAGUERRE_1D, m, 6, seed=5)
            self.assertAlmostEqual(lp_norm(LAGUERRE_1D, f, 2), 1.0, places=12)
            self.assertAlmostEqual(lp_norm(LAGUERRE_1D, f, 2, closed_form=False), 1.0, places=8)

    def test_synthesis_on_quadrature_grid_keeps_the_norm(self):
        coeffs = project(LAGUERRE_1D, random_mixture(LAGUERRE_1D, 0, 4, seed=9), L_max=6)
        sampled = synthesize(LAGUERRE_1D, coeffs, build_grid(14.0))
        self.assertAlmostEqual(lp_norm(LAGUERRE_1D, sampled, 2, closed_form=False), coeffs.norm, places=8)

    def test_synthesis_on_radii(self):
        f = RadialProfile(0, Gaussian(0.5))
        coeffs = project(EUCLID_1D, f, L_max=4)
        r = np.linspace(0.0, 3.0, 7)
        sampled = synthesize(EUCLID_1D, coeffs, r)
        np.testing.assert_allclose(sampled.descriptor.values, np.exp(-r ** 2 / 2), atol=1e-12)
