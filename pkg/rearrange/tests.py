import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from core.exceptions import ConstraintViolation, DivergenceError, DomainError
from core.geometry import DeformationParams, ball_measure, lp_norm
from core.profiles import ExpPow, Gaussian, LaguerreMode, PowerCutoff, RadialProfile, parse_profile
from spectral.expansion import random_mixture
from .rearrangement import (
    decreasing_rearrangement,
    distribution_fn,
    jt_check,
    layer_cake,
    level_slabs,
    lorentz_norm,
    lorentz_norm_weak,
    rearranged_mass,
    rearrangement_pairing,
    young_constant,
)
from .weights import check_pitt_exponents, conjugate, hardy_A1, hardy_check, pitt_B1, pitt_B2

EUCLID_1D = DeformationParams(1, 0.0, 2.0)
DUNKL_1D = DeformationParams(1, 0.5, 2.0)
LAGUERRE_1D = DeformationParams(1, 0.5, 1.0)
GAUSSIAN = RadialProfile(0, Gaussian(0.5))
INDICATOR = RadialProfile(0, PowerCutoff(0.0, 1.0))


class DistributionTests(SimpleTestCase):

    def test_gaussian_superlevel_sets_are_balls(self):
        s = np.array([0.1, 0.5, 0.9])
        radius = np.sqrt(np.log(1.0 / s) / 0.5)
        np.testing.assert_allclose(distribution_fn(EUCLID_1D, GAUSSIAN, s=s), ball_measure(EUCLID_1D, radius), rtol=1e-12)

    def test_distribution_vanishes_above_the_peak(self):
        self.assertEqual(float(distribution_fn(EUCLID_1D, GAUSSIAN, s=1.5)), 0.0)

    def test_slabs_agree_with_level_radius(self):
        slabs = level_slabs(DUNKL_1D, GAUSSIAN)
        direct = distribution_fn(DUNKL_1D, GAUSSIAN, s=0.3)
        self.assertTrue(math.isclose(float(slabs.measure_above(0.3)), float(direct), rel_tol=0.1))

    def test_negative_levels_are_refused(self):
        with self.assertRaises(DomainError):
            distribution_fn(EUCLID_1D, GAUSSIAN, s=-1.0)

    def test_odd_degree_has_no_radial_modulus_in_general(self):
        with self.assertRaises(DomainError):
            distribution_fn(DeformationParams(2, 0.0, 2.0), GAUSSIAN, m=1, s=0.5)


class RearrangementTests(SimpleTestCase):

    def test_rearrangement_is_nonincreasing(self):
        t = np.linspace(0.0, 6.0, 31)
        for profile in (GAUSSIAN, RadialProfile(0, LaguerreMode(2)), parse_profile('mixture:ell_max=3,seed=1')):
            star = decreasing_rearrangement(LAGUERRE_1D, profile, t_grid=t)
            self.assertTrue(np.all(np.diff(star.values) <= 1e-12), msg=profile.describe())

    def test_rearrangement_starts_at_the_peak(self):
        star = decreasing_rearrangement(EUCLID_1D, GAUSSIAN, t_grid=[0.0, 1.0])
        self.assertAlmostEqual(float(star.values[0]), 1.0, places=12)
        self.assertAlmostEqual(star.source_mass, lp_norm(EUCLID_1D, GAUSSIAN, 1), places=10)

    def test_indicator_rearranges_to_an_indicator(self):
        star = decreasing_rearrangement(EUCLID_1D, INDICATOR, t_grid=[0.5, 1.9, 2.1, 3.0])
        np.testing.assert_allclose(star.values, [1.0, 1.0, 0.0, 0.0])

    def test_grid_must_increase(self):
        with self.assertRaises(DomainError):
            decreasing_rearrangement(EUCLID_1D, GAUSSIAN, t_grid=[1.0, 0.5])

    @given(p=st.floats(min_value=1.0, max_value=4.0))
    @hypothesis_settings(max_examples=10, deadline=None)
    def test_rearrangement_is_equimeasurable(self, p):
        for params, profile in [(EUCLID_1D, GAUSSIAN), (DUNKL_1D, RadialProfile(0, ExpPow(2.0)))]:
            expected = lp_norm(params, profile, p) ** p
            self.assertTrue(math.isclose(rearranged_mass(params, profile, p), expected, rel_tol=1e-7),
                            msg=f'{params} {profile.describe()} p={p}')

    def test_sign_changing_profile_is_equimeasurable(self):
        mode = RadialProfile(0, LaguerreMode(3))
        for p in (2.0, 4.0):
            expected = lp_norm(LAGUERRE_1D, mode, p) ** p
            self.assertTrue(math.isclose(rearranged_mass(LAGUERRE_1D, mode, p), expected, rel_tol=1e-7))

    def test_layer_cake(self):
        for p in (1.0, 2.0, 3.5):
            expected = lp_norm(DUNKL_1D, GAUSSIAN, p) ** p
            self.assertTrue(math.isclose(layer_cake(DUNKL_1D, GAUSSIAN, p), expected, rel_tol=1e-7))
        mode = RadialProfile(0, LaguerreMode(2))
        for p in (2.0, 4.0):
            self.assertTrue(math.isclose(
                layer_cake(LAGUERRE_1D, mode, p), lp_norm(LAGUERRE_1D, mode, p) ** p, rel_tol=1e-7,
            ))


class LorentzTests(SimpleTestCase):

    def test_diagonal_lorentz_norm_is_lp_norm(self):
        for p in (1.5, 2.0, 3.0):
            self.assertTrue(math.isclose(
                lorentz_norm(EUCLID_1D, GAUSSIAN, p=p, q=p), lp_norm(EUCLID_1D, GAUSSIAN, p), rel_tol=1e-7,
            ), msg=f'p={p}')
        mode = RadialProfile(0, LaguerreMode(2))
        self.assertTrue(math.isclose(
            lorentz_norm(LAGUERRE_1D, mode, p=2.0, q=2.0), lp_norm(LAGUERRE_1D, mode, 2), rel_tol=1e-7,
        ))

    def test_weak_functionals_of_the_indicator(self):
        # the indicator of a ball of measure 2 has weak norm 2^(1/p)
        for p in (1.5, 2.0, 4.0):
            self.assertAlmostEqual(lorentz_norm(EUCLID_1D, INDICATOR, p=p, q=math.inf), 2 ** (1 / p), delta=1e-6)
            self.assertAlmostEqual(lorentz_norm_weak(EUCLID_1D, INDICATOR, p=p), 2 ** (1 / p), delta=1e-2)

    def test_lorentz_needs_interior_p(self):
        with self.assertRaises(DomainError):
            lorentz_norm(EUCLID_1D, GAUSSIAN, p=1.0, q=2.0)
        with self.assertRaises(DomainError):
            lorentz_norm(EUCLID_1D, GAUSSIAN, p=2.0, q=0.5)


class YoungConstantTests(SimpleTestCase):

    def test_power_weights(self):
        params = DUNKL_1D
        self.assertAlmostEqual(young_constant(params, ('power', params.D)), params.K / params.D, places=14)
        self.assertEqual(young_constant(params, ('power', 0.5 * params.D)), math.inf)
        self.assertEqual(young_constant(params, ('power', -1.0)), math.inf)

    def test_theta_weight(self):
        self.assertAlmostEqual(young_constant(DUNKL_1D, 'theta'), DUNKL_1D.K / DUNKL_1D.D, places=14)
        self.assertEqual(young_constant(EUCLID_1D, 'theta'), math.inf)
        with self.assertRaises(DomainError):
            young_constant(DeformationParams(2, 0.0, 2.0), 'theta')

    def test_unknown_weight(self):
        with self.assertRaises(DomainError):
            young_constant(EUCLID_1D, ('log', 1.0))


class JodeitTorchinskyTests(SimpleTestCase):

    def test_ratios_are_finite(self):
        result = jt_check(EUCLID_1D, GAUSSIAN, q=2.0)
        self.assertEqual(len(result['ratios']), 4)
        self.assertTrue(math.isfinite(result['K_q']))
        self.assertGreater(result['K_q'], 0.0)
        self.assertEqual(result['K_q'], max(result['ratios']))

    def test_q_below_two_is_refused(self):
        with self.assertRaises(DomainError):
            jt_check(EUCLID_1D, GAUSSIAN, q=1.5)


class PairingTests(SimpleTestCase):

    def test_monotone_profiles_attain_equality(self):
        direct, star = rearrangement_pairing(DUNKL_1D, GAUSSIAN, RadialProfile(0, ExpPow(0.5)))
        self.assertTrue(math.isclose(direct, star, rel_tol=1e-10))

    def test_pairing_is_bounded_by_rearrangements(self):
        for g in (RadialProfile(0, LaguerreMode(2)), parse_profile('mixture:ell_max=4,seed=3')):
            direct, star = rearrangement_pairing(LAGUERRE_1D, GAUSSIAN, g)
            self.assertLessEqual(direct, star * (1 + 1e-12), msg=g.describe())

    def test_random_pairs_are_bounded_by_rearrangements(self):
        for seed in range(50):
            params = (EUCLID_1D, DUNKL_1D, LAGUERRE_1D)[seed % 3]
            if seed % 2:
                f = random_mixture(params, 0, 1 + seed % 4, seed)
                g = random_mixture(params, 0, 2 + seed % 3, seed + 100)
            else:
                t = 2.0 ** (seed % 7 - 3)
                f = GAUSSIAN.dilate(t)
                g = RadialProfile(0, ExpPow(0.25 + seed / 40.0)).dilate(1.0 / t)
            direct, star = rearrangement_pairing(params, f, g)
            self.assertTrue(math.isfinite(direct) and direct > 0, msg=f'seed={seed}')
            self.assertLessEqual(direct, star * (1 + 1e-12), msg=f'seed={seed}')


class PittTests(SimpleTestCase):

    def test_conjugate(self):
        self.assertEqual(conjugate(2.0), 2.0)
        self.assertEqual(conjugate(1), math.inf)
        self.assertEqual(conjugate(math.inf), 1.0)
        self.assertAlmostEqual(conjugate(1.5), 3.0)

    def test_b1_closed_form(self):
        # D = 1, K = 2, p = q = 2, alpha = -1/4, l = 1/4
        b1, upper = pitt_B1(EUCLID_1D, 2.0, 2.0, -0.25, 0.25)
        self.assertAlmostEqual(b1, 2 * math.sqrt(2), places=12)
        self.assertAlmostEqual(upper, 4 * math.sqrt(2), places=12)

    def test_homogeneity_is_required(self):
        with self.assertRaises(ConstraintViolation) as ctx:
            check_pitt_exponents(EUCLID_1D, 2.0, 2.0, -0.25, 0.3)
        self.assertEqual(ctx.exception.condition, 'eq.homo-pitt')

    def test_alpha_lower_limit(self):
        with self.assertRaises(ConstraintViolation) as ctx:
            check_pitt_exponents(EUCLID_1D, 2.0, 2.0, -0.6, 0.6)
        self.assertEqual(ctx.exception.condition, 'α>−D/q')

    def test_exponent_order(self):
        with self.assertRaises(ConstraintViolation) as ctx:
            check_pitt_exponents(EUCLID_1D, 3.0, 2.0, -0.25, 0.25)
        self.assertEqual(ctx.exception.condition, '1<p≤q<∞')

    def test_b2_diverges_for_power_weights(self):
        with self.assertRaises(DivergenceError):
            pitt_B2(EUCLID_1D, 3.0, 2.0, -0.25, 0.25)
        with self.assertRaises(ConstraintViolation):
            pitt_B2(EUCLID_1D, 2.0, 3.0, -0.25, 0.25)
        with self.assertRaises(DomainError):
            pitt_B2(EUCLID_1D, 3.0, 2.0, -0.25, 0.25, outer='other')


class HardyTests(SimpleTestCase):

    def test_classical_constant(self):
        a1, upper = hardy_A1(-2.0, 0.0, 2.0, 2.0)
        self.assertAlmostEqual(a1, 1.0, places=14)
        self.assertAlmostEqual(upper, 2.0, places=14)

    def test_inequality_holds(self):
        for h in (lambda x: np.exp(-x), lambda x: np.where(x < 1.0, 1.0, 0.0), lambda x: 1.0 / (1.0 + x) ** 2):
            result = hardy_check(-2.0, 0.0, 2.0, 2.0, h)
            self.assertTrue(result['holds'])
            self.assertGreater(result['ratio'], 0.0)

    def test_non_homogeneous_weights_diverge(self):
        with self.assertRaises(DivergenceError):
            hardy_A1(-3.0, 0.0, 2.0, 2.0)
        with self.assertRaises(DivergenceError):
            hardy_A1(-0.5, 0.0, 2.0, 2.0)

    def test_exponents(self):
        with self.assertRaises(DomainError):
            hardy_A1(-2.0, 0.0, 3.0, 2.0)
