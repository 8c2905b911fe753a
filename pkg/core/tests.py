import math

import mpmath
import numpy as np
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings as hypothesis_settings, strategies as st
from scipy import special

from .exceptions import (
    DivergenceError,
    DomainError,
    InadmissibleParameters,
    QuadratureError,
    SpecialFunctionDomainError,
)
from .geometry import (
    DeformationParams,
    ball_mass,
    ball_measure,
    entropy,
    lp_norm,
    radial_integral,
    require_radial_modulus,
    weighted_norm,
)
from .profiles import (
    ExpPow,
    Gaussian,
    LaguerreMode,
    PowerCutoff,
    RadialProfile,
    Sampled,
    mixture_phases,
    parse_profile,
)
from .quadrature import QuadratureSpec, build_grid, from_canonical, to_canonical
from .specfun import bessel_i_norm, bessel_j_norm, gamma_ratio, laguerre, laguerre_table, log_gamma
from .workers import chunked, run_ordered, worker_count

EUCLID_1D = DeformationParams(1, 0.0, 2.0)


# ── Special functions ─────────────────────────────────────────────────────────

class LaguerreTests(SimpleTestCase):

    def test_matches_mpmath(self):
        for ell, lam, t in [(0, 0.0, 1.3), (3, -0.5, 2.0), (7, 1.5, 0.25), (12, 0.0, 9.0)]:
            expected = float(mpmath.laguerre(ell, lam, t))
            self.assertAlmostEqual(laguerre(ell, lam, t), expected, delta=1e-10 * max(1.0, abs(expected)))

    def test_degree_out_of_range(self):
        with self.assertRaises(SpecialFunctionDomainError):
            laguerre(65, 0.0, 1.0)
        with self.assertRaises(SpecialFunctionDomainError):
            laguerre(2, -1.0, 1.0)

    @given(
        lam=st.floats(min_value=-0.9, max_value=5.0),
        t=st.floats(min_value=0.0, max_value=15.0),
    )
    @hypothesis_settings(max_examples=50, deadline=None)
    def test_table_rows_match_scipy(self, lam, t):
        table = laguerre_table(10, lam, np.array([t]))
        for ell in range(11):
            expected = special.eval_genlaguerre(ell, lam, t)
            self.assertTrue(math.isclose(table[ell, 0], expected, rel_tol=1e-8, abs_tol=1e-7))


class BesselTests(SimpleTestCase):

    def test_j_norm_at_zero(self):
        self.assertAlmostEqual(bessel_j_norm(-0.5, 0.0), 1.0 / math.gamma(0.5), places=14)
        self.assertAlmostEqual(bessel_j_norm(1.0, 0.0), 1.0, places=14)

    def test_j_norm_matches_mpmath_across_cutoff(self):
        for nu in (-0.5, 0.0, 0.75, 3.0):
            for w in (0.1, 1.99, 2.01, 7.5, 40.0):
                expected = float(mpmath.besselj(nu, w) * (w / 2) ** (-nu))
                self.assertTrue(math.isclose(bessel_j_norm(nu, w), expected, rel_tol=1e-9, abs_tol=1e-12))

    def test_j_norm_half_order_is_cosine(self):
        w = np.linspace(0.0, 20.0, 41)
        np.testing.assert_allclose(bessel_j_norm(-0.5, w), np.cos(w) / math.sqrt(math.pi), atol=1e-12)

    def test_i_norm_scaled_matches_mpmath(self):
        for lam in (-0.5, 0.5, 2.0):
            for w in (0.3 + 0.4j, 5.0 - 2.0j, 30.0 + 1.0j):
                expected = complex(mpmath.besseli(lam, w) * (w / 2) ** (-lam) * mpmath.exp(-abs(w.real)))
                got = bessel_i_norm(lam, w, scaled=True)
                self.assertLess(abs(got - expected), 1e-9 * abs(expected))

    def test_negative_argument_refused(self):
        with self.assertRaises(SpecialFunctionDomainError):
            bessel_j_norm(0.0, -1.0)


class GammaTests(SimpleTestCase):

    def test_log_gamma(self):
        self.assertAlmostEqual(log_gamma(0.5), 0.5 * math.log(math.pi), places=13)
        with self.assertRaises(SpecialFunctionDomainError):
            log_gamma(0.0)

    def test_ratio_of_large_arguments(self):
        expected = float(mpmath.gamma(180.5) / mpmath.gamma(180))
        self.assertTrue(math.isclose(gamma_ratio(180.5, 180.0), expected, rel_tol=1e-10))


# ── Parameters and measure ────────────────────────────────────────────────────

class DeformationParamsTests(SimpleTestCase):

    def test_inadmissible_triple_names_condition(self):
        with self.assertRaises(InadmissibleParameters) as ctx:
            DeformationParams(1, 0.0, -1.0)
        self.assertEqual(ctx.exception.condition, 'a+2⟨k⟩+N>2')
        self.assertIn('a+2⟨k⟩+N>2', str(ctx.exception))

    def test_inadmissible_is_domain_error(self):
        with self.assertRaises(DomainError):
            DeformationParams(1, 0.0, 0.5)

    def test_derived_constants(self):
        p = DeformationParams(1, 0.5, 1.0)
        self.assertEqual(p.D, 1.0)
        self.assertEqual(p.K, 2.0)
        self.assertAlmostEqual(p.nu_a, 0.0)
        self.assertAlmostEqual(p.lam(1), 2.0)

    def test_unitary_constant_on_euclidean_line(self):
        self.assertAlmostEqual(EUCLID_1D.c_ka, (2 * math.pi) ** -0.5, places=14)

    def test_sphere_mass_in_two_dimensions(self):
        self.assertAlmostEqual(DeformationParams(2, 0.0, 2.0).K, 2 * math.pi, places=12)

    def test_ball_measure(self):
        self.assertAlmostEqual(float(ball_measure(EUCLID_1D, 3.0)), 6.0)
        with self.assertRaises(DomainError):
            ball_measure(EUCLID_1D, -1.0)

    def test_radial_modulus_refused_for_angular_factors(self):
        with self.assertRaises(DomainError):
            require_radial_modulus(DeformationParams(2, 0.0, 2.0), 1, 'test')
        require_radial_modulus(DeformationParams(1, 0.0, 2.0), 1, 'test')

    def test_bounded_kernel_cases(self):
        self.assertEqual(DeformationParams(3, 1.0, 1.0).bounded_kernel_case(), 'a in {1,2}')
        self.assertEqual(DeformationParams(2, 0.0, 2.0 / 3.0).bounded_kernel_case(), 'N=2, k=0, a=2/n')
        self.assertIsNone(DeformationParams(3, 0.0, 2.0 / 3.0).bounded_kernel_case())

    def test_unknown_kernel_bound_is_refused(self):
        with self.assertRaises(InadmissibleParameters) as ctx:
            DeformationParams(3, 0.0, 2.0 / 3.0).require_bounded_kernel('test')
        self.assertEqual(ctx.exception.condition, 'sup|B_{k,a}|<∞')
        plane = DeformationParams(2, 0.0, 2.0 / 3.0)
        self.assertIsNone(plane.kernel_bound_C)
        with self.assertRaises(InadmissibleParameters) as ctx:
            plane.require_bounded_kernel('test')
        self.assertEqual(ctx.exception.condition, 'sup|B_{k,a}| known')
        supplied = DeformationParams(2, 0.0, 2.0 / 3.0, kernel_bound=1.5)
        self.assertAlmostEqual(supplied.require_bounded_kernel('test'), 1.5 * abs(supplied.c_ka), places=14)


# ── Norms ─────────────────────────────────────────────────────────────────────

class NormTests(SimpleTestCase):

    def test_gaussian_l2_norm(self):
        f = RadialProfile(0, Gaussian(0.5))
        self.assertAlmostEqual(lp_norm(EUCLID_1D, f, 2), math.pi ** 0.25, places=12)

    def test_gaussian_closed_form_agrees_with_quadrature(self):
        params = DeformationParams(1, 0.5, 2.0)
        f = RadialProfile(0, Gaussian(0.7))
        for p, power in [(1.0, 0.0), (1.5, 0.3), (2.0, 1.0), (3.0, 0.0)]:
            closed = weighted_norm(params, f, p, power)
            numeric = weighted_norm(params, f, p, power, closed_form=False)
            self.assertTrue(math.isclose(closed, numeric, rel_tol=1e-9))

    def test_exppow_closed_form_agrees_with_quadrature(self):
        params = DeformationParams(1, 0.5, 1.0)
        f = RadialProfile(1, ExpPow(0.5), scale=1.5)
        for p in (1.0, 2.0, 2.5):
            self.assertTrue(math.isclose(
                weighted_norm(params, f, p), weighted_norm(params, f, p, closed_form=False), rel_tol=1e-9,
            ))

    def test_power_cutoff(self):
        f = RadialProfile(0, PowerCutoff(0.25, 2.0))
        expected = (2.0 * 2.0 ** 0.5 / 0.5) ** 0.5
        self.assertAlmostEqual(lp_norm(EUCLID_1D, f, 2), expected, places=12)
        self.assertAlmostEqual(lp_norm(EUCLID_1D, f, 2, closed_form=False), expected, places=9)

    def test_power_cutoff_divergence(self):
        f = RadialProfile(0, PowerCutoff(0.5, 1.0))
        with self.assertRaises(DivergenceError):
            lp_norm(EUCLID_1D, f, 2)
        with self.assertRaises(DivergenceError):
            lp_norm(EUCLID_1D, f, 2, closed_form=False)

    def test_sup_norm(self):
        f = RadialProfile(1, Gaussian(0.5))
        self.assertAlmostEqual(lp_norm(EUCLID_1D, f, math.inf), math.exp(-0.5), places=9)

    def test_ball_masses_add_up(self):
        params = DeformationParams(1, 0.5, 1.0)
        f = RadialProfile(0, ExpPow(1.0))
        inside = ball_mass(params, f, 1.3)
        outside = ball_mass(params, f, 1.3, outside=True)
        self.assertTrue(math.isclose(inside + outside, lp_norm(params, f, 2) ** 2, rel_tol=1e-9))

    def test_masses_of_dilated_profiles(self):
        params = DeformationParams(1, 0.5, 2.0)
        f = RadialProfile(0, Gaussian(0.5))
        for t in (1.0 / 64, 0.25, 4.0, 64.0):
            expected = t ** (-params.D) * ball_mass(params, f, 1.5)
            self.assertTrue(math.isclose(ball_mass(params, f.dilate(t), 1.5 / t), expected, rel_tol=1e-10), msg=f't={t}')

    def test_radial_integral(self):
        f = RadialProfile(0, ExpPow(1.0))
        # int_0^inf exp(-r^2) r^2 dr
        self.assertAlmostEqual(radial_integral(EUCLID_1D, f, 2.0), math.sqrt(math.pi) / 4, places=10)

    def test_p_below_one_refused(self):
        with self.assertRaises(DomainError):
            lp_norm(EUCLID_1D, RadialProfile(0, Gaussian()), 0.5)


class EntropyTests(SimpleTestCase):

    def test_gaussian_entropy(self):
        f = RadialProfile(0, Gaussian(0.5))
        unit = f.scaled(1.0 / lp_norm(EUCLID_1D, f, 2))
        self.assertAlmostEqual(entropy(EUCLID_1D, unit, squared=True), 0.5 * math.log(math.pi * math.e), places=8)

    def test_indicator_entropy(self):
        # h = 1/2 on [-1, 1]: entropy ln 2
        h = RadialProfile(0, PowerCutoff(0.0, 1.0), amplitude=0.5)
        self.assertAlmostEqual(entropy(EUCLID_1D, h), math.log(2.0), places=10)


# ── Profiles ──────────────────────────────────────────────────────────────────

class ProfileTests(SimpleTestCase):

    def test_parse_round_trip_description(self):
        for text in ('gaussian:t=0.5', 'exppow:c=2', 'cutoff:alpha=0.25,r0=2', 'indicator:r0=1', 'mode:ell=3'):
            self.assertEqual(parse_profile(text).describe(), text)

    def test_parse_amp_and_scale(self):
        f = parse_profile('gaussian:t=1,amp=2,scale=3', m=1)
        self.assertEqual(f.m, 1)
        self.assertEqual(f.amplitude, 2.0)
        self.assertEqual(f.scale, 3.0)

    def test_parse_errors(self):
        for text in ('bump:t=1', 'gaussian:x=1', 'gaussian:t', 'gaussian:t=abc', 'gaussian:t=-1'):
            with self.assertRaises(DomainError, msg=text):
                parse_profile(text)

    def test_mixture_phases(self):
        coeffs = np.asarray(mixture_phases(5, 3))
        np.testing.assert_allclose(np.abs(coeffs), 1.0 / math.sqrt(6.0))
        np.testing.assert_array_equal(coeffs, np.asarray(mixture_phases(5, 3)))

    def test_dilation(self):
        f = RadialProfile(0, Gaussian(1.0)).dilate(2.0)
        self.assertAlmostEqual(complex(f.evaluate(EUCLID_1D, 0.5)).real, math.exp(-1.0))

    def test_sampled_profile_interpolates_and_vanishes_outside(self):
        grid = np.linspace(0.0, 2.0, 201)
        f = RadialProfile(0, Sampled(grid, np.exp(-grid ** 2)))
        self.assertAlmostEqual(complex(f.evaluate(EUCLID_1D, 1.0)).real, math.exp(-1.0), places=6)
        self.assertEqual(complex(f.evaluate(EUCLID_1D, 3.0)), 0.0)

    def test_sampled_rejects_unsorted_grid(self):
        with self.assertRaises(DomainError):
            Sampled(np.array([0.0, 2.0, 1.0]), np.zeros(3))

    def test_monotone_level_radius(self):
        f = RadialProfile(0, Gaussian(1.0))
        self.assertAlmostEqual(float(f.level_radius(EUCLID_1D, math.exp(-4.0))), 2.0)

    def test_laguerre_mode_is_not_monotone(self):
        self.assertFalse(RadialProfile(0, LaguerreMode(2)).is_monotone)
        with self.assertRaises(DomainError):
            RadialProfile(0, LaguerreMode(2)).level_radius(EUCLID_1D, 0.1)


# ── Quadrature ────────────────────────────────────────────────────────────────

class QuadratureTests(SimpleTestCase):

    @given(r=st.floats(min_value=1e-6, max_value=1e3), a=st.floats(min_value=0.2, max_value=4.0))
    @hypothesis_settings(max_examples=50, deadline=None)
    def test_canonical_variable_inverts(self, r, a):
        self.assertTrue(math.isclose(float(from_canonical(a, to_canonical(a, r))), r, rel_tol=1e-12))

    def test_weighted_integral_on_grid(self):
        grid = build_grid(3.0, breaks=(1.0,))
        # int_0^3 u^(-1/2) du = 2 sqrt(3)
        self.assertAlmostEqual(float(np.sum(grid.weights_for(-0.5))), 2 * math.sqrt(3.0), places=10)

    def test_breakpoint_is_a_panel_edge(self):
        grid = build_grid(2.0, breaks=(1.0,), width=0.3)
        self.assertFalse(np.any((grid.nodes > 1.0 - 1e-12) & (grid.nodes < 1.0 + 1e-12)))
        # polynomial exact on each side
        self.assertAlmostEqual(float(np.sum(grid.weights * np.where(grid.nodes < 1.0, 1.0, 0.0))), 1.0, places=11)

    def test_node_budget(self):
        spec = QuadratureSpec(max_nodes=50)
        with self.assertRaises(QuadratureError):
            build_grid(100.0, width=0.1, spec=spec)

    def test_dilated_grid(self):
        grid = build_grid(3.0, breaks=(1.0,)).dilated(2.0)
        self.assertEqual(grid.u_hi, 6.0)
        # int_0^6 u du = 18
        self.assertAlmostEqual(float(np.sum(grid.weights_for(1.0))), 18.0, places=10)

    def test_width_for_guard(self):
        spec = QuadratureSpec()
        self.assertEqual(spec.width_for(0.0), spec.max_width)
        self.assertAlmostEqual(spec.width_for(100.0), spec.oscillation_guard / 100.0)


# ── Workers ───────────────────────────────────────────────────────────────────

class WorkerTests(SimpleTestCase):

    @override_settings(FKA_THREADS=4)
    def test_results_keep_input_order(self):
        self.assertEqual(run_ordered(lambda x: x * x, range(50)), [x * x for x in range(50)])

    @override_settings(FKA_THREADS=2)
    def test_worker_cap(self):
        self.assertEqual(worker_count(), 2)
        self.assertEqual(worker_count(16), 2)
        self.assertEqual(worker_count(0), 1)

    def test_chunks_are_fixed_size(self):
        self.assertEqual([len(c) for c in chunked(list(range(10)), 4)], [4, 4, 2])
