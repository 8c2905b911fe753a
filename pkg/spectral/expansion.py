"""
Laguerre eigenbasis of the deformed oscillator, for fixed degree m.

    mode_l(r) = L_l^(lam)((2/a) r^a) exp(-r^a / a),   lam = lam(m)

The transform acts diagonally: mode_l -> exp(-i pi (l + m/a)) mode_l.

Entry points
------------
laguerre_mode(params, m, ell), mode_norm_sq(params, m, ell)
project(params, profile, m, L_max)       -> SpectralCoeffs
spectral_fka(coeffs)                     -> SpectralCoeffs
synthesize(params, coeffs, grid)         -> RadialProfile (sampled)
apply_power(coeffs, n), transform_order(a)
random_mixture(params, m, ell_max, seed) -> unit-norm RadialProfile
"""

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
from django.conf import settings
from scipy import special

from core.exceptions import DomainError
from core.profiles import LaguerreMode, ModeMixture, RadialProfile, Sampled, mixture_phases
from core.quadrature import QuadratureGrid
from core.specfun import LAGUERRE_MAX_DEGREE, laguerre_table, log_gamma

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpectralCoeffs:
    """
    c_0 .. c_L of a profile of degree m; residual is the L^2 norm of what
    the first L+1 modes do not capture.
    """
    params: object
    m: int
    coeffs: np.ndarray
    lambda_m: float
    residual: float = 0.0

    @property
    def L_max(self):
        return self.coeffs.size - 1

    @property
    def norm(self):
        """sqrt(K sum |c_l|^2 mode_norm_sq(l))."""
        return math.sqrt(self.params.K * float(np.sum(np.abs(self.coeffs) ** 2 * _norms(self.params, self.m, self.L_max))))

    def as_profile(self):
        return RadialProfile(self.m, ModeMixture(tuple(self.coeffs)))


def laguerre_mode(params, m, ell):
    if params.lam(m) <= -1:
        raise DomainError(f'lam({m}) must exceed -1')
    return RadialProfile(m, LaguerreMode(ell))


def mode_norm_sq(params, m, ell):
    """int_0^inf mode_l^2 r^(a(lam+1)-1) dr = (a/2)^lam Gamma(l+lam+1) / (2 l!)."""
    lam = params.lam(m)
    return math.exp(lam * math.log(params.a / 2.0) + log_gamma(ell + lam + 1.0) - log_gamma(ell + 1.0)) / 2.0


def _norms(params, m, L_max):
    return np.array([mode_norm_sq(params, m, ell) for ell in range(L_max + 1)])


# ── Projection ────────────────────────────────────────────────────────────────

def _inner_products_laguerre(params, profile, lam, L_max):
    """
    <psi, mode_l> through t = (2/a) r^a:

        (a/2)^lam / 2 * int psi(r(t)) e^(t/2) L_l(t) t^lam e^(-t) dt
    """
    t, w = special.roots_genlaguerre(2 * L_max + 8, lam)
    r = (params.a * t / 2.0) ** (1.0 / params.a)
    with np.errstate(over='ignore', invalid='ignore'):
        g = profile.evaluate(params, r) * np.exp(t / 2.0)
    g = np.nan_to_num(g, nan=0.0, posinf=0.0, neginf=0.0)
    table = laguerre_table(L_max, lam, t)
    return (params.a / 2.0) ** lam / 2.0 * (table * w) @ g


def _inner_products_grid(params, profile, lam, L_max, spec):
    """Same inner products on the composite grid, for compact or sampled profiles."""
    from core.geometry import measure_nodes

    radii, values, weights = measure_nodes(
        params, profile, extra_power=profile.m * 2.0, spec=spec,
    )
    ta = 2.0 * radii ** params.a / params.a
    modes = laguerre_table(L_max, lam, ta) * np.exp(-ta / 2.0)
    return modes @ (values * weights) / params.K


def project(params, profile, m=None, L_max=None, spec=None):
    from core.geometry import lp_norm

    m = profile.m if m is None else m
    L_max = settings.FKA_LMAX if L_max is None else int(L_max)
    if not 0 <= L_max <= LAGUERRE_MAX_DEGREE:
        raise DomainError(f'L_max must lie in [0, {LAGUERRE_MAX_DEGREE}], got {L_max}')
    profile = profile.with_degree(m)
    lam = params.lam(m)
    if profile.is_compact or profile.singular_power:
        inner = _inner_products_grid(params, profile, lam, L_max, spec)
    else:
        inner = _inner_products_laguerre(params, profile, lam, L_max)
    norms = _norms(params, m, L_max)
    coeffs = inner / norms
    total_sq = lp_norm(params, profile, 2.0, spec=spec) ** 2
    captured = params.K * float(np.sum(np.abs(coeffs) ** 2 * norms))
    residual = math.sqrt(max(0.0, total_sq - captured))
    logger.debug('projected %s onto %d modes, residual %.3e', profile.describe(), L_max + 1, residual)
    return SpectralCoeffs(params, m, coeffs.astype(complex), lam, residual)


# ── Diagonal action ───────────────────────────────────────────────────────────

def eigenvalues(params, m, L_max):
    ell = np.arange(L_max + 1)
    return np.exp(-1j * math.pi * (ell + m / params.a))


def spectral_fka(coeffs):
    """c_l -> exp(-i pi (l + m/a)) c_l; the residual is carried unchanged."""
    phases = eigenvalues(coeffs.params, coeffs.m, coeffs.L_max)
    return replace(coeffs, coeffs=coeffs.coeffs * phases)


def apply_power(coeffs, n):
    """n-fold transform; negative n applies the inverse."""
    phases = eigenvalues(coeffs.params, coeffs.m, coeffs.L_max) ** int(n)
    return replace(coeffs, coeffs=coeffs.coeffs * phases)


def transform_order(a):
    """2q for a = q/q' in lowest terms."""
    frac = Fraction(a).limit_denominator(1000)
    if abs(float(frac) - a) > 1e-12:
        raise DomainError(f'a={a:g} is not rational; the transform has infinite order')
    return 2 * frac.numerator


def synthesize(params, coeffs, grid):
    """Sum c_l mode_l sampled on radii or on the radii of a QuadratureGrid."""
    quadrature = grid if isinstance(grid, QuadratureGrid) else None
    radii = grid.radii(params.a) if quadrature is not None else np.asarray(grid, dtype=float)
    values = coeffs.as_profile().evaluate(params, radii)
    return RadialProfile(coeffs.m, Sampled(radii, values, quadrature))


def random_mixture(params, m, ell_max, seed):
    """Unit-norm sum of modes 0..ell_max with seeded unimodular phases."""
    phases = np.asarray(mixture_phases(ell_max, seed)) * math.sqrt(ell_max + 1.0)
    coeffs = phases / np.sqrt(params.K * _norms(params, m, ell_max) * (ell_max + 1.0))
    label = f'mixture:ell_max={ell_max},seed={seed}'
    return RadialProfile(m, ModeMixture(tuple(coeffs), label=label))
