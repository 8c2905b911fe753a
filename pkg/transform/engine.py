"""
The (k,a)-generalized Fourier transform of f(x) = p(x) psi(|x|).

Entry points
------------
fka_radial(params, profile, xi_grid=None)
    Radial factor of F f by the Hankel path:
        e^(-i pi m/a) a^(-lam(m)) H_{a,lam(m)}(psi).
    Without a grid the transform is sampled on its own output quadrature
    grid, so norms of the result are computed by quadrature.

fka_1d(params, even_psi, odd_psi, xi_grid=None)
    N=1 split f(x) = even_psi(|x|) + x odd_psi(|x|).

transform_profile(params, profile, xi_grid=None, path='hankel')
    Dispatch between the hankel, kernel and spectral paths.

inverse_fka(params, g, xi_grid=None)
    F^-1 = sigma_a o F, for a = 1/r and a = 2/(2r+1).
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from core.exceptions import DomainError, UnsupportedDeformation
from core.profiles import RadialProfile, Sampled
from core.quadrature import QuadratureSpec
from .hankel import hankel, output_grid

logger = logging.getLogger(__name__)

PATHS = ('hankel', 'kernel', 'spectral')


@dataclass(frozen=True, eq=False)
class TransformResult:
    """
    Radial factor of F f on a grid: F f(xi) = p(xi) * values.

    `quadrature` is set when `grid` holds the radii of an output
    QuadratureGrid, in which case the result can be integrated exactly
    like any sampled profile.  `constant` is the calibrated c_ka on the
    kernel path.
    """
    grid: np.ndarray
    values: np.ndarray
    m: int
    phase_prefactor: complex
    path: str
    quadrature: object = None
    constant: complex = None

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise DomainError(f'{self.path} transform produced non-finite values')

    def as_profile(self):
        return RadialProfile(self.m, Sampled(self.grid, self.values, self.quadrature))

    def scaled(self, c):
        return TransformResult(self.grid, self.values * c, self.m, self.phase_prefactor, self.path,
                               self.quadrature, self.constant)

    def sup_relative_error(self, other):
        """max |self - other| / max |other| on a shared grid."""
        ref = np.max(np.abs(other.values))
        return float(np.max(np.abs(self.values - other.values)) / ref) if ref else float(np.max(np.abs(self.values)))


def _resolve_grid(params, profile, nu, xi_grid, spec):
    if xi_grid is None:
        grid = output_grid(params, profile, nu, spec)
        return grid.radii(params.a), grid
    return np.atleast_1d(np.asarray(xi_grid, dtype=float)), None


# ── Hankel path ───────────────────────────────────────────────────────────────

def fka_radial(params, profile, xi_grid=None, spec=None, workers=None):
    spec = spec or QuadratureSpec.default()
    m = profile.m
    lam = params.lam(m)
    xi, quadrature = _resolve_grid(params, profile, lam, xi_grid, spec)
    phase = cmath.exp(-1j * math.pi * m / params.a)
    values = phase * params.a ** (-lam) * hankel(params, profile, lam, xi, spec, workers)
    return TransformResult(xi, values, m, phase, 'hankel', quadrature)


def fka_1d(params, even_psi, odd_psi, xi_grid=None, spec=None, workers=None):
    if params.N != 1:
        raise DomainError(f'fka_1d needs N=1, got N={params.N}')
    if even_psi.m != 0 or odd_psi.m != 1:
        even_psi, odd_psi = even_psi.with_degree(0), odd_psi.with_degree(1)
    return (
        fka_radial(params, even_psi, xi_grid, spec, workers),
        fka_radial(params, odd_psi, xi_grid, spec, workers),
    )


# ── Dispatch ──────────────────────────────────────────────────────────────────

def transform_profile(params, profile, xi_grid=None, path='hankel', spec=None, workers=None, L_max=None):
    if path == 'hankel':
        return fka_radial(params, profile, xi_grid, spec, workers)
    if path == 'kernel':
        from .kernels import fka_1d_via_kernel
        if xi_grid is None:
            xi_grid = output_grid(params, profile, params.lam(profile.m), spec).radii(params.a)
        return fka_1d_via_kernel(params, profile, xi_grid, spec=spec, workers=workers)
    if path == 'spectral':
        from spectral.expansion import project, spectral_fka
        coeffs = project(params, profile, profile.m, L_max, spec)
        if coeffs.residual > 1e-8 * max(coeffs.norm, 1e-300):
            logger.info('spectral path: %s is not band-limited below L=%d (residual %.2e)',
                        profile.describe(), coeffs.L_max, coeffs.residual)
        image = spectral_fka(coeffs)
        xi, quadrature = _resolve_grid(params, profile, params.lam(profile.m), xi_grid, spec)
        values = image.as_profile().evaluate(params, xi)
        phase = cmath.exp(-1j * math.pi * profile.m / params.a)
        return TransformResult(xi, values, profile.m, phase, 'spectral', quadrature)
    raise DomainError(f'unknown transform path {path!r}; expected one of {", ".join(PATHS)}')


# ── Inversion ─────────────────────────────────────────────────────────────────

def inversion_sign(params, m):
    """
    sigma_a on the degree-m component: +1 for a = 1/r, (-1)^m for
    a = 2/(2r+1).
    """
    ratio = Fraction(1 / params.a).limit_denominator(1000)
    if ratio.denominator == 1 and abs(float(ratio) - 1 / params.a) < 1e-12:
        return 1
    half = Fraction(2 / params.a).limit_denominator(1000)
    if half.denominator == 1 and half.numerator % 2 == 1 and abs(float(half) - 2 / params.a) < 1e-12:
        return (-1) ** m
    raise UnsupportedDeformation(
        f'no closed inversion formula for a={params.a:g}; need a=1/r or a=2/(2r+1)'
    )


def inverse_fka(params, g, xi_grid=None, spec=None, workers=None):
    sign = inversion_sign(params, g.m)
    image = fka_radial(params, g, xi_grid, spec, workers)
    return TransformResult(image.grid, sign * image.values, image.m, image.phase_prefactor, 'hankel', image.quadrature)
