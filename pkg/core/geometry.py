"""
The parameter triple (N, k, a), the measure mu_{k,a} and radial integrals
against it.

Entry points
------------
DeformationParams(N, k_total, a, ...)
    Immutable, validated at construction; carries every derived constant.

ball_measure(params, r)
    mu_{k,a}(B_r) = K r^D / D.

lp_norm(params, profile, p), weighted_norm(params, profile, p, power)
    || |x|^power f ||_p for f = p(x) psi(|x|).

entropy(params, density, m=0, squared=False)
    E[h] = -int h ln h dmu with 0 ln 0 = 0.

measure_nodes(params, profile, ...)
    Radii, samples and weights of the shared composite grid; the building
    block for entropy, rearrangements and restricted masses.

radial_integral(params, profile, exponent, fn)
    int_0^inf fn(psi(r), r) r^exponent dr on that grid.
"""

import logging
import math
import threading
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate, optimize

from .exceptions import (
    DivergenceError,
    DomainError,
    EntropyUndefined,
    InadmissibleParameters,
    QuadratureError,
    TailToleranceExceeded,
)
from .profiles import ExpPow, Gaussian, LaguerreMode, ModeMixture, PowerCutoff, Sampled
from .quadrature import (
    QuadratureSpec,
    build_grid,
    tail_extent,
    to_canonical,
    weight_exponent,
)
from .specfun import log_gamma

logger = logging.getLogger(__name__)

ROOT_SYSTEMS = ('A1', 'Z2N')

_kernel_lock = threading.Lock()


# ── Parameters ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class DeformationParams:
    """
    The triple (N, <k>, a).

    root_system selects the closed form of K for N >= 2: 'A1' is the
    rank-one weight |x_1|^(2k), 'Z2N' the product weight with equal
    multiplicities <k>/N.  sphere_mass overrides K; kernel_bound supplies
    sup|B_{k,a}| when it is known from elsewhere.
    """
    N: int
    k_total: float
    a: float
    root_system: str = 'A1'
    sphere_mass: float = None
    kernel_bound: float = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise InadmissibleParameters('N≥1', f'N={self.N}')
        if self.a + 2 * self.k_total + self.N <= 2:
            raise InadmissibleParameters('a+2⟨k⟩+N>2', f'N={self.N}, k={self.k_total:g}, a={self.a:g}')
        if not self.a > 0:
            raise InadmissibleParameters('a>0', f'a={self.a:g}')
        if self.k_total < 0:
            raise InadmissibleParameters('k≥0', f'k={self.k_total:g}')
        if self.root_system not in ROOT_SYSTEMS:
            raise InadmissibleParameters('root system', f'{self.root_system!r} not in {ROOT_SYSTEMS}')

    # ── Derived constants ─────────────────────────────────────────────────

    @property
    def nu_a(self):
        return (2 * self.k_total + self.N - 2) / self.a

    @property
    def D(self):
        return 2 * self.k_total + self.N + self.a - 2

    def lam(self, m):
        return (2 * m + 2 * self.k_total + self.N - 2) / self.a

    @property
    def K(self):
        """Mass of the sphere under theta_{k,a}."""
        if self.sphere_mass is not None:
            return float(self.sphere_mass)
        if self.N == 1:
            return 2.0
        k, N = self.k_total, self.N
        if self.root_system == 'A1':
            log_k = log_gamma(k + 0.5) + 0.5 * (N - 1) * math.log(math.pi) - log_gamma(k + N / 2)
        else:
            log_k = N * log_gamma(k / N + 0.5) - log_gamma(k + N / 2)
        return 2.0 * math.exp(log_k)

    @property
    def c_ka(self):
        """Constant in front of the kernel integral of the unitary transform."""
        return math.exp(-self.nu_a * math.log(self.a) - log_gamma(self.nu_a + 1)) / self.K

    def oscillator_eigenvalue(self, ell, m):
        return 2 * self.a * ell + 2 * m + 2 * self.k_total + self.N - 2 + self.a

    def bounded_kernel_case(self):
        """Which uniform kernel bound applies, or None."""
        if self.N == 1:
            return 'N=1'
        if self.a in (1, 2):
            return 'a in {1,2}'
        if self.N == 2 and self.k_total == 0 and _is_two_over_integer(self.a):
            return 'N=2, k=0, a=2/n'
        return None

    @property
    def kernel_bound_C(self):
        """
        (1, inf) norm of the unitary transform, |c_ka| sup|B_{k,a}|, or None
        when the kernel is unbounded or its bound unknown.
        """
        if 'C' not in self._cache:
            with _kernel_lock:
                if 'C' not in self._cache:
                    self._cache['C'] = self._estimate_kernel_bound()
        return self._cache['C']

    def _estimate_kernel_bound(self):
        if self.kernel_bound is not None:
            sup_b = float(self.kernel_bound)
        elif self.N == 1:
            from transform.kernels import kernel_bound
            sup_b = kernel_bound(self)
        elif self.bounded_kernel_case() == 'a in {1,2}':
            sup_b = 1.0
        else:
            sup_b = None
        if sup_b is None:
            return None
        return abs(self.c_ka) * sup_b

    def require_bounded_kernel(self, what):
        bound = self.kernel_bound_C
        if bound is None and self.bounded_kernel_case() is not None:
            raise InadmissibleParameters(
                'sup|B_{k,a}| known',
                f'{what} needs the value of sup|B_{{k,a}}|, which is finite but not computed for '
                f'N={self.N}, k={self.k_total:g}, a={self.a:g}; supply kernel_bound',
            )
        if bound is None:
            raise InadmissibleParameters(
                'sup|B_{k,a}|<∞',
                f'{what} needs a bounded kernel; N={self.N}, k={self.k_total:g}, a={self.a:g}',
            )
        return bound

    def summary(self):
        return {'N': self.N, 'k': self.k_total, 'a': self.a}

    def __str__(self):
        return f'(N={self.N}, k={self.k_total:g}, a={self.a:g})'


# ── Measure ───────────────────────────────────────────────────────────────────

def ball_measure(params, r):
    if np.any(np.asarray(r) < 0):
        raise DomainError('ball_measure expects r >= 0')
    return params.K * np.asarray(r, dtype=float) ** params.D / params.D


def require_radial_modulus(params, m, what):
    """|p(x)| is a function of |x| only for N=1 or m=0."""
    if params.N > 1 and m > 0:
        raise DomainError(
            f'{what} of a degree-{m} function in N={params.N} needs the angular factor, '
            'which is only normalized in L^2'
        )


# ── Grid sampling ─────────────────────────────────────────────────────────────

def measure_nodes(params, profile, r_lo=0.0, r_hi=None, extra_power=0.0, spec=None, y_max=0.0):
    """
    Returns (radii, psi values, weights) with

        sum_j F(r_j) w_j  ~  K int_{r_lo}^{r_hi} F(r) r^(D-1+extra_power) dr.

    Sampled profiles carrying a quadrature grid use its nodes directly when
    the whole half-line is requested.  Dilated profiles are sampled at unit
    scale and mapped back with r = rho / scale.
    """
    a = params.a
    e = params.D - 1 + extra_power
    if profile.scale != 1:
        t = profile.scale
        radii, values, weights = measure_nodes(
            params, profile.unit_scale(), r_lo * t, None if r_hi is None else r_hi * t,
            extra_power, spec, y_max * t ** (-a / 2.0),
        )
        return radii / t, values, weights * t ** (-(e + 1.0))
    d = profile.descriptor
    if isinstance(d, Sampled) and d.quadrature is not None and r_lo == 0 and r_hi is None:
        grid = d.quadrature
        return d.grid, profile.amplitude * d.values, params.K * grid.measure_weights(a, e)

    spec = spec or QuadratureSpec.default()
    sigma = weight_exponent(a, e)
    u_lo = float(to_canonical(a, r_lo))
    if r_hi is None:
        u_hi = tail_extent(params, profile, sigma, spec)
    else:
        u_hi = float(to_canonical(a, r_hi))
        edge = profile.support_edge
        if edge is not None:
            u_hi = min(u_hi, float(to_canonical(a, edge)))
    if u_hi <= u_lo:
        return np.empty(0), np.empty(0, dtype=complex), np.empty(0)
    breaks = [float(to_canonical(a, b)) for b in profile.breakpoints]
    grid = build_grid(u_hi, breaks, spec.width_for(y_max), spec, u_lo=u_lo)
    radii = grid.radii(a)
    return radii, profile.evaluate(params, radii), params.K * grid.measure_weights(a, e)


def radial_integral(params, profile, exponent, fn=None, spec=None):
    """int_0^inf fn(psi(r), r) r^exponent dr; fn defaults to |psi|."""
    radii, values, weights = measure_nodes(
        params, profile, extra_power=exponent - (params.D - 1), spec=spec,
    )
    integrand = np.abs(values) if fn is None else fn(values, radii)
    return float(np.sum(integrand * weights) / params.K)


def modulus(profile, radii, values):
    """|f| at the given radii: r^m |psi(r)|."""
    return np.asarray(radii, dtype=float) ** profile.m * np.abs(values)


# ── Norms ─────────────────────────────────────────────────────────────────────

def lp_norm(params, profile, p, closed_form=True, spec=None):
    """||f||_p against mu_{k,a}."""
    return weighted_norm(params, profile, p, 0.0, closed_form=closed_form, spec=spec)


def weighted_norm(params, profile, p, power=0.0, closed_form=True, spec=None):
    """|| |x|^power f ||_p; the radial weight is r^((m+power)p + D - 1)."""
    if not p >= 1:
        raise DomainError(f'p must be at least 1, got {p}')
    if p != 2:
        require_radial_modulus(params, profile.m, f'L^{p:g} norm')
    if math.isinf(p):
        return _sup_norm(params, profile, power, spec)
    if closed_form:
        value = _closed_form_norm(params, profile, p, power)
        if value is not None:
            return value
    integral = _power_integral(params, profile, p, (profile.m + power) * p + params.D - 1, spec)
    return (params.K * integral) ** (1.0 / p)


def _closed_form_norm(params, profile, p, power):
    d = profile.descriptor
    E = (profile.m + power) * p + params.D
    amp = abs(profile.amplitude)
    if isinstance(d, Gaussian):
        log_i = log_gamma(E / 2) - math.log(2.0) - (E / 2) * math.log(p * d.t)
    elif isinstance(d, ExpPow):
        log_i = log_gamma(E / params.a) - math.log(params.a) - (E / params.a) * math.log(p * d.c)
    elif isinstance(d, PowerCutoff):
        rest = E - d.alpha * p
        if rest <= 0:
            raise DivergenceError(
                f'|x|^(-{d.alpha:g}) is not locally L^{p:g} with weight exponent {E - 1:g}'
            )
        log_i = rest * math.log(d.r0) - math.log(rest)
    elif isinstance(d, LaguerreMode) and p == 2 and power == 0:
        from spectral.expansion import mode_norm_sq
        log_i = math.log(mode_norm_sq(params, profile.m, d.ell))
    elif isinstance(d, ModeMixture) and p == 2 and power == 0:
        from spectral.expansion import mode_norm_sq
        total = sum(abs(c) ** 2 * mode_norm_sq(params, profile.m, ell) for ell, c in enumerate(d.coeffs))
        if total == 0 or amp == 0:
            return 0.0
        log_i = math.log(total)
    else:
        return None
    if amp == 0:
        return 0.0
    log_norm_p = math.log(params.K) + p * math.log(amp) - E * math.log(profile.scale) + log_i
    return math.exp(log_norm_p / p)


def _power_integral(params, profile, p, e, spec=None):
    """int_0^inf |psi(r)|^p r^e dr."""
    d = profile.descriptor
    if isinstance(d, Sampled):
        radii, values, weights = measure_nodes(
            params, profile, extra_power=e - (params.D - 1), spec=spec,
        )
        return float(np.sum(np.abs(values) ** p * weights) / params.K)

    beta = e + p * profile.singular_power
    if not beta > -1:
        raise DivergenceError(f'integrand behaves like r^{beta:g} at the origin')

    def regular(r):
        return abs(complex(profile.regular_part(params, r))) ** p

    def plain(r):
        return abs(complex(profile.evaluate(params, r))) ** p * r ** e

    edge = profile.support_edge
    knots = sorted(set(profile.breakpoints))
    first = knots[0] if knots else 1.0 / profile.scale
    pieces = []
    with warnings.catch_warnings():
        warnings.simplefilter('error', integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(regular, 0.0, first, weight='alg', wvar=(beta, 0.0),
                                        epsabs=0.0, epsrel=1e-12, limit=400)
            pieces.append(value)
            for lo, hi in zip(knots, knots[1:]):
                pieces.append(integrate.quad(plain, lo, hi, epsabs=0.0, epsrel=1e-12, limit=400)[0])
            if edge is None:
                start = knots[-1] if knots else first
                pieces.append(integrate.quad(plain, start, np.inf, epsabs=0.0, epsrel=1e-12, limit=400)[0])
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f'norm of {profile.describe()}: {exc}') from exc
    return float(sum(pieces))


def _sup_norm(params, profile, power, spec=None):
    exponent = profile.m + power
    if profile.singular_power + exponent < 0:
        raise DivergenceError(f'{profile.describe()} weighted by r^{exponent:g} is unbounded at 0')
    radii, values, _ = measure_nodes(params, profile, spec=spec)
    mags = radii ** exponent * np.abs(values)
    if isinstance(profile.descriptor, Sampled) or mags.size == 0:
        return float(mags.max(initial=0.0))
    j = int(np.argmax(mags))
    lo = radii[max(j - 1, 0)] if j > 0 else 0.0
    hi = radii[min(j + 1, radii.size - 1)]
    if hi <= lo:
        return float(mags[j])
    res = optimize.minimize_scalar(
        lambda r: -(r ** exponent) * abs(complex(profile.evaluate(params, r))),
        bounds=(lo, hi), method='bounded', options={'xatol': 1e-12 * max(hi, 1.0)},
    )
    return float(max(mags[j], -res.fun))


# ── Masses ────────────────────────────────────────────────────────────────────

def ball_mass(params, profile, radius, p=2.0, outside=False, spec=None):
    """int over |x| < radius (or > radius) of |f|^p dmu."""
    if p != 2:
        require_radial_modulus(params, profile.m, 'restricted mass')
    if outside:
        radii, values, weights = measure_nodes(params, profile, r_lo=radius, spec=spec)
    else:
        radii, values, weights = measure_nodes(params, profile, r_hi=radius, spec=spec)
    return float(np.sum(modulus(profile, radii, values) ** p * weights))


# ── Entropy ───────────────────────────────────────────────────────────────────

def entropy(params, density, m=None, squared=False, spec=None):
    """
    E[h] = -int h ln h dmu_{k,a}.

    With squared=False the density is h(x) = |x|^m |psi(|x|)|; with
    squared=True it is |f|^2 for f = p(x) psi(|x|).
    """
    m = density.m if m is None else m
    require_radial_modulus(params, m, 'entropy')
    try:
        radii, values, weights = measure_nodes(params, density, spec=spec)
    except TailToleranceExceeded as exc:
        raise EntropyUndefined(f'entropy integral does not converge: {exc}') from exc
    h = np.asarray(radii, dtype=float) ** m * np.abs(values)
    if squared:
        h = h ** 2
    with np.errstate(divide='ignore', invalid='ignore'):
        integrand = np.where(h > 0, h * np.log(np.where(h > 0, h, 1.0)), 0.0)
    terms = integrand * weights
    if not np.all(np.isfinite(terms)):
        raise EntropyUndefined('entropy integrand is not finite on the grid')
    positive = terms[terms > 0].sum()
    negative = -terms[terms < 0].sum()
    scale = max(positive, negative, 1e-300)
    tail = np.abs(terms[-max(1, terms.size // 50):]).sum()
    if density.support_edge is None and tail > 1e-6 * scale:
        raise EntropyUndefined('the tail of -h ln h does not decay; a part of the integral diverges')
    return float(-(positive - negative))
