"""
Evaluators for every catalog entry, plus the operations built on them.

Entry points
------------
run_check(check_id, params, profile, exponents=None, ...)   -> CheckReport
check_entropy(params, profile, normalized=True, ...)        -> CheckReport
check_donoho_stark(params, profile, S_radius, V_radius)     -> CheckReport
estimate_empirical_constant(check_id, params, family, ...)  -> float
damping_slope(params, p, alpha, t_grid)                     -> dict
hy_failure_probe(params, p, n_max, seed=0)                  -> list of ratios
default_family(params, size, seed=0)                        -> list of profiles

All checks use the unitary transform.  Where a statement is written for a
transform whose kernel is bounded by one, the kernel bound
M = kernel_bound_C enters the constant instead (M^(2/p-1) for
Hausdorff–Young, -2 ln M for the entropy sum, 1/M^2 for Donoho–Stark).
"""

import logging
import math
import warnings
from functools import lru_cache

import numpy as np
from django.conf import settings
from scipy import integrate

from core.exceptions import (
    ConstraintViolation,
    DivergenceError,
    DomainError,
    EntropyUndefined,
    FamilyTooSmall,
    QuadratureError,
)
from core.geometry import (
    ball_mass,
    ball_measure,
    entropy,
    measure_nodes,
    modulus,
    weighted_norm,
)
from core.profiles import ExpPow, PowerCutoff, RadialProfile, mixture_phases, parse_profile
from core.quadrature import QuadratureSpec, build_grid, to_canonical
from core.workers import run_ordered
from rearrange.rearrangement import jt_check, lorentz_norm, rearrangement_pairing, young_constant
from rearrange.weights import check_pitt_exponents, conjugate, hardy_check, pitt_B1, pitt_B2
from spectral.expansion import SpectralCoeffs, eigenvalues, random_mixture
from transform.engine import fka_radial, inversion_sign
from transform.hankel import output_grid
from . import constants
from .catalog import EMPIRICAL, get, evaluator, register
from .reports import CheckReport

logger = logging.getLogger(__name__)

MIN_FAMILY = 10
DAMPING_T_GRID = np.geomspace(1.0, 1e3, 13)


# ── Context ───────────────────────────────────────────────────────────────────

@lru_cache(maxsize=64)
def _transform_image(params, profile, spec, workers):
    """F f on its output grid, shared by every check on the same profile object."""
    return fka_radial(params, profile, spec=spec, workers=workers).as_profile()


class CheckContext:
    """Inputs of one evaluation with the transform computed at most once."""

    def __init__(self, params, profile, exponents, spec=None, workers=None, options=None):
        self.params = params
        self.profile = profile
        self.exponents = dict(exponents)
        self.spec = spec or QuadratureSpec.default()
        self.workers = workers
        self.options = dict(options or {})
        self._image = None

    def get(self, name, default=None):
        value = self.exponents.get(name, default)
        if value is None:
            raise DomainError(f'exponent {name!r} is required')
        self.exponents[name] = float(value)
        return float(value)

    @property
    def bound(self):
        return self.params.require_bounded_kernel('this check')

    @property
    def bound_bar(self):
        return max(1.0, self.bound)

    @property
    def image(self):
        """F f sampled on its own output quadrature grid."""
        if self._image is None:
            self._image = _transform_image(self.params, self.profile, self.spec, self.workers)
        return self._image

    def norm(self, p, power=0.0):
        return weighted_norm(self.params, self.profile, p, power, spec=self.spec)

    def image_norm(self, p, power=0.0):
        return weighted_norm(self.params, self.image, p, power, closed_form=False, spec=self.spec)


def run_check(check_id, params, profile, exponents=None, tolerance=None, spec=None, workers=None, options=None):
    definition = get(check_id)
    func = evaluator(definition.id)
    tolerance = settings.FKA_CHECK_TOLERANCE if tolerance is None else float(tolerance)
    merged = {**definition.defaults, **{k: v for k, v in (exponents or {}).items() if v is not None}}
    ctx = CheckContext(params, profile, merged, spec, workers, options)
    lhs, rhs, notes = func(ctx)
    report = CheckReport(
        check_id=definition.id,
        anchor=definition.anchor,
        params=params.summary(),
        profile=f'mode-sums:m={profile.m}' if definition.profile_free else profile.describe(),
        lhs=float(lhs),
        rhs=float(rhs),
        mode=definition.constant_mode,
        tolerance=tolerance,
        exponents=ctx.exponents,
        notes=notes,
    )
    logger.debug('%s %s %s: lhs=%.10g rhs=%.10g', definition.id, params, report.profile, report.lhs, report.rhs)
    return report


def _ratio_range(p, lo, hi, condition):
    if not lo < p <= hi:
        raise ConstraintViolation(condition, f'p={p:g}')


# ── Hausdorff–Young family ────────────────────────────────────────────────────

@register('HY')
def _hausdorff_young(ctx):
    p = ctx.get('p')
    if not 1 <= p <= 2:
        raise ConstraintViolation('1≤p≤2', f'p={p:g}')
    bound = ctx.bound
    constant = constants.hausdorff_young_constant(bound, p)
    lhs = ctx.image_norm(conjugate(p))
    return lhs, constant * ctx.norm(p), f"C={bound:.10g}; ||Ff||_p' <= C^(2/p-1) ||f||_p"


@register('HY_PALEY')
def _paley(ctx):
    p = ctx.get('p')
    if not 1 < p < 2:
        raise ConstraintViolation('1<p<2', f'p={p:g}')
    ctx.bound
    lhs = lorentz_norm(ctx.params, ctx.image, p=conjugate(p), q=p, spec=ctx.spec)
    return lhs, ctx.norm(p), "Lorentz (p', p) norm of Ff against ||f||_p"


@register('HL_WEIGHTED')
def _hl_weighted(ctx):
    p = ctx.get('p')
    if not 1 < p < 2:
        raise ConstraintViolation('1<p<2', f'p={p:g}')
    D = ctx.params.D
    lhs = ctx.image_norm(p, power=D * (p - 2.0) / p)
    return lhs, ctx.norm(p), f'weight |xi|^(D(p-2)) with D={D:g}'


@register('HL_YOUNG')
def _hl_young(ctx):
    q = ctx.get('q')
    if not q > 2:
        raise ConstraintViolation('q>2', f'q={q:g}')
    D = ctx.params.D
    rhs = ctx.norm(q, power=D * (q - 2.0) / q)
    young = young_constant(ctx.params, ('power', D))
    return ctx.image_norm(q), rhs, f'Young function |x|^D, sublevel constant {young:.10g}'


@register('HL_DUAL')
def _hl_dual(ctx):
    params = ctx.params
    p, q = ctx.get('p'), ctx.get('q')
    if not 1 < p <= q <= 2:
        raise ConstraintViolation('1<p≤q≤2', f'p={p:g}, q={q:g}')
    if params.N > 1 and params.k_total > 0:
        raise DomainError('the dual Hardy–Littlewood weight is radial only for N=1 or k=0')
    pc, qc = conjugate(p), conjugate(q)
    r = 1.0 / (1.0 - (qc - 1.0) / pc)
    # |xi| theta(xi) = |xi|^(2k+a-1) on the radial directions used here
    power = (2 * params.k_total + params.a - 1.0) * (r / pc - 1.0)
    lhs = ctx.image_norm(r, power=power / r)
    return lhs, ctx.norm(p), f'r={r:.10g}, weight |xi|^{power:.10g}'


# ── Weighted inequalities ─────────────────────────────────────────────────────

def _weighted_bracket(p, q):
    pc = conjugate(p)
    if q >= 2:
        return conjugate(q) ** (1.0 / pc) * q ** (1.0 / q)
    return p ** (1.0 / q) * pc ** (1.0 / pc)


@register('PITT')
def _pitt(ctx):
    params = ctx.params
    p, q = ctx.get('p'), ctx.get('q')
    D = params.D
    l = ctx.get('l', D / 4.0)
    pc = conjugate(p) if p > 1 else math.inf
    alpha = ctx.get('alpha', D * (1.0 / pc - 1.0 / q) - l)
    check_pitt_exponents(params, p, q, alpha, l)
    b1, upper = pitt_B1(params, p, q, alpha, l)
    lhs = ctx.image_norm(q, power=alpha)
    rhs = ctx.norm(p, power=l)
    return lhs, rhs, f'B1={b1:.10g}, B1 bracket={upper:.10g}'


@register('WEIGHTED_GEN')
def _weighted_general(ctx):
    params = ctx.params
    p, q = ctx.get('p'), ctx.get('q')
    D = params.D
    if not (1 < p < math.inf and 1 < q < math.inf):
        raise ConstraintViolation('1<p,q<∞', f'p={p:g}, q={q:g}')
    pc = conjugate(p)
    v_power = ctx.get('v_power', p * D / 6.0)
    u_power = ctx.get('u_power', q * (D * (1.0 / pc - 1.0 / q) - v_power / p))
    alpha, l = u_power / q, v_power / p
    if q < p:
        pitt_B2(params, p, q, alpha, l)
    check_pitt_exponents(params, p, q, alpha, l)
    b1, _ = pitt_B1(params, p, q, alpha, l)
    bracket = _weighted_bracket(p, q)
    lhs = ctx.image_norm(q, power=alpha)
    rhs = ctx.norm(p, power=l)
    return lhs, rhs, f'u=|xi|^{u_power:.6g}, v=|x|^{v_power:.6g}; B1={b1:.10g}, C <= {b1 * bracket:.10g} K'


# ── Heisenberg–Pauli–Weyl family ──────────────────────────────────────────────

@register('HPW_SHARP')
def _hpw_sharp(ctx):
    a, D = ctx.params.a, ctx.params.D
    x_side = ctx.norm(2, power=a / 2.0)
    xi_side = ctx.image_norm(2, power=a / 2.0)
    return (D / 2.0) * ctx.norm(2) ** 2, x_side * xi_side, f'sharp constant D/2={D / 2.0:.10g}'


def _hpw_product(ctx, alpha, beta):
    a = ctx.params.a
    x_side = ctx.norm(2, power=alpha * a / 2.0)
    xi_side = ctx.image_norm(2, power=beta * a / 2.0)
    return x_side ** (beta / (alpha + beta)) * xi_side ** (alpha / (alpha + beta))


@register('HPW_AB')
def _hpw_ab(ctx):
    alpha, beta = ctx.get('alpha'), ctx.get('beta')
    if not (alpha >= 1 and beta >= 1):
        raise ConstraintViolation('α,β≥1', f'α={alpha:g}, β={beta:g}')
    D = ctx.params.D
    exponent = 2 * alpha * beta / (alpha + beta)
    lhs = (D / 2.0) ** exponent * ctx.norm(2) ** 2
    return lhs, _hpw_product(ctx, alpha, beta) ** 2, f'squared; constant (D/2)^{exponent:.6g}'


@register('HPW_FRAC')
def _hpw_frac(ctx):
    alpha, beta = ctx.get('alpha'), ctx.get('beta')
    if not (0 < alpha < 1 and 0 < beta < 1):
        raise ConstraintViolation('0<α,β<1', f'α={alpha:g}, β={beta:g}')
    ctx.bound
    return ctx.norm(2), _hpw_product(ctx, alpha, beta), 'ratio is 1/c(α,β) for this f'


@register('HPW_LP')
def _hpw_lp(ctx):
    p, alpha, beta = ctx.get('p'), ctx.get('alpha'), ctx.get('beta')
    _ratio_range(p, 1, 2, '1<p≤2')
    q = conjugate(p)
    D = ctx.params.D
    if not 0 < alpha < D / q:
        raise ConstraintViolation('0<α<D/q', f'α={alpha:g}, D/q={D / q:g}')
    if not beta > 0:
        raise ConstraintViolation('β>0', f'β={beta:g}')
    weight = ctx.norm(p, power=alpha) ** (beta / (alpha + beta))
    spread = ctx.image_norm(q, power=beta) ** (alpha / (alpha + beta))
    return ctx.image_norm(q), weight * spread, f'q={q:.10g}'


def damped_norm(params, profile, q, t, spec=None):
    """|| exp(-t |.|^a) f ||_q."""
    e = profile.m * q + params.D - 1
    a = params.a
    singular = profile.singular_power
    if not singular:
        radii, values, weights = measure_nodes(params, profile, spec=spec)
        mags = modulus(profile, radii, values)
        return float(np.sum(mags ** q * np.exp(-q * t * radii ** a) * weights)) ** (1.0 / q)

    beta = e + q * singular
    if not beta > -1:
        raise DivergenceError(f'damped integrand behaves like r^{beta:g} at the origin')

    def regular(r):
        return abs(complex(profile.regular_part(params, r))) ** q * math.exp(-q * t * r ** a)

    def plain(r):
        return abs(complex(profile.evaluate(params, r))) ** q * math.exp(-q * t * r ** a) * r ** e

    first = profile.support_edge or 1.0
    with warnings.catch_warnings():
        warnings.simplefilter('error', integrate.IntegrationWarning)
        try:
            total, _ = integrate.quad(regular, 0.0, first, weight='alg', wvar=(beta, 0.0),
                                      epsabs=0.0, epsrel=1e-12, limit=400)
            if profile.support_edge is None:
                total += integrate.quad(plain, first, np.inf, epsabs=0.0, epsrel=1e-12, limit=400)[0]
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f'damped norm of {profile.describe()}: {exc}') from exc
    return (params.K * total) ** (1.0 / q)


@register('GAUSS_DAMP')
def _gauss_damp(ctx):
    p, alpha, t = ctx.get('p'), ctx.get('alpha'), ctx.get('t')
    if not t > 0:
        raise ConstraintViolation('t>0', f't={t:g}')
    constant = constants.gauss_damp_constant(ctx.params, p, alpha, ctx.bound_bar)
    q = conjugate(p)
    lhs = damped_norm(ctx.params, ctx.image, q, t, ctx.spec)
    rhs = constant * t ** (-alpha / ctx.params.a) * ctx.norm(p, power=alpha)
    return lhs, rhs, f'C={constant:.10g}, decay t^(-{alpha / ctx.params.a:.6g})'


def damping_slope(params, p=1.5, alpha=0.25, t_grid=DAMPING_T_GRID, spec=None):
    """
    Log-log slope of t -> || exp(-t |.|^a) h ||_q for the transform-side
    profile h = |xi|^(-(D/q - alpha)) on the unit ball, the profile whose
    decay matches the bound t^(-alpha/a).
    """
    q = conjugate(p)
    D = params.D
    if not 0 < alpha < D / q:
        raise ConstraintViolation('0<α<D/q', f'α={alpha:g}, D/q={D / q:g}')
    h = RadialProfile(0, PowerCutoff(D / q - alpha, 1.0))
    t_grid = np.asarray(t_grid, dtype=float)
    norms = np.array([damped_norm(params, h, q, t, spec) for t in t_grid])
    slope = float(np.polyfit(np.log(t_grid), np.log(norms), 1)[0])
    expected = -alpha / params.a
    return {
        'slope': slope,
        'expected': expected,
        'relative_error': abs(slope - expected) / abs(expected),
        't': t_grid.tolist(),
        'norms': norms.tolist(),
    }


# ── L^1–L^2 lemmata ───────────────────────────────────────────────────────────

@register('NASH')
def _nash(ctx):
    s = ctx.get('s')
    params = ctx.params
    constant = constants.nash_constant(params, s, ctx.bound_bar)
    e1, e2 = constants.nash_exponents(params, s)
    rhs = constant * ctx.norm(1) ** e1 * ctx.image_norm(2, power=s) ** e2
    return ctx.norm(2) ** 2, rhs, f'C={constant:.10g}'


@register('CLARKSON')
def _clarkson(ctx):
    s = ctx.get('s')
    params = ctx.params
    constant = constants.clarkson_constant(params, s)
    e2, e1 = constants.clarkson_exponents(params, s)
    rhs = constant * ctx.norm(2) ** e2 * ctx.norm(1, power=2 * s) ** e1
    return ctx.norm(1), rhs, f'D={constant:.10g}'


@register('L1L2')
def _l1l2(ctx):
    s = ctx.get('s')
    lhs = ctx.norm(1) * ctx.norm(2) ** 2
    rhs = ctx.norm(1, power=2 * s) * ctx.image_norm(2, power=s) ** 2
    return lhs, rhs, "ratio is 1/C' for this f"


# ── Entropy ───────────────────────────────────────────────────────────────────

def _entropies(ctx, scale):
    params = ctx.params
    try:
        source = entropy(params, ctx.profile.scaled(scale), squared=True, spec=ctx.spec)
        image = entropy(params, ctx.image.scaled(scale), squared=True, spec=ctx.spec)
    except EntropyUndefined as exc:
        raise EntropyUndefined(f'excluded case (a), an entropy is undefined: {exc}') from exc
    if not (math.isfinite(source) and math.isfinite(image)):
        raise EntropyUndefined('excluded case (b), the entropies are infinite with opposite signs')
    return source, image


@register('ENTROPY')
def _entropy(ctx):
    bound = constants.entropy_bound(ctx.bound)
    source, image = _entropies(ctx, 1.0 / ctx.norm(2))
    total = source + image
    return bound, total, f'sum={total:.10g} (E[|f|^2]={source:.10g}, E[|Ff|^2]={image:.10g}); bound -2 ln C'


@register('ENTROPY_GEN')
def _entropy_general(ctx):
    bound = constants.entropy_bound(ctx.bound)
    source, image = _entropies(ctx, 1.0)
    n2 = ctx.norm(2) ** 2
    m2 = ctx.image_norm(2) ** 2
    lhs = -math.log(n2) - math.log(m2) + bound
    rhs = source / n2 + image / m2
    return lhs, rhs, f'||f||^2={n2:.10g}, ||Ff||^2={m2:.10g}'


@register('ENTROPY_VAR')
def _entropy_variance(ctx):
    params = ctx.params
    alpha = ctx.get('alpha', params.a)
    c = ctx.get('c')
    n = ctx.norm(2)
    try:
        source = entropy(params, ctx.profile.scaled(1.0 / n), squared=True, spec=ctx.spec)
    except EntropyUndefined as exc:
        raise EntropyUndefined(f'excluded case (a): {exc}') from exc
    log_k = constants.log_variance_normalizer(params, alpha, c)
    variance = (ctx.norm(2, power=alpha / 2.0) / n) ** 2
    return source, log_k + c ** alpha * variance, f'ln k={log_k:.10g}, M_alpha={variance:.10g}'


@register('ENTROPY_HPW')
def _entropy_hpw(ctx):
    params = ctx.params
    alpha = ctx.get('alpha', params.a)
    beta = ctx.get('beta', params.a)
    c, d = ctx.get('c'), ctx.get('d')
    log_k = constants.log_variance_normalizer(params, alpha, c) + constants.log_variance_normalizer(params, beta, d)
    lhs = -(log_k - constants.entropy_bound(ctx.bound)) * ctx.norm(2) ** 2
    rhs = c ** alpha * ctx.norm(2, power=alpha / 2.0) ** 2 + d ** beta * ctx.image_norm(2, power=beta / 2.0) ** 2
    return lhs, rhs, f'ln(k k\')={log_k:.10g}'


@register('GLOBAL_UP')
def _global_uncertainty(ctx):
    s, beta = ctx.get('s'), ctx.get('beta')
    if not (s > 0 and beta > 0):
        raise ConstraintViolation('s,β>0', f's={s:g}, β={beta:g}')
    ctx.bound
    x_side = ctx.norm(2, power=s) ** (2 * beta / (s + beta))
    xi_side = ctx.image_norm(2, power=beta) ** (2 * s / (s + beta))
    return ctx.norm(2) ** 2, x_side * xi_side, 'ratio is 1/C for this f'


def check_entropy(params, profile, normalized=True, **kwargs):
    return run_check('ENTROPY' if normalized else 'ENTROPY_GEN', params, profile, **kwargs)


# ── Concentration ─────────────────────────────────────────────────────────────

def _image_mass_within(ctx, radius):
    """int_{|xi| < radius} |F f|^2 dmu."""
    params = ctx.params
    a = params.a
    full = output_grid(params, ctx.profile, params.lam(ctx.profile.m), ctx.spec, ctx.workers)
    u_v = float(to_canonical(a, radius))
    if u_v >= full.u_hi:
        return ctx.image_norm(2) ** 2
    if u_v <= 0:
        return 0.0
    grid = build_grid(u_v, (), full.max_width, ctx.spec)
    xi = grid.radii(a)
    values = fka_radial(params, ctx.profile, xi, ctx.spec, ctx.workers).values
    mags = modulus(ctx.profile, xi, values)
    return float(params.K * np.sum(mags ** 2 * grid.measure_weights(a, params.D - 1)))


def _outside_masses(ctx, S, V):
    total = ctx.norm(2) ** 2
    if math.isinf(S):
        inside_s = total
    else:
        inside_s = ball_mass(ctx.params, ctx.profile, S, spec=ctx.spec) if S > 0 else 0.0
    inside_v = total if math.isinf(V) else _image_mass_within(ctx, V)
    return total, max(total - inside_s, 0.0), max(total - inside_v, 0.0)


@register('DS')
def _donoho_stark(ctx):
    S, V = ctx.get('S'), ctx.get('V')
    if not (S >= 0 and V >= 0):
        raise DomainError(f'ball radii must be nonnegative, got S={S:g}, V={V:g}')
    bound = ctx.bound
    total, out_s, out_v = _outside_masses(ctx, S, V)
    eps, delta = math.sqrt(out_s / total), math.sqrt(out_v / total)
    measure = float(ball_measure(ctx.params, S) * ball_measure(ctx.params, V))
    spread = math.hypot(eps, delta)
    if spread >= 1:
        return 0.0, measure, f'vacuous: eps^2+delta^2={spread ** 2:.6g} >= 1'
    lhs = (1.0 - spread) ** 2 / bound ** 2
    return lhs, measure, f'eps={eps:.10g}, delta={delta:.10g}'


def check_donoho_stark(params, profile, S_radius, V_radius, **kwargs):
    return run_check('DS', params, profile, exponents={'S': S_radius, 'V': V_radius}, **kwargs)


def _support_measure(params, profile, spec, threshold):
    radii, values, weights = measure_nodes(params, profile, spec=spec)
    mags = modulus(profile, radii, values)
    peak = mags.max(initial=0.0)
    return float(weights[mags > threshold * peak].sum())


@register('MS')
def _support(ctx):
    threshold = settings.FKA_SUPPORT_THRESHOLD
    bound = ctx.bound
    source = _support_measure(ctx.params, ctx.profile, ctx.spec, threshold)
    image = _support_measure(ctx.params, ctx.image, ctx.spec, threshold)
    return 1.0 / bound ** 2, source * image, f'threshold {threshold:g} of the peak; mu(A_f)={source:.6g}'


@register('BAB')
def _benedicks(ctx):
    S, V = ctx.get('S'), ctx.get('V')
    ctx.bound
    total, out_s, out_v = _outside_masses(ctx, S, V)
    return total, out_s + out_v, f'mass outside S={out_s:.6g}, outside V={out_v:.6g}'


# ── Probes and rearrangements ─────────────────────────────────────────────────

def hy_failure_probe(params, p=3.0, n_max=6, seed=0, m=0):
    """
    ||F f_n||_p' / ||f_n||_p for f_n = sum_{l <= n} exp(i theta_l) mode_l,
    n = 0 .. n_max; the images come from the eigenrelation.
    """
    if not p >= 2:
        raise ConstraintViolation('p≥2', f'p={p:g}')
    inversion_sign(params, m)
    pc = conjugate(p)
    lam = params.lam(m)
    ratios = []
    for n in range(int(n_max) + 1):
        coeffs = np.asarray(mixture_phases(n, seed), dtype=complex)
        f_n = SpectralCoeffs(params, m, coeffs, lam)
        image = SpectralCoeffs(params, m, coeffs * eigenvalues(params, m, n), lam)
        num = weighted_norm(params, image.as_profile(), pc)
        den = weighted_norm(params, f_n.as_profile(), p)
        ratios.append(num / den)
    return ratios


@register('HY_FAIL_PROBE')
def _hy_fail_probe(ctx):
    p, n_max = ctx.get('p'), ctx.get('n_max')
    seed = int(ctx.options.get('seed', 0))
    ratios = hy_failure_probe(ctx.params, p, int(n_max), seed, ctx.profile.m)
    spread = max(ratios) / min(ratios)
    text = ', '.join(f'{r:.6g}' for r in ratios)
    return ratios[-1], ratios[0], f'ratios [{text}]; max/min={spread:.6g}'


@register('JT')
def _jodeit_torchinsky(ctx):
    q = ctx.get('q')
    result = jt_check(ctx.params, ctx.profile, q=q, spec=ctx.spec)
    pairs = ', '.join(f's={s:g}: {r:.6g}' for s, r in zip(result['s'], result['ratios']))
    return result['K_q'], 1.0, f'largest ratio over s; {pairs}'


@register('HARDY_WEIGHTED')
def _hardy(ctx):
    p, q = ctx.get('p'), ctx.get('q')
    u_power, v_power = ctx.get('u_power'), ctx.get('v_power')
    params, profile = ctx.params, ctx.profile

    def h(x):
        return modulus(profile, x, profile.evaluate(params, x))

    result = hardy_check(u_power, v_power, p, q, h)
    return result['lhs'], result['upper'] * result['norm'], f'A1={result["A1"]:.10g}, C <= {result["upper"]:.10g}'


@register('HL_REARRANGE')
def _hl_rearrange(ctx):
    params = ctx.params
    partner = ctx.options.get('partner')
    g = parse_profile(partner) if partner else RadialProfile(0, ExpPow(1.0 / params.a))
    direct, star = rearrangement_pairing(params, ctx.profile, g, ctx.spec)
    return direct, star, f'partner {g.describe()}'


# ── Empirical constants ───────────────────────────────────────────────────────

def default_family(params, size, seed=0, m=0):
    """The ground state followed by seeded random mode mixtures."""
    if size < MIN_FAMILY:
        raise FamilyTooSmall(f'an empirical constant needs at least {MIN_FAMILY} profiles, got {size}')
    members = [RadialProfile(m, ExpPow(1.0 / params.a))]
    for i in range(size - 1):
        members.append(random_mixture(params, m, 2 + i % 5, seed + i))
    return members


def estimate_empirical_constant(check_id, params, family, exponents=None, spec=None, workers=None):
    """
    The best constant the family attains: sup lhs/rhs for upper-direction
    entries, its reciprocal for lower-direction ones.  GAUSS_DAMP returns
    the measured decay exponent instead.
    """
    definition = get(check_id)
    exponents = {**definition.defaults, **(exponents or {})}
    if definition.id == 'GAUSS_DAMP':
        return damping_slope(params, exponents['p'], exponents['alpha'], spec=spec)['slope']
    if definition.constant_mode != EMPIRICAL:
        raise DomainError(f'{definition.id} has a displayed constant; nothing to estimate')
    family = list(family)
    if len(family) < MIN_FAMILY:
        raise FamilyTooSmall(f'an empirical constant needs at least {MIN_FAMILY} profiles, got {len(family)}')

    def ratio(profile):
        return run_check(definition.id, params, profile, exponents, spec=spec, workers=1).ratio

    worst = max(run_ordered(ratio, family, workers))
    value = worst if definition.direction == 'upper' else (math.inf if worst == 0 else 1.0 / worst)
    logger.info('%s on %s over %d profiles: %.10g', definition.id, params, len(family), value)
    return value
