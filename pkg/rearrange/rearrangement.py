"""
Distribution functions, decreasing rearrangements and Lorentz functionals
of f = p(x) psi(|x|) against mu_{k,a}.

Monotone radial profiles are handled through their superlevel balls.  Every
other profile is cut into level slabs: each node of the composite grid owns
the mu-measure of its radial shell and the slabs are sorted by height, which
is exact for the piecewise-constant approximant.

Entry points
------------
level_slabs(params, profile)                 -> Slabs
distribution_fn(params, profile, m, s)       mu({|f| > s})
decreasing_rearrangement(params, profile, m, t_grid) -> RearrangedFn
layer_cake(params, profile, p)               p int s^(p-1) D_f(s) ds
rearranged_mass(params, profile, p)          int (f*)^p dt
lorentz_norm(params, profile, m, p, q)       q = inf as sup_s s D_f(s)^(1/p)
lorentz_norm_weak(params, profile, m, p)     sup_t t^(1/p) f*(t)
young_constant(params, weight)
jt_check(params, profile, m, q, s_grid)
rearrangement_pairing(params, f, g)          (int f g dmu, int f* g* dt)
"""

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from core.exceptions import DivergenceError, DomainError, QuadratureError, TailToleranceExceeded
from core.geometry import ball_measure, measure_nodes, modulus, require_radial_modulus
from core.profiles import RadialProfile, Sum

logger = logging.getLogger(__name__)


def _with_degree(params, profile, m):
    if m is not None and m != profile.m:
        profile = profile.with_degree(m)
    require_radial_modulus(params, profile.m, 'rearrangement')
    return profile


def _analytic(profile):
    return profile.is_monotone


def _nodes(params, profile, spec=None):
    try:
        return measure_nodes(params, profile, spec=spec)
    except TailToleranceExceeded as exc:
        raise DivergenceError(f'{profile.describe()} does not decay fast enough to rearrange: {exc}') from exc


# ── Slabs ─────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class Slabs:
    """
    Heights h_j in nonincreasing order and the mu-masses w_j they occupy;
    f* equals h_j on [M_(j-1), M_j) with M the cumulative mass.
    """
    heights: np.ndarray
    masses: np.ndarray

    @property
    def edges(self):
        return np.concatenate([[0.0], np.cumsum(self.masses)])

    def value_at(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.edges[1:], t, side='right')
        padded = np.concatenate([self.heights, [0.0]])
        return padded[np.minimum(idx, self.heights.size)]

    def measure_above(self, s):
        s = np.asarray(s, dtype=float)
        return np.array([self.masses[self.heights > level].sum() for level in np.atleast_1d(s)]).reshape(s.shape)


def level_slabs(params, profile, spec=None):
    require_radial_modulus(params, profile.m, 'level slabs')
    radii, values, weights = _nodes(params, profile, spec)
    heights = modulus(profile, radii, values)
    order = np.argsort(-heights, kind='stable')
    return Slabs(heights[order], weights[order])


# ── Distribution function and f* ──────────────────────────────────────────────

def distribution_fn(params, profile, m=None, s=0.0, spec=None):
    profile = _with_degree(params, profile, m)
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError('distribution_fn expects s >= 0')
    if _analytic(profile):
        return ball_measure(params, profile.level_radius(params, s))
    return level_slabs(params, profile, spec).measure_above(s)


@dataclass(frozen=True, eq=False)
class RearrangedFn:
    t_grid: np.ndarray
    values: np.ndarray
    source_mass: float

    def __post_init__(self):
        if np.any(np.diff(self.values) > 1e-12 * max(1.0, float(np.max(self.values, initial=0.0)))):
            raise DomainError('rearranged values must be nonincreasing')


def _monotone_star(params, profile, t):
    """f*(t) = |psi(rho)| with mu(B_rho) = t, zero from the support edge on."""
    rho = (params.D * np.asarray(t, dtype=float) / params.K) ** (1.0 / params.D)
    with np.errstate(divide='ignore', invalid='ignore'):
        values = np.abs(profile.evaluate(params, rho))
    edge = profile.support_edge
    if edge is not None:
        values = np.where(rho >= edge, 0.0, values)
    return np.nan_to_num(values, nan=0.0, posinf=np.inf)


def decreasing_rearrangement(params, profile, m=None, t_grid=(), spec=None):
    from core.geometry import lp_norm

    profile = _with_degree(params, profile, m)
    t = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t) <= 0) or np.any(t < 0):
        raise DomainError('t_grid must be increasing and nonnegative')
    if _analytic(profile):
        values = _monotone_star(params, profile, t)
    else:
        values = level_slabs(params, profile, spec).value_at(t)
    try:
        mass = lp_norm(params, profile, 1.0, spec=spec)
    except DivergenceError:
        mass = math.inf
    return RearrangedFn(t, values, mass)


# ── Equimeasurable integrals ──────────────────────────────────────────────────

def rearranged_mass(params, profile, p, spec=None):
    """int_0^inf f*(t)^p dt."""
    require_radial_modulus(params, profile.m, 'rearranged mass')
    if _analytic(profile):
        # t = mu(B_rho) turns the t-integral into the radial one
        radii, values, weights = _nodes(params, profile, spec)
        heights = _monotone_star(params, profile, ball_measure(params, radii))
        return float(np.sum(heights ** p * weights))
    slabs = level_slabs(params, profile, spec)
    return float(np.sum(slabs.heights ** p * slabs.masses))


def layer_cake(params, profile, p, spec=None):
    """p int_0^inf s^(p-1) D_f(s) ds."""
    require_radial_modulus(params, profile.m, 'layer cake')
    if not _analytic(profile):
        slabs = level_slabs(params, profile, spec)
        # exact for the step function: p int_0^h s^(p-1) ds = h^p
        return float(np.sum(slabs.heights ** p * slabs.masses))

    amp = abs(profile.amplitude)

    def integrand(s):
        return p * s ** (p - 1.0) * float(ball_measure(params, profile.level_radius(params, s)))

    d = profile.descriptor
    pieces = []
    with warnings.catch_warnings():
        warnings.simplefilter('error', integrate.IntegrationWarning)
        try:
            if getattr(d, 'alpha', 0.0) > 0:
                corner = amp * (d.r0 ** (-d.alpha))
                pieces.append(integrate.quad(integrand, 0.0, corner, epsabs=0.0, epsrel=1e-11, limit=400)[0])
                pieces.append(integrate.quad(integrand, corner, np.inf, epsabs=0.0, epsrel=1e-11, limit=400)[0])
            else:
                pieces.append(integrate.quad(integrand, 0.0, amp, epsabs=0.0, epsrel=1e-11, limit=400)[0])
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f'layer-cake integral of {profile.describe()}: {exc}') from exc
    return float(sum(pieces))


# ── Lorentz functionals ───────────────────────────────────────────────────────

def lorentz_norm(params, profile, m=None, p=2.0, q=2.0, spec=None):
    """
    ((q/p) int t^(q/p-1) f*(t)^q dt)^(1/q); for q = inf the functional
    sup_s s D_f(s)^(1/p).
    """
    profile = _with_degree(params, profile, m)
    if not 1 < p < math.inf:
        raise DomainError(f'Lorentz norms need 1 < p < inf, got p={p}')
    if not q >= 1:
        raise DomainError(f'Lorentz norms need q >= 1, got q={q}')
    if math.isinf(q):
        return _lorentz_sup_printed(params, profile, p, spec)
    if _analytic(profile):
        radii, values, weights = _nodes(params, profile, spec)
        t = ball_measure(params, radii)
        heights = _monotone_star(params, profile, t)
        with np.errstate(divide='ignore', invalid='ignore'):
            total = (q / p) * np.sum(np.where(heights > 0, t ** (q / p - 1.0) * heights ** q, 0.0) * weights)
    else:
        slabs = level_slabs(params, profile, spec)
        edges = slabs.edges
        total = float(np.sum(slabs.heights ** q * (edges[1:] ** (q / p) - edges[:-1] ** (q / p))))
    if not np.isfinite(total):
        raise DivergenceError(f'Lorentz ({p:g},{q:g}) functional of {profile.describe()} diverges')
    return float(total) ** (1.0 / q)


def _lorentz_sup_printed(params, profile, p, spec):
    if _analytic(profile):
        radii, values, _ = _nodes(params, profile, spec)
        levels = modulus(profile, radii, values)
        dist = distribution_fn(params, profile, None, levels * (1 - 1e-12))
    else:
        slabs = level_slabs(params, profile, spec)
        levels = slabs.heights
        dist = slabs.edges[1:]
    value = float(np.max(levels * dist ** (1.0 / p), initial=0.0))
    if not np.isfinite(value):
        raise DivergenceError(f'weak L^{p:g} functional of {profile.describe()} is infinite')
    return value


def lorentz_norm_weak(params, profile, m=None, p=2.0, spec=None):
    """sup_t t^(1/p) f*(t)."""
    profile = _with_degree(params, profile, m)
    if _analytic(profile):
        radii, values, _ = _nodes(params, profile, spec)
        t = ball_measure(params, radii)
        heights = modulus(profile, radii, values)
    else:
        slabs = level_slabs(params, profile, spec)
        t, heights = slabs.edges[1:], slabs.heights
    value = float(np.max(t ** (1.0 / p) * heights, initial=0.0))
    if not np.isfinite(value):
        raise DivergenceError(f'weak L^{p:g} functional of {profile.describe()} is infinite')
    return value


# ── Young functions ───────────────────────────────────────────────────────────

def young_constant(params, weight):
    """
    sup_t mu({|psi| <= t}) / t for psi = |x|^power (weight=('power', s))
    or psi = theta_{k,a} (weight='theta', N=1, t in (0, 1]).

    math.inf marks a weight that is not a Young function.
    """
    if weight == 'theta':
        if params.N != 1:
            raise DomainError('the theta_{k,a} Young constant is only closed-form for N=1')
        e = params.D - 1
        if e <= 0:
            return math.inf
        # {|x|^e <= t} = B_(t^(1/e)); ratio K t^(D/e - 1) / D peaks at t = 1
        return params.K / params.D
    kind, power = weight
    if kind != 'power':
        raise DomainError(f'unknown Young weight {weight!r}')
    if power <= 0:
        return math.inf
    if abs(power - params.D) <= 1e-12 * params.D:
        return params.K / params.D
    return math.inf


# ── Jodeit-Torchinsky type estimate ───────────────────────────────────────────

def jt_check(params, profile, m=None, q=2.0, s_grid=(0.5, 1.0, 2.0, 4.0), spec=None):
    """
    Ratios (int_0^s [(Ff)*]^q dt / int_0^s (int_0^(1/t) f*)^q dt)^(1/q) per s
    and their maximum, an empirical lower estimate of K_q.
    """
    from transform.engine import fka_radial

    if q < 2:
        raise DomainError(f'jt_check needs q >= 2, got q={q}')
    profile = _with_degree(params, profile, m)
    s_grid = np.asarray(s_grid, dtype=float)
    source = level_slabs(params, profile, spec)
    if not np.any(source.heights > 0):
        return {'s': s_grid.tolist(), 'ratios': [0.0] * s_grid.size, 'K_q': 0.0}
    image = level_slabs(params, fka_radial(params, profile, spec=spec).as_profile(), spec)

    src_edges = source.edges
    src_cum = np.concatenate([[0.0], np.cumsum(source.heights * source.masses)])

    def primitive(tau):
        return float(np.interp(tau, src_edges, src_cum))

    def lhs(s):
        edges = image.edges
        overlap = np.clip(np.minimum(edges[1:], s) - edges[:-1], 0.0, None)
        return float(np.sum(image.heights ** q * overlap))

    def rhs(s):
        value, _ = integrate.quad(lambda t: primitive(1.0 / t) ** q if t > 0 else src_cum[-1] ** q,
                                  0.0, s, limit=400)
        return value

    ratios = []
    for s in s_grid:
        denom = rhs(s)
        ratios.append((lhs(s) / denom) ** (1.0 / q) if denom > 0 else 0.0)
    return {'s': s_grid.tolist(), 'ratios': ratios, 'K_q': float(max(ratios))}


# ── Hardy-Littlewood rearrangement ────────────────────────────────────────────

def rearrangement_pairing(params, f, g, spec=None):
    """(int |f||g| dmu, int f* g* dt) on a grid shared by both profiles."""
    require_radial_modulus(params, f.m, 'rearrangement pairing')
    require_radial_modulus(params, g.m, 'rearrangement pairing')
    joint = RadialProfile(0, Sum((f.with_degree(0), g.with_degree(0))))
    radii, _, weights = _nodes(params, joint, spec)
    hf = modulus(f, radii, f.evaluate(params, radii))
    hg = modulus(g, radii, g.evaluate(params, radii))
    direct = float(np.sum(hf * hg * weights))

    sf = np.argsort(-hf, kind='stable')
    sg = np.argsort(-hg, kind='stable')
    fs = Slabs(hf[sf], weights[sf])
    gs = Slabs(hg[sg], weights[sg])
    cuts = np.union1d(fs.edges, gs.edges)
    left, right = cuts[:-1], cuts[1:]
    star = float(np.sum(fs.value_at(left) * gs.value_at(left) * (right - left)))
    return direct, star
