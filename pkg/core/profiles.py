"""
Radial profiles: the one-variable factor psi of f(x) = p(x) psi(|x|).

A RadialProfile couples a descriptor (the shape of psi) with the harmonic
degree m of the polynomial p, an amplitude and a dilation:

    psi(r) = amplitude * base(scale * r)

Descriptors
-----------
Gaussian(t)            exp(-t r^2)
ExpPow(c)              exp(-c r^a)
PowerCutoff(alpha, r0) r^(-alpha) on [0, r0], zero beyond
LaguerreMode(ell)      L_ell^(lam(m))((2/a) r^a) exp(-r^a / a)
ModeMixture(coeffs)    finite sum of Laguerre modes
Sampled(grid, values)  samples, optionally on a quadrature grid
Sum(parts)             sum of profiles sharing the degree m

parse_profile(text, m=0) reads the command-line form, e.g.
'exppow:c=0.5' or 'mixture:ell_max=6,seed=3,scale=2'.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import PchipInterpolator

from .exceptions import DomainError
from .specfun import LAGUERRE_MAX_DEGREE, laguerre, laguerre_table


# ── Descriptors ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Gaussian:
    t: float = 1.0

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError(f'Gaussian needs t > 0, got {self.t}')


@dataclass(frozen=True)
class ExpPow:
    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError(f'ExpPow needs c > 0, got {self.c}')


@dataclass(frozen=True)
class PowerCutoff:
    alpha: float = 0.0
    r0: float = 1.0

    def __post_init__(self):
        if not self.r0 > 0:
            raise DomainError(f'PowerCutoff needs r0 > 0, got {self.r0}')


@dataclass(frozen=True)
class LaguerreMode:
    ell: int = 0

    def __post_init__(self):
        if int(self.ell) != self.ell or not 0 <= self.ell <= LAGUERRE_MAX_DEGREE:
            raise DomainError(f'LaguerreMode degree out of range: {self.ell}')


@dataclass(frozen=True, eq=False)
class ModeMixture:
    coeffs: tuple
    label: str = ''

    def __post_init__(self):
        if not 0 < len(self.coeffs) <= LAGUERRE_MAX_DEGREE + 1:
            raise DomainError('ModeMixture needs between 1 and 65 coefficients')


@dataclass(frozen=True, eq=False)
class Sampled:
    """
    Samples of psi at strictly increasing radii.

    When `quadrature` is set, `grid` holds exactly the radii of its nodes
    and integrals use the grid weights instead of interpolation.
    """
    grid: np.ndarray
    values: np.ndarray
    quadrature: object = None
    _interp: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise DomainError('Sampled grid and values must be 1-d arrays of equal length >= 2')
        if grid[0] < 0 or np.any(np.diff(grid) <= 0):
            raise DomainError('Sampled grid must be strictly increasing and start at r >= 0')
        if not np.all(np.isfinite(values)):
            raise DomainError('Sampled values must be finite')
        object.__setattr__(self, 'grid', grid)
        object.__setattr__(self, 'values', values)

    def interpolate(self, x):
        if not self._interp:
            self._interp.append((
                PchipInterpolator(self.grid, self.values.real, extrapolate=False),
                PchipInterpolator(self.grid, self.values.imag, extrapolate=False),
            ))
        re, im = self._interp[0]
        x = np.asarray(x, dtype=float)
        clamped = np.where(x < self.grid[0], self.grid[0], x)
        out = re(clamped) + 1j * im(clamped)
        return np.where(np.isnan(out), 0.0, out)


@dataclass(frozen=True, eq=False)
class Sum:
    parts: tuple


# ── RadialProfile ─────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class RadialProfile:
    m: int
    descriptor: object
    amplitude: complex = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise DomainError(f'harmonic degree must be a nonnegative integer, got {self.m}')
        if not self.scale > 0:
            raise DomainError(f'scale must be positive, got {self.scale}')
        if isinstance(self.descriptor, Sum):
            if any(part.m != self.m for part in self.descriptor.parts):
                raise DomainError('every part of a Sum must share its degree m')

    # ── Evaluation ────────────────────────────────────────────────────────

    def evaluate(self, params, r):
        """psi(r) as a complex array."""
        x = self.scale * np.asarray(r, dtype=float)
        return self.amplitude * self._base(params, x)

    def _base(self, params, x):
        d = self.descriptor
        with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
            if isinstance(d, Gaussian):
                return np.exp(-d.t * x ** 2).astype(complex)
            if isinstance(d, ExpPow):
                return np.exp(-d.c * x ** params.a).astype(complex)
            if isinstance(d, PowerCutoff):
                inside = x <= d.r0
                return np.where(inside, x ** (-d.alpha), 0.0).astype(complex)
            if isinstance(d, LaguerreMode):
                xa = x ** params.a
                return (laguerre(d.ell, params.lam(self.m), 2.0 * xa / params.a) * np.exp(-xa / params.a)).astype(complex)
            if isinstance(d, ModeMixture):
                xa = x ** params.a
                table = laguerre_table(len(d.coeffs) - 1, params.lam(self.m), 2.0 * xa / params.a)
                coeffs = np.asarray(d.coeffs, dtype=complex)
                return np.tensordot(coeffs, table, axes=1) * np.exp(-xa / params.a)
            if isinstance(d, Sampled):
                return d.interpolate(x)
            if isinstance(d, Sum):
                return sum(part.evaluate(params, x) for part in d.parts)
        raise DomainError(f'unknown profile descriptor {d!r}')

    def regular_part(self, params, r):
        """psi(r) * r^(-singular_power), finite at r = 0."""
        d = self.descriptor
        if isinstance(d, PowerCutoff):
            x = self.scale * np.asarray(r, dtype=float)
            return np.where(x <= d.r0, self.amplitude * self.scale ** (-d.alpha), 0.0).astype(complex)
        if isinstance(d, Sum):
            x = self.scale * np.asarray(r, dtype=float)
            own = self.singular_power
            with np.errstate(divide='ignore', invalid='ignore'):
                total = sum(
                    part.regular_part(params, x) * self.scale ** part.singular_power
                    * np.asarray(r, dtype=float) ** (part.singular_power - own)
                    for part in d.parts
                )
            return self.amplitude * total
        return self.evaluate(params, r)

    # ── Shape facts ───────────────────────────────────────────────────────

    @property
    def singular_power(self):
        """Exponent of the algebraic behaviour of psi at r = 0."""
        d = self.descriptor
        if isinstance(d, PowerCutoff):
            return -d.alpha
        if isinstance(d, Sum):
            return min(part.singular_power for part in d.parts)
        return 0.0

    @property
    def support_edge(self):
        """Radius beyond which psi vanishes, or None."""
        d = self.descriptor
        if isinstance(d, PowerCutoff):
            return d.r0 / self.scale
        if isinstance(d, Sampled):
            return float(d.grid[-1]) / self.scale
        if isinstance(d, Sum):
            edges = [part.support_edge for part in d.parts]
            return None if None in edges else max(edges) / self.scale
        return None

    @property
    def breakpoints(self):
        """Radii where psi is not smooth (support edges)."""
        d = self.descriptor
        if isinstance(d, Sum):
            pts = sorted({b for part in d.parts for b in part.breakpoints})
            return [b / self.scale for b in pts]
        edge = self.support_edge
        return [] if edge is None else [edge]

    @property
    def is_monotone(self):
        """True when |f| is a nonincreasing function of |x|."""
        if self.m:
            return False
        d = self.descriptor
        if isinstance(d, (Gaussian, ExpPow)):
            return True
        if isinstance(d, PowerCutoff):
            return d.alpha >= 0
        if isinstance(d, LaguerreMode):
            return d.ell == 0
        return False

    @property
    def is_compact(self):
        return self.support_edge is not None

    def level_radius(self, params, s):
        """
        For monotone profiles: the radius of the superlevel set {|f| > s},
        which is a ball.
        """
        if not self.is_monotone:
            raise DomainError('level_radius needs a monotone profile')
        d = self.descriptor
        amp = abs(self.amplitude)
        s = np.asarray(s, dtype=float)
        with np.errstate(divide='ignore', invalid='ignore'):
            ratio = np.where(s > 0, amp / np.where(s > 0, s, 1.0), np.inf)
            log_ratio = np.log(np.maximum(ratio, 1.0))
            if isinstance(d, Gaussian):
                x = np.sqrt(log_ratio / d.t)
            elif isinstance(d, ExpPow):
                x = (log_ratio / d.c) ** (1.0 / params.a)
            elif isinstance(d, LaguerreMode):
                x = (log_ratio * params.a) ** (1.0 / params.a)
            elif d.alpha == 0:
                x = np.where(s < amp, d.r0, 0.0)
            else:
                x = np.minimum(ratio ** (1.0 / d.alpha), d.r0)
        x = np.where(s >= self._peak(params), 0.0, x)
        return x / self.scale

    def _peak(self, params):
        d = self.descriptor
        if isinstance(d, PowerCutoff) and d.alpha > 0:
            return np.inf
        return abs(self.amplitude)

    # ── Derived profiles ──────────────────────────────────────────────────

    def dilate(self, t):
        """r -> psi(t r)."""
        return replace(self, scale=self.scale * t)

    def unit_scale(self):
        """The same profile with scale 1: psi(r) = unit_scale(scale * r)."""
        return replace(self, scale=1.0)

    def scaled(self, c):
        return replace(self, amplitude=self.amplitude * c)

    def with_degree(self, m):
        return replace(self, m=m)

    def __add__(self, other):
        if not isinstance(other, RadialProfile):
            return NotImplemented
        return RadialProfile(self.m, Sum((self, other)))

    def describe(self):
        d = self.descriptor
        if isinstance(d, Gaussian):
            text = f'gaussian:t={d.t:g}'
        elif isinstance(d, ExpPow):
            text = f'exppow:c={d.c:g}'
        elif isinstance(d, PowerCutoff):
            text = f'indicator:r0={d.r0:g}' if d.alpha == 0 else f'cutoff:alpha={d.alpha:g},r0={d.r0:g}'
        elif isinstance(d, LaguerreMode):
            text = f'mode:ell={d.ell}'
        elif isinstance(d, ModeMixture):
            text = d.label or f'mixture:ell_max={len(d.coeffs) - 1}'
        elif isinstance(d, Sampled):
            text = f'sampled:n={d.grid.size}'
        else:
            text = '+'.join(part.describe() for part in d.parts)
        if self.amplitude != 1:
            text += f',amp={self.amplitude:g}'
        if self.scale != 1:
            text += f',scale={self.scale:g}'
        return text

    def __repr__(self):
        return f'RadialProfile(m={self.m}, {self.describe()})'


# ── Parsing ───────────────────────────────────────────────────────────────────

_PROFILE_KEYS = {
    'gaussian': {'t'},
    'exppow': {'c'},
    'cutoff': {'alpha', 'r0'},
    'indicator': {'r0'},
    'mode': {'ell'},
    'mixture': {'ell_max', 'seed'},
}


def mixture_phases(ell_max, seed):
    """Unimodular coefficients exp(i theta_l) / sqrt(ell_max + 1) with seeded theta."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, int(ell_max) + 1)
    return tuple(np.exp(1j * theta) / np.sqrt(ell_max + 1.0))


def parse_profile(text, m=0):
    """
    'name:key=value,...' -> RadialProfile.

    Every name accepts amp= and scale= besides its own keys.
    """
    name, _, rest = text.strip().partition(':')
    name = name.lower()
    if name not in _PROFILE_KEYS:
        raise DomainError(f'unknown profile {name!r}; expected one of {", ".join(sorted(_PROFILE_KEYS))}')
    opts = {}
    for item in filter(None, (part.strip() for part in rest.split(','))):
        key, sep, value = item.partition('=')
        if not sep:
            raise DomainError(f'malformed profile option {item!r}')
        key = key.strip()
        if key not in _PROFILE_KEYS[name] | {'amp', 'scale'}:
            raise DomainError(f'profile {name} does not accept {key!r}')
        try:
            opts[key] = float(value)
        except ValueError:
            raise DomainError(f'profile option {key} must be numeric, got {value!r}') from None

    amp = opts.pop('amp', 1.0)
    scale = opts.pop('scale', 1.0)
    if name == 'gaussian':
        descriptor = Gaussian(opts.get('t', 1.0))
    elif name == 'exppow':
        descriptor = ExpPow(opts.get('c', 1.0))
    elif name == 'cutoff':
        descriptor = PowerCutoff(opts.get('alpha', 0.0), opts.get('r0', 1.0))
    elif name == 'indicator':
        descriptor = PowerCutoff(0.0, opts.get('r0', 1.0))
    elif name == 'mode':
        descriptor = LaguerreMode(int(opts.get('ell', 0)))
    else:
        ell_max = int(opts.get('ell_max', 6))
        seed = int(opts.get('seed', 0))
        descriptor = ModeMixture(mixture_phases(ell_max, seed), label=f'mixture:ell_max={ell_max},seed={seed}')
    return RadialProfile(m, descriptor, amplitude=amp, scale=scale)
