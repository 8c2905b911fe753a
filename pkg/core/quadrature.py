"""
Composite Gauss-Legendre quadrature in the canonical variable

    u = sqrt(2/a) * r^(a/2),   r = (a u^2 / 2)^(1/a).

In u every weighted radial integral takes the form

    int_0^inf F(r) r^e dr = c_e int_0^inf F(r(u)) u^sigma du,
    sigma = 2(e+1)/a - 1,   c_e = (2/a) (a/2)^((e+1)/a),

and the deformed Hankel kernel becomes J~_nu(u y) with y = sqrt(2/a) s^(a/2).

Entry points
------------
QuadratureSpec.default()
    Spec built from the FKA_* settings.

build_grid(u_hi, breaks, width, spec, u_lo=0.0)
    Graded panels toward 0, uniform panels of at most `width` elsewhere,
    breakpoints honoured.

tail_extent(params, profile, sigma, spec)
    Smallest u beyond which the integrand envelope is below tail_tol.
"""

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from django.conf import settings

from .exceptions import OscillationBudgetExceeded, QuadratureError, TailToleranceExceeded

logger = logging.getLogger(__name__)


@lru_cache(maxsize=32)
def _legendre(n):
    return np.polynomial.legendre.leggauss(n)


def to_canonical(a, r):
    return np.sqrt(2.0 / a) * np.asarray(r, dtype=float) ** (a / 2.0)


def from_canonical(a, u):
    return (a * np.asarray(u, dtype=float) ** 2 / 2.0) ** (1.0 / a)


def weight_exponent(a, e):
    """sigma for the weight r^e dr."""
    return 2.0 * (e + 1.0) / a - 1.0


def weight_factor(a, e):
    """c_e for the weight r^e dr."""
    return (2.0 / a) * (a / 2.0) ** ((e + 1.0) / a)


# ── Spec ──────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class QuadratureSpec:
    """
    Layout and budget for every quadrature in the project.

    r_max            fixed truncation radius; None means scan the tail
    panels           minimum number of uniform panels; None means derive from width
    nodes_per_panel  Gauss-Legendre nodes on each uniform panel
    tail_tol         bound on the neglected tail relative to the peak envelope
    oscillation_guard  largest kernel phase advance allowed across one panel
    max_nodes        refusal threshold
    grading_levels   number of geometric panels between the tip and the first break
    """
    r_max: float = None
    panels: int = None
    nodes_per_panel: int = 12
    tail_tol: float = 1e-12
    oscillation_guard: float = math.pi / 2
    max_nodes: int = 6000
    grading_levels: int = 20
    grading_ratio: float = 0.25
    graded_nodes: int = 8
    max_width: float = 0.5

    @classmethod
    def default(cls):
        return cls(
            nodes_per_panel=settings.FKA_NODES_PER_PANEL,
            tail_tol=settings.FKA_TAIL_TOL,
            oscillation_guard=settings.FKA_OSCILLATION_GUARD,
            max_nodes=settings.FKA_MAX_NODES,
        )

    def refined(self):
        """Same spec with more nodes and narrower panels."""
        return replace(
            self,
            nodes_per_panel=self.nodes_per_panel + 4,
            max_width=self.max_width / 2,
            oscillation_guard=self.oscillation_guard / 2,
            max_nodes=self.max_nodes * 4,
        )

    def width_for(self, y_max):
        """Panel width keeping the phase advance u*y below the guard up to y_max."""
        if y_max <= 0:
            return self.max_width
        return min(self.max_width, self.oscillation_guard / y_max)


# ── Grid ──────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """
    Nodes in u with plain Legendre weights.  The interval [0, tip] below the
    innermost graded panel is lumped onto the first node.
    """
    nodes: np.ndarray
    weights: np.ndarray
    tip: float
    max_width: float
    u_lo: float
    u_hi: float

    @property
    def size(self):
        return self.nodes.size

    def weights_for(self, sigma):
        """Weights for int g(u) u^sigma du."""
        if not sigma > -1:
            raise QuadratureError(f'weight exponent sigma={sigma} is not integrable at 0')
        w = self.weights * self.nodes ** sigma
        if self.tip > 0:
            w = w.copy()
            w[0] += self.tip ** (sigma + 1.0) / (sigma + 1.0)
        return w

    def radii(self, a):
        return from_canonical(a, self.nodes)

    def measure_weights(self, a, e):
        """Weights w_j with sum F(r_j) w_j ~ int F(r) r^e dr."""
        return weight_factor(a, e) * self.weights_for(weight_exponent(a, e))

    def allows(self, y_max, guard):
        return self.max_width * y_max <= guard * (1 + 1e-9)

    def dilated(self, c):
        """The grid under u -> c u; weights_for(sigma) picks up c^(sigma+1)."""
        return QuadratureGrid(
            nodes=self.nodes * c,
            weights=self.weights * c,
            tip=self.tip * c,
            max_width=self.max_width * c,
            u_lo=self.u_lo * c,
            u_hi=self.u_hi * c,
        )


def build_grid(u_hi, breaks=(), width=0.5, spec=None, u_lo=0.0):
    spec = spec or QuadratureSpec.default()
    if not u_hi > u_lo:
        raise QuadratureError(f'empty quadrature range [{u_lo}, {u_hi}]')
    inner = sorted(b for b in breaks if u_lo < b < u_hi)
    edges = [u_lo] + inner + [u_hi]

    nodes, weights = [], []
    tip = 0.0
    if u_lo == 0.0:
        first = min(width, edges[1])
        xg, wg = _legendre(spec.graded_nodes)
        hi = first
        graded = []
        for _ in range(spec.grading_levels):
            lo = hi * spec.grading_ratio
            graded.append((lo, hi))
            hi = lo
        tip = hi
        for lo, hi in reversed(graded):
            half = (hi - lo) / 2.0
            nodes.append(lo + half * (xg + 1.0))
            weights.append(half * wg)
        edges[0] = first
        if edges[1] == first:
            edges.pop(0)

    x, w = _legendre(spec.nodes_per_panel)
    spans = list(zip(edges[:-1], edges[1:]))
    if spec.panels:
        total = u_hi - edges[0]
        width = min(width, total / spec.panels) if total > 0 else width
    for lo, hi in spans:
        count = max(1, math.ceil((hi - lo) / width - 1e-12))
        cuts = np.linspace(lo, hi, count + 1)
        for a_, b_ in zip(cuts[:-1], cuts[1:]):
            half = (b_ - a_) / 2.0
            nodes.append(a_ + half * (x + 1.0))
            weights.append(half * w)

    nodes = np.concatenate(nodes) if nodes else np.empty(0)
    if nodes.size > spec.max_nodes:
        raise OscillationBudgetExceeded(
            f'{nodes.size} nodes needed on [{u_lo:.3g}, {u_hi:.3g}] with width {width:.3g}; '
            f'budget is {spec.max_nodes}'
        )
    logger.debug('grid [%.3g, %.3g]: %d nodes, width %.3g, tip %.3g', u_lo, u_hi, nodes.size, width, tip)
    return QuadratureGrid(
        nodes=nodes,
        weights=np.concatenate(weights),
        tip=tip,
        max_width=width,
        u_lo=u_lo,
        u_hi=u_hi,
    )


# ── Tail control ──────────────────────────────────────────────────────────────

_SCAN = np.geomspace(1e-3, 1e3, 721)


def tail_extent(params, profile, sigma, spec=None):
    """
    u_max for integrals of |psi(r(u))| u^sigma du.

    Compact profiles return their support edge; otherwise the envelope
    |psi| u^(sigma+1) is scanned on a geometric grid and cut where it
    drops below tail_tol times its peak.
    """
    spec = spec or QuadratureSpec.default()
    if spec.r_max is not None:
        return float(to_canonical(params.a, spec.r_max))
    edge = profile.support_edge
    if edge is not None:
        return float(to_canonical(params.a, edge))
    with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
        env = np.abs(profile.evaluate(params, from_canonical(params.a, _SCAN))) * _SCAN ** (sigma + 1.0)
    env = np.nan_to_num(env, nan=0.0, posinf=0.0)
    peak = env.max()
    if peak == 0:
        return 1.0
    above = np.nonzero(env > spec.tail_tol * peak)[0]
    last = above[-1]
    if last >= _SCAN.size - 1:
        raise TailToleranceExceeded(
            f'{profile.describe()} has not decayed to tail_tol={spec.tail_tol:g} by u={_SCAN[-1]:g}'
        )
    return float(_SCAN[last + 1])
