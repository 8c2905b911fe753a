"""
Closed-form weight constants for power weights.

Entry points
------------
pitt_B1(params, p, q, alpha, l)
    B_1 for u = |xi|^(alpha q), v = |x|^(l p) and the bracket
    B_1 (q')^(1/p') q^(1/q).

pitt_B2(params, p, q, alpha, l, outer='printed')
    Always diverges for power weights; the error records both outer
    exponents (2/r as printed, 1/r as in the Hardy inequality).

hardy_A1(u_power, v_power, p, q)
    A_1 = sup_s (int_s^inf u)^(1/q) (int_0^s v^(1-p'))^(1/p') and the bracket.

hardy_check(u_power, v_power, p, q, h)
    Both sides of the weighted Hardy inequality for a half-line function h.
"""

import math

import numpy as np
from scipy import integrate

from core.exceptions import ConstraintViolation, DivergenceError, DomainError

HOMOGENEITY_TOL = 1e-12


def conjugate(p):
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _bracket(p, q):
    """(q')^(1/p') q^(1/q)."""
    pc, qc = conjugate(p), conjugate(q)
    return qc ** (1.0 / pc) * q ** (1.0 / q)


# ── Pitt ──────────────────────────────────────────────────────────────────────

def check_pitt_exponents(params, p, q, alpha, l):
    D = params.D
    if not 1 < p <= q < math.inf:
        raise ConstraintViolation('1<p≤q<∞', f'p={p:g}, q={q:g}')
    pc = conjugate(p)
    if not alpha > -D / q:
        raise ConstraintViolation('α>−D/q', f'α={alpha:g}, D/q={D / q:g}')
    if not l < D / p:
        raise ConstraintViolation('l<D/p', f'l={l:g}, D/p={D / p:g}')
    if not l < D / pc:
        raise ConstraintViolation("l<D/p'", f"l={l:g}, D/p'={D / pc:g}")
    if not alpha < 0 < l:
        raise ConstraintViolation('α<0<l', f'α={alpha:g}, l={l:g}')
    gap = (alpha + l) / D - (1.0 / pc - 1.0 / q)
    if abs(gap) > HOMOGENEITY_TOL:
        raise ConstraintViolation(
            'eq.homo-pitt',
            f"(α+l)/D = {(alpha + l) / D:.12g} but 1/p' − 1/q = {1.0 / pc - 1.0 / q:.12g}",
        )


def pitt_B1(params, p, q, alpha, l):
    """
    With u*(t) = c_alpha t^(alpha q / D), (1/v)*(t) = c_l t^(-l p / D) the
    s-exponents cancel and

        B_1 = [c_alpha / (1 + alpha q / D)]^(1/q) [c_l^(p'-1) / (1 - l p' / D)]^(1/p').
    """
    check_pitt_exponents(params, p, q, alpha, l)
    D, K = params.D, params.K
    pc = conjugate(p)
    c_alpha = (D / K) ** (alpha * q / D)
    c_l = (D / K) ** (-l * p / D)
    first = (c_alpha / (1.0 + alpha * q / D)) ** (1.0 / q)
    second = (c_l ** (pc - 1.0) / (1.0 - l * pc / D)) ** (1.0 / pc)
    b1 = first * second
    return b1, b1 * _bracket(p, q)


def pitt_B2(params, p, q, alpha, l, outer='printed'):
    if outer not in ('printed', 'hardy'):
        raise DomainError(f"outer must be 'printed' or 'hardy', got {outer!r}")
    if not 1 < q < p < math.inf:
        raise ConstraintViolation('1<q<p<∞', f'p={p:g}, q={q:g}')
    D = params.D
    pc = conjugate(p)
    r = 1.0 / (1.0 / q - 1.0 / p)
    exponent = -l * pc / D
    outer_exp = 2.0 / r if outer == 'printed' else 1.0 / r
    raise DivergenceError(
        f'B_2 integrand is the pure power t^{exponent:.6g} for power weights '
        f'(outer exponent {outer_exp:.6g}; printed 2/r={2.0 / r:.6g}, Hardy 1/r={1.0 / r:.6g})'
    )


# ── Hardy ─────────────────────────────────────────────────────────────────────

def hardy_A1(u_power, v_power, p, q):
    """A_1 for u = t^u_power, v = t^v_power and the bracket A_1 (q')^(1/p') q^(1/q)."""
    if not 1 < p <= q < math.inf:
        raise DomainError(f'hardy_A1 needs 1 < p <= q < inf, got p={p:g}, q={q:g}')
    if not u_power < -1:
        raise DivergenceError(f'int_s^inf t^{u_power:g} dt diverges')
    pc = conjugate(p)
    g = v_power * (1.0 - pc)
    if not g > -1:
        raise DivergenceError(f'int_0^s t^{g:g} dt diverges')
    s_exponent = (u_power + 1.0) / q + (g + 1.0) / pc
    if abs(s_exponent) > HOMOGENEITY_TOL:
        raise DivergenceError(f'A_1 grows like s^{s_exponent:.6g}; the supremum is infinite')
    a1 = (1.0 / (-u_power - 1.0)) ** (1.0 / q) * (1.0 / (g + 1.0)) ** (1.0 / pc)
    return a1, a1 * _bracket(p, q)


_HARDY_GRID = np.geomspace(1e-8, 1e8, 8001)


def hardy_check(u_power, v_power, p, q, h):
    """
    (int (int_0^x h)^q u dx)^(1/q) against (int h^p v dx)^(1/p), in the
    logarithmic variable on [1e-8, 1e8].
    """
    a1, upper = hardy_A1(u_power, v_power, p, q)
    x = _HARDY_GRID
    logx = np.log(x)
    hx = np.abs(np.asarray(h(x), dtype=float))
    primitive = integrate.cumulative_simpson(hx * x, x=logx, initial=0.0)
    lhs = integrate.simpson(primitive ** q * x ** u_power * x, x=logx) ** (1.0 / q)
    norm = integrate.simpson(hx ** p * x ** v_power * x, x=logx) ** (1.0 / p)
    ratio = lhs / norm if norm > 0 else 0.0
    return {
        'lhs': float(lhs),
        'norm': float(norm),
        'ratio': float(ratio),
        'A1': a1,
        'upper': upper,
        'holds': bool(ratio <= upper * (1 + 1e-6)),
    }
