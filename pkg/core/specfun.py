"""
Special functions used across the project.

Entry points
------------
laguerre(ell, lam, t)
    Generalized Laguerre polynomial L_ell^(lam)(t).

laguerre_table(ell_max, lam, t)
    Rows L_0 .. L_ell_max at the points t, by the three-term recurrence.

bessel_j_norm(nu, omega)
    Normalized Bessel function (omega/2)^(-nu) J_nu(omega).

bessel_i_norm(lam, w, scaled=False)
    Normalized modified Bessel function (w/2)^(-lam) I_lam(w), complex w.

log_gamma(x), gamma_ratio(x, y)
    ln Gamma and Gamma(x)/Gamma(y) computed in log space.

Heavy lifting is scipy.special; the power series covers small arguments,
where (w/2)^(-nu) times a tiny I/J value would lose digits or underflow.
"""

import numpy as np
from scipy import special

from .exceptions import SpecialFunctionDomainError

LAGUERRE_MAX_DEGREE = 64
SERIES_CUTOFF = 2.0
_SERIES_TERMS = 30


def _require_order(order, name):
    if not order > -1:
        raise SpecialFunctionDomainError(f'{name} must exceed -1, got {order}')


# ── Laguerre ──────────────────────────────────────────────────────────────────

def laguerre(ell, lam, t):
    """L_ell^(lam)(t) for 0 <= ell <= 64 and lam > -1."""
    if int(ell) != ell or not 0 <= ell <= LAGUERRE_MAX_DEGREE:
        raise SpecialFunctionDomainError(
            f'Laguerre degree must be an integer in [0, {LAGUERRE_MAX_DEGREE}], got {ell}'
        )
    _require_order(lam, 'Laguerre parameter')
    return special.eval_genlaguerre(int(ell), lam, t)


def laguerre_table(ell_max, lam, t):
    """
    Returns an array of shape (ell_max + 1,) + shape(t) holding
    L_0^(lam)(t) .. L_ell_max^(lam)(t).

    (l+1) L_{l+1} = (2l + lam + 1 - t) L_l - (l + lam) L_{l-1}
    """
    if int(ell_max) != ell_max or not 0 <= ell_max <= LAGUERRE_MAX_DEGREE:
        raise SpecialFunctionDomainError(f'Laguerre degree out of range: {ell_max}')
    _require_order(lam, 'Laguerre parameter')
    t = np.asarray(t, dtype=float)
    table = np.empty((int(ell_max) + 1,) + t.shape)
    table[0] = 1.0
    if ell_max >= 1:
        table[1] = lam + 1.0 - t
    for ell in range(1, int(ell_max)):
        table[ell + 1] = ((2 * ell + lam + 1.0 - t) * table[ell] - (ell + lam) * table[ell - 1]) / (ell + 1)
    return table


# ── Bessel ────────────────────────────────────────────────────────────────────

def _normalized_series(order, quarter_sq):
    """sum_j quarter_sq^j / (j! Gamma(order + j + 1)) with quarter_sq = +-(w/2)^2."""
    term = np.full(quarter_sq.shape, np.exp(-special.gammaln(order + 1.0)), dtype=quarter_sq.dtype)
    total = term.copy()
    for j in range(_SERIES_TERMS):
        term = term * quarter_sq / ((j + 1.0) * (order + j + 1.0))
        total = total + term
    return total


def bessel_j_norm(nu, omega):
    """J~_nu(omega) = (omega/2)^(-nu) J_nu(omega) for real omega >= 0."""
    _require_order(nu, 'Bessel order')
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise SpecialFunctionDomainError('bessel_j_norm expects omega >= 0')
    out = np.empty_like(omega)
    small = omega <= SERIES_CUTOFF
    if np.any(small):
        out[small] = _normalized_series(nu, -(omega[small] / 2.0) ** 2)
    large = ~small
    if np.any(large):
        w = omega[large]
        out[large] = special.jv(nu, w) * (w / 2.0) ** (-nu)
    return out if out.ndim else float(out)


def bessel_i_norm(lam, w, scaled=False):
    """
    I~_lam(w) = (w/2)^(-lam) I_lam(w) for complex w.

    With scaled=True the result is multiplied by exp(-|Re w|), which keeps
    semigroup kernels finite for large arguments.
    """
    _require_order(lam, 'Bessel order')
    w = np.asarray(w, dtype=complex)
    # I~ is even; keep Re w >= 0 so the principal branches never straddle the cut.
    w = np.where(w.real < 0, -w, w)
    out = np.empty_like(w)
    small = np.abs(w) <= SERIES_CUTOFF
    if np.any(small):
        ws = w[small]
        series = _normalized_series(lam, (ws / 2.0) ** 2)
        if scaled:
            series = series * np.exp(-np.abs(ws.real))
        out[small] = series
    large = ~small
    if np.any(large):
        wl = w[large]
        bessel = special.ive(lam, wl) if scaled else special.iv(lam, wl)
        out[large] = bessel * (wl / 2.0) ** (-lam)
    return out if out.ndim else complex(out)


# ── Gamma ─────────────────────────────────────────────────────────────────────

def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0):
        raise SpecialFunctionDomainError(f'log_gamma expects x > 0, got {x}')
    value = special.gammaln(x_arr)
    return value if value.ndim else float(value)


def gamma_ratio(x, y):
    """Gamma(x) / Gamma(y) through log space."""
    return float(np.exp(log_gamma(x) - log_gamma(y)))
