"""
Displayed constants of the exact-constant checks, as functions of the
parameters and the kernel bound M = kernel_bound_C.

Each constant comes from minimizing a two-term bound A r^x + B r^(-y)
over the splitting radius r, so every one of them is a true upper bound
for the unitary transform once M is folded in.
"""

import math

from core.exceptions import ConstraintViolation
from core.specfun import log_gamma
from rearrange.weights import conjugate


def hausdorff_young_constant(bound, p):
    """M^(2/p - 1): Riesz–Thorin between (1, inf) with M and (2, 2) with 1."""
    return bound ** (2.0 / p - 1.0)


def nash_constant(params, s, bound=1.0):
    """
    C with ||f||_2^2 <= C ||f||_1^(4s/(D+2s)) || |xi|^s F f ||_2^(2D/(D+2s)).

    With bound = 1 this is K/D (2s/K)^(D/(D+2s)) + (2s/K)^(-2s/(D+2s)); the
    bound enters through K -> M^2 K in the low-frequency term.
    """
    if not s > 0:
        raise ConstraintViolation('s>0', f's={s:g}')
    D = params.D
    k_eff = bound ** 2 * params.K
    x = 2.0 * s / k_eff
    return k_eff / D * x ** (D / (D + 2 * s)) + x ** (-2 * s / (D + 2 * s))


def nash_exponents(params, s):
    D = params.D
    return 4 * s / (D + 2 * s), 2 * D / (D + 2 * s)


def clarkson_constant(params, s):
    """
    D_c with ||f||_1 <= D_c ||f||_2^(2s/(D/2+2s)) || |x|^(2s) f ||_1^((D/2)/(D/2+2s)),
    the exact minimum of (K/D)^(1/2) ||f||_2 r^(D/2) + r^(-2s) || |x|^(2s) f ||_1.
    """
    if not s > 0:
        raise ConstraintViolation('s>0', f's={s:g}')
    alpha, beta = params.D / 2.0, 2.0 * s
    total = alpha + beta
    return (total / beta) * (beta / alpha) ** (alpha / total) * (params.K / params.D) ** (beta / (2 * total))


def clarkson_exponents(params, s):
    alpha, beta = params.D / 2.0, 2.0 * s
    return beta / (alpha + beta), alpha / (alpha + beta)


def gauss_damp_constant(params, p, alpha, bound=1.0):
    """
    C with || exp(-t|.|^a) F f ||_q <= C t^(-alpha/a) || |x|^alpha f ||_p, q = p'.

        C = M^(2/p-1) + M K^(2/q) (D - alpha q)^(-1/q) (Gamma(D/a) / (a q^(D/a)))^(1/q)

    from splitting f at |x| = t^(1/a).
    """
    if not 1 < p <= 2:
        raise ConstraintViolation('1<p≤2', f'p={p:g}')
    q = conjugate(p)
    D, a = params.D, params.a
    if not 0 < alpha < D / q:
        raise ConstraintViolation('0<α<D/q', f'α={alpha:g}, D/q={D / q:g}')
    log_gauss = log_gamma(D / a) - math.log(a) - (D / a) * math.log(q)
    inner = params.K ** (2.0 / q) * (D - alpha * q) ** (-1.0 / q) * math.exp(log_gauss / q)
    return bound ** (2.0 / p - 1.0) + bound * inner


def sigma_alpha(params, alpha):
    """int exp(-|x|^alpha) dmu = K Gamma(D/alpha) / alpha."""
    return params.K * math.exp(log_gamma(params.D / alpha)) / alpha


def log_variance_normalizer(params, alpha, c):
    """ln k_{alpha,c} with k_{alpha,c} = sigma_alpha c^(-D)."""
    if not (alpha > 0 and c > 0):
        raise ConstraintViolation('α>0, c>0', f'α={alpha:g}, c={c:g}')
    return math.log(sigma_alpha(params, alpha)) - params.D * math.log(c)


def entropy_bound(bound):
    """Lower bound -2 ln M for the entropy sum of a unit vector."""
    return -2.0 * math.log(bound)
