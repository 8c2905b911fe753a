"""
Catalog of the inequalities the harness can evaluate.

Every entry names its constant mode, the anchor string carried into each
report, the direction of the inequality and the default exponents.  The
order of CATALOG is the canonical report order.

Modes
-----
exact_constant      the constant is known; the report passes iff lhs <= rhs
empirical_constant  the constant exists but is not displayed; the report
                    carries the attained ratio
report_only         numbers are emitted for inspection, no pass criterion

Profile-free entries
--------------------
HY_FAIL_PROBE builds its own family of mode sums; only the harmonic degree
of the given profile is used, and the suite runs it once per degree.

Direction
---------
Reports are always oriented so that lhs is the side the inequality bounds
from above.  'upper' entries read lhs <= C rhs in their natural form;
'lower' entries read big >= c small and are reported as small <= big / c.

Evaluators are attached in harness/checks.py with @register(check_id).
"""

from dataclasses import dataclass, field

from core.exceptions import DomainError

EXACT = 'exact_constant'
EMPIRICAL = 'empirical_constant'
REPORT_ONLY = 'report_only'
MODES = (EXACT, EMPIRICAL, REPORT_ONLY)


@dataclass(frozen=True)
class InequalityDef:
    id: str
    constant_mode: str
    anchor: str
    title: str
    direction: str = 'upper'
    defaults: dict = field(default_factory=dict)
    profile_free: bool = False

    def __str__(self):
        return f'{self.id} ({self.anchor})'


def _entry(check_id, mode, anchor, title, direction='upper', profile_free=False, **defaults):
    return check_id, InequalityDef(check_id, mode, anchor, title, direction, defaults, profile_free)


CATALOG = dict([
    _entry('HY',            EXACT,       'prop.HY',                 'Hausdorff–Young', p=1.5),
    _entry('HY_PALEY',      EMPIRICAL,   'cor.HY-Lorentz',          'Paley extension into L^(p\',p)', p=1.5),
    _entry('HL_WEIGHTED',   EMPIRICAL,   'prop.HL-weighted',        'Hardy–Littlewood, weight on the transform', p=1.5),
    _entry('HL_YOUNG',      EMPIRICAL,   'thm.HY-qlarge',           'Hardy–Littlewood with Young function |x|^D', q=3.0),
    _entry('HL_DUAL',       EMPIRICAL,   'prop.Dunkl-RS',           'Hardy–Littlewood, dual form', p=1.25, q=1.5),
    _entry('PITT',          EMPIRICAL,   'cor.pitt',                'Pitt', p=2.0, q=2.0),
    _entry('WEIGHTED_GEN',  EMPIRICAL,   'thm.weighted',            'weighted inequality, power weights', p=1.5, q=3.0),
    _entry('HPW_SHARP',     EXACT,       'thm.Heisenberg-BSKO',     'Heisenberg–Pauli–Weyl, sharp', 'lower'),
    _entry('HPW_AB',        EXACT,       'prop.HPW',                'Heisenberg–Pauli–Weyl, powers α, β ≥ 1', 'lower',
           alpha=2.0, beta=1.0),
    _entry('HPW_FRAC',      EMPIRICAL,   'thm.HPW-frac',            'Heisenberg–Pauli–Weyl, powers α, β < 1', 'lower',
           alpha=0.5, beta=0.5),
    _entry('HPW_LP',        EMPIRICAL,   'thm.HPW-Lp',              'Heisenberg–Pauli–Weyl in L^p', p=1.5, alpha=0.25, beta=1.0),
    _entry('GAUSS_DAMP',    EXACT,       'lemma-tech',              'damped transform decay', p=1.5, alpha=0.25, t=1.0),
    _entry('NASH',          EXACT,       'lemma.nash',              'Nash type', s=1.0),
    _entry('CLARKSON',      EXACT,       'lemma.clarkson',          'Clarkson type', s=1.0),
    _entry('L1L2',          EMPIRICAL,   'prop.L1L2',               'mixed L^1–L^2 uncertainty', 'lower', s=1.0),
    _entry('ENTROPY',       EXACT,       'thm.Shannon',             'entropic uncertainty', 'lower'),
    _entry('ENTROPY_GEN',   EXACT,       'ineq.general',            'entropic uncertainty, unnormalized', 'lower'),
    _entry('ENTROPY_VAR',   EXACT,       'eqn.entropy-variance',    'entropy against generalized variance', c=1.0),
    _entry('GLOBAL_UP',     EMPIRICAL,   'cor.global-up',           'global uncertainty principle', 'lower', s=1.0, beta=1.0),
    _entry('DS',            EXACT,       'thm.donoho-stark',        'Donoho–Stark', 'lower', S=2.0, V=2.0),
    _entry('MS',            REPORT_ONLY, 'prop.matolcsi-szucs',     'support measures', 'lower'),
    _entry('BAB',           EMPIRICAL,   'thm.BAB',                 'Benedicks–Amrein–Berthier', S=1.0, V=1.0),
    _entry('HY_FAIL_PROBE', REPORT_ONLY, 'prop.no-HY',              'Hausdorff–Young for p > 2',
           profile_free=True, p=3.0, n_max=6),
    _entry('ENTROPY_HPW',   EXACT,       'ineq.entropy2',           'uncertainty from entropy', 'lower', c=1.0, d=1.0),
    _entry('JT',            EMPIRICAL,   'thm.B',                   'rearranged transform against rearranged primitive', q=2.0),
    _entry('HARDY_WEIGHTED', EXACT,      'thm.A',                   'weighted Hardy inequality', p=2.0, q=2.0,
           u_power=-2.0, v_power=0.0),
    _entry('HL_REARRANGE',  EXACT,       'lemma.HL-rearrangement',  'Hardy–Littlewood rearrangement'),
])

_EVALUATORS = {}


def normalize_id(check_id):
    """'hpw-sharp' -> 'HPW_SHARP'."""
    return str(check_id).strip().upper().replace('-', '_')


def get(check_id):
    key = normalize_id(check_id)
    try:
        return CATALOG[key]
    except KeyError:
        raise DomainError(f'unknown check {check_id!r}; expected one of {", ".join(CATALOG)}') from None


def register(check_id):
    """Attach the evaluator of a catalog entry."""
    definition = get(check_id)

    def decorator(func):
        if definition.id in _EVALUATORS:
            raise ValueError(f'{definition.id} already has an evaluator')
        _EVALUATORS[definition.id] = func
        return func
    return decorator


def evaluator(check_id):
    definition = get(check_id)
    from . import checks  # noqa: F401  registers the evaluators
    return _EVALUATORS[definition.id]


def ordered(check_ids):
    """Catalog order of the given ids, duplicates dropped."""
    wanted = {get(c).id for c in check_ids}
    return [key for key in CATALOG if key in wanted]
