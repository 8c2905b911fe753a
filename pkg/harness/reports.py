"""
CheckReport: one evaluated inequality, serialized with sorted keys so that
identical inputs give identical bytes.
"""

import json
import math
from dataclasses import dataclass, field

from .catalog import EMPIRICAL, EXACT, REPORT_ONLY


def _number(x):
    """Finite floats as they are; non-finite ones as the strings 'inf', '-inf', 'nan'."""
    x = float(x)
    if math.isfinite(x):
        return x
    if math.isnan(x):
        return 'nan'
    return 'inf' if x > 0 else '-inf'


@dataclass
class CheckReport:
    check_id: str
    anchor: str
    params: dict
    profile: str
    lhs: float
    rhs: float
    mode: str
    tolerance: float
    exponents: dict = field(default_factory=dict)
    notes: str = ''

    @property
    def ratio(self):
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs

    @property
    def passed(self):
        if self.mode == EXACT:
            # lhs <= rhs (1 + tol) for rhs >= 0; the slack keeps its sign for rhs < 0
            return bool(self.lhs <= self.rhs + self.tolerance * abs(self.rhs))
        if self.mode == EMPIRICAL:
            return math.isfinite(self.ratio)
        return self.mode == REPORT_ONLY

    def to_dict(self):
        return {
            'check': self.check_id,
            'anchor': self.anchor,
            'params': dict(self.params),
            'exponents': {key: _number(value) for key, value in self.exponents.items()},
            'lhs': _number(self.lhs),
            'rhs': _number(self.rhs),
            'ratio': _number(self.ratio),
            'mode': self.mode,
            'pass': self.passed,
            'tolerance': self.tolerance,
            'notes': self.notes,
            'profile': self.profile,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    def summary_line(self):
        verdict = 'PASS' if self.passed else 'FAIL'
        if self.mode != EXACT:
            verdict = 'INFO' if self.mode == REPORT_ONLY else ('EMP' if self.passed else 'FAIL')
        p = self.params
        return (f'{verdict:<4} {self.check_id:<14} (N={p["N"]}, k={p["k"]:g}, a={p["a"]:g}) '
                f'{self.profile:<28} lhs={self.lhs:.6g} rhs={self.rhs:.6g}')


def write_reports(reports, stream):
    """One JSON object per line."""
    for report in reports:
        stream.write(report.to_json() + '\n')
