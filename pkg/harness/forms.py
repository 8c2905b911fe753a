"""
Validation of command flags and suite configs.

The commands bind their parsed options to these forms; `clean()` turns the
raw numbers into DeformationParams and RadialProfile objects and reports
inadmissible input as ValidationError carrying the violated condition.
"""

import numpy as np
from django import forms
from django.core.exceptions import ValidationError

from core.exceptions import DomainError, InadmissibleParameters
from core.geometry import DeformationParams
from core.profiles import parse_profile
from transform.engine import PATHS
from .catalog import get

EXPONENT_FIELDS = ('p', 'q', 'alpha', 'beta', 's', 'l', 't', 'c', 'd', 'S', 'V', 'n_max', 'u_power', 'v_power')


def build_params(N, k, a):
    try:
        return DeformationParams(int(N), float(k), float(a))
    except InadmissibleParameters as exc:
        raise ValidationError(str(exc), code=exc.condition) from exc


def error_text(form):
    """Form errors as one line per message, field names first."""
    lines = []
    for field, errors in form.errors.items():
        prefix = '' if field == '__all__' else f'{field}: '
        lines.extend(f'{prefix}{message}' for message in errors)
    return '\n'.join(lines)


class ParamsForm(forms.Form):
    N       = forms.IntegerField(min_value=1)
    k       = forms.FloatField(min_value=0, required=False)
    a       = forms.FloatField()
    profile = forms.CharField(max_length=200)
    m       = forms.IntegerField(min_value=0, required=False)

    def clean(self):
        cleaned = super().clean()
        if self.errors:
            return cleaned
        k = cleaned.get('k') or 0.0
        m = cleaned.get('m') or 0
        try:
            cleaned['params'] = build_params(cleaned['N'], k, cleaned['a'])
        except ValidationError as exc:
            self.add_error(None, exc)
            return cleaned
        try:
            cleaned['radial_profile'] = parse_profile(cleaned['profile'], m)
        except DomainError as exc:
            self.add_error('profile', str(exc))
        return cleaned


class TransformForm(ParamsForm):
    grid = forms.CharField(required=False, help_text='lo:hi:n, e.g. 0:8:161')
    path = forms.ChoiceField(choices=[(p, p) for p in PATHS], required=False)
    out  = forms.CharField(required=False)

    def clean_grid(self):
        text = (self.cleaned_data.get('grid') or '').strip()
        if not text:
            return None
        parts = text.split(':')
        if len(parts) != 3:
            raise ValidationError('grid must read lo:hi:n')
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ValidationError('grid must read lo:hi:n with numeric lo, hi and integer n') from None
        if not (0 <= lo < hi and n >= 2):
            raise ValidationError('grid needs 0 <= lo < hi and n >= 2')
        return np.linspace(lo, hi, n)

    def clean_path(self):
        return self.cleaned_data.get('path') or 'hankel'


class CheckForm(ParamsForm):
    check     = forms.CharField(max_length=30)
    tolerance = forms.FloatField(min_value=0, required=False)
    partner   = forms.CharField(max_length=200, required=False)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        for name in EXPONENT_FIELDS:
            self.fields[name] = forms.FloatField(required=False)

    def clean_check(self):
        try:
            return get(self.cleaned_data['check']).id
        except DomainError as exc:
            raise ValidationError(str(exc)) from exc

    def clean_partner(self):
        text = (self.cleaned_data.get('partner') or '').strip()
        if text:
            try:
                parse_profile(text)
            except DomainError as exc:
                raise ValidationError(str(exc)) from exc
        return text

    def exponents(self):
        return {name: self.cleaned_data[name] for name in EXPONENT_FIELDS if self.cleaned_data.get(name) is not None}


class SuiteConfigForm(forms.Form):
    """
    {"params": [{"N": 1, "k": 0, "a": 2}, ...],
     "profiles": ["gaussian:t=0.5", {"profile": "mode:ell=1", "m": 1}, ...],
     "checks": ["HY", {"id": "PITT", "exponents": {"p": [1.5, 2]}}, ...],
     "tolerance": 1e-5, "output": "reports.jsonl", "seed": 0}
    """
    params    = forms.JSONField(required=False)
    profiles  = forms.JSONField(required=False)
    checks    = forms.JSONField(required=False)
    tolerance = forms.FloatField(min_value=0, required=False)
    output    = forms.CharField(required=False)
    seed      = forms.IntegerField(required=False)

    def clean_params(self):
        entries = self.cleaned_data.get('params') or []
        if not isinstance(entries, list):
            raise ValidationError('params must be a list of {"N", "k", "a"} objects')
        triples = []
        for entry in entries:
            if not isinstance(entry, dict) or not {'N', 'a'} <= set(entry):
                raise ValidationError(f'params entry {entry!r} needs N and a')
            triples.append(build_params(entry['N'], entry.get('k', 0.0), entry['a']))
        return triples

    def clean_profiles(self):
        entries = self.cleaned_data.get('profiles') or []
        if not isinstance(entries, list):
            raise ValidationError('profiles must be a list')
        specs = []
        for entry in entries:
            if isinstance(entry, str):
                specs.append((entry, 0))
            elif isinstance(entry, dict) and 'profile' in entry:
                specs.append((entry['profile'], int(entry.get('m', 0))))
            else:
                raise ValidationError(f'profile entry {entry!r} must be a string or {{"profile", "m"}}')
        for text, m in specs:
            try:
                parse_profile(text, m)
            except DomainError as exc:
                raise ValidationError(str(exc)) from exc
        return specs

    def clean_checks(self):
        entries = self.cleaned_data.get('checks') or []
        if not isinstance(entries, list):
            raise ValidationError('checks must be a list')
        jobs = []
        for entry in entries:
            if isinstance(entry, str):
                entry = {'id': entry}
            if not isinstance(entry, dict) or 'id' not in entry:
                raise ValidationError(f'check entry {entry!r} needs an id')
            try:
                check_id = get(entry['id']).id
            except DomainError as exc:
                raise ValidationError(str(exc)) from exc
            grid = {}
            for name, values in (entry.get('exponents') or {}).items():
                values = values if isinstance(values, list) else [values]
                if not values or not all(isinstance(v, (int, float)) for v in values):
                    raise ValidationError(f'{check_id}: exponent {name} must be a number or a list of numbers')
                grid[name] = [float(v) for v in values]
            jobs.append((check_id, grid, dict(entry.get('options') or {})))
        return jobs

    def clean(self):
        cleaned = super().clean()
        if cleaned.get('checks') and not cleaned.get('params'):
            self.add_error('params', 'a suite with checks needs at least one (N, k, a) triple')
        if cleaned.get('checks') and not cleaned.get('profiles'):
            self.add_error('profiles', 'a suite with checks needs at least one profile')
        if cleaned.get('seed') is None:
            cleaned['seed'] = 0
        return cleaned
