"""
Exception hierarchy shared by every app.

Commands map these onto exit codes:

    DomainError (and subclasses)   -> 2
    ConstraintViolation            -> 3
    QuadratureError, CalibrationError, DivergenceError -> 4 (fka_transform)
"""


class FkaError(Exception):
    """Base class for every error raised by the library."""


class DomainError(FkaError, ValueError):
    """An argument lies outside the domain of an operation."""


class SpecialFunctionDomainError(DomainError):
    pass


class InadmissibleParameters(DomainError):
    """The (N, k, a) triple or a check option violates a named condition."""

    def __init__(self, condition, detail=''):
        self.condition = condition
        message = f'violated condition {condition}'
        if detail:
            message = f'{message}: {detail}'
        super().__init__(message)


class UnsupportedDeformation(DomainError):
    """The operation is only defined for specific values of a."""


class ConstraintViolation(FkaError):
    """Exponents or options violate a hypothesis of an inequality."""

    def __init__(self, condition, detail=''):
        self.condition = condition
        message = f'constraint {condition} violated'
        if detail:
            message = f'{message}: {detail}'
        super().__init__(message)


class DivergenceError(FkaError, ArithmeticError):
    """An integral, supremum or norm is infinite."""


class EntropyUndefined(DivergenceError):
    """Positive or negative part of an entropy integral diverges."""


class QuadratureError(FkaError):
    pass


class TailToleranceExceeded(QuadratureError):
    pass


class OscillationBudgetExceeded(QuadratureError):
    pass


class CalibrationError(FkaError):
    pass


class FamilyTooSmall(FkaError, ValueError):
    pass
