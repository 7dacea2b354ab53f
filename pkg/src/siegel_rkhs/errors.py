"""Exception hierarchy shared by every module."""


class SiegelError(Exception):
    pass


class DomainError(SiegelError, ValueError):
    """A point lies outside the domain an operation requires."""


class DimensionMismatch(SiegelError, ValueError):
    pass


class PositivityViolation(SiegelError, ValueError):
    """Re base(p, q) <= 0 on a pair that was supposed to be interior."""


class ParameterError(SiegelError, ValueError):
    pass


class ExactnessError(SiegelError, ValueError):
    """An exact computation was requested on inexact data."""


class IllConditioned(SiegelError, ArithmeticError):
    pass


class BudgetExceeded(SiegelError, RuntimeError):
    pass


class NotRepresentable(SiegelError, ValueError):
    """A function is outside the classes a norm routine can handle."""


class InvariantViolation(SiegelError, AssertionError):
    """A brute-force cross-check disagreed with the closed-form answer."""
