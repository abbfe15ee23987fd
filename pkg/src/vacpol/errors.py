"""Exception types shared by every module of the package."""


class VacpolError(Exception):
    """Base class for all errors raised by vacpol."""


class DomainError(VacpolError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class RangeError(DomainError):
    """Arguments are valid but outside the declared working range."""


class ConvergenceError(VacpolError, ArithmeticError):
    """An iterative method (series, quadrature, ODE, root search) failed.

    ``achieved`` carries the best error estimate reached, when one exists.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class OverflowGuardError(VacpolError, OverflowError):
    """Evaluation would overflow double precision."""
