"""Exception hierarchy shared by every laboratory module."""


class ZetaLabError(Exception):
    """Base class for all errors raised by zetalab."""


class DomainError(ZetaLabError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at a pole (or a point where a factor is singular)."""


class BranchCutError(DomainError):
    """Argument lies on a branch cut of a multivalued function."""


class BudgetExhausted(ZetaLabError, ArithmeticError):
    """The precision budget could not be met within ``max_terms``."""


class ConvergenceError(ZetaLabError, ArithmeticError):
    """An iterative method did not converge."""


class ZeroOfZetaError(ZetaLabError, ArithmeticError):
    """The logarithmic derivative was requested too close to a zero of zeta."""


class ZeroTableError(ZetaLabError, ValueError):
    """A zero table file could not be parsed or violates ordering."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ArgumentTrackingError(ZetaLabError, ArithmeticError):
    """Continuous argument tracking met a jump it cannot resolve."""
