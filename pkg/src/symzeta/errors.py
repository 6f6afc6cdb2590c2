"""Exception hierarchy shared across the package.

Accuracy-type failures carry the best available estimate so callers (and the
CLI) can still report a document with diagnostics.
"""


class SymzetaError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(SymzetaError):
    """Input vector dimension does not match the symbol's dimension."""


class DomainError(SymzetaError):
    """Evaluation requested outside the valid domain of an operation."""


class ParameterError(SymzetaError):
    """A parameter violates a documented precondition."""


class PreconditionError(SymzetaError):
    """A structural precondition (decay, order, form) is not met."""


class AccuracyError(SymzetaError):
    """Requested tolerance could not be certified.

    `estimate` holds the best value obtained, `achieved` the error bound that
    was actually reached.
    """

    def __init__(self, message, estimate=None, achieved=None):
        super().__init__(message)
        self.estimate = estimate
        self.achieved = achieved


class IllConditionedError(SymzetaError):
    """Fit matrix condition estimate exceeded the hard cap (1e12)."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class PoorFitError(SymzetaError):
    """Asymptotic-model fit residual exceeded the requested tolerance.

    Carries the best fit so callers can inspect it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NonSimplePoleError(SymzetaError):
    """A Laurent probe detected a pole of order > 1 where a simple pole was expected."""

    def __init__(self, message, fit=None):
        super().__init__(message)
        self.fit = fit
