# lapnet/utils/errors.py
"""
Exception hierarchy shared by the library and the command line.

Validation problems derive from ValueError and numerical failures derive from
ArithmeticError, so callers that only know the builtin types still catch them.
"""


class LapnetError(Exception):
    """Base class for every error raised by lapnet."""


class ModelValidationError(LapnetError, ValueError):
    """An input violates a dimension, format or value invariant."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class GraphFormatError(ModelValidationError):
    """An edge list or graph shorthand could not be parsed."""

    def __init__(self, message, line=None, field=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, field=field)
        self.line = line


class NumericalFailure(LapnetError, ArithmeticError):
    """A numerical routine failed or its result could not be trusted."""


class UnstableError(NumericalFailure):
    """A matrix that must be Hurwitz is not."""

    def __init__(self, message, lam=None, condition=None):
        super().__init__(message)
        self.lam = lam
        self.condition = condition


class NotStabilizableError(NumericalFailure):
    """Stabilizability (or, for dual problems, detectability) is violated."""


class ConvexityError(NumericalFailure):
    pass


class FitConditioningError(NumericalFailure):
    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class QuadratureError(NumericalFailure):
    pass


class SimulationDivergence(NumericalFailure):
    pass
