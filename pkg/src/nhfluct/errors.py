"""Exception types raised across the package."""


class NHFluctError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(NHFluctError, ValueError):
    pass


class InvalidSplitError(NHFluctError, ValueError):
    pass


class DegenerateTruncationError(NHFluctError, ValueError):
    pass


class GuardViolationError(NHFluctError):
    """Norm estimate exceeded the guard level kappa (the complement of the guard event)."""

    def __init__(self, message, norm=None, kappa=None):
        super().__init__(message)
        self.norm = norm
        self.kappa = kappa


class SingularResolventError(NHFluctError, ArithmeticError):
    pass


class SingularNodeError(SingularResolventError):
    """A contour node landed on (or numerically at) the spectrum."""


class ConvergenceError(NHFluctError, ArithmeticError):
    """Iteration cap hit; ``last`` carries the final iterate."""

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class PoleError(NHFluctError, ZeroDivisionError):
    pass


class EnumerationTooLargeError(NHFluctError, ValueError):
    pass


class SpecViolationError(NHFluctError, ValueError):
    pass


class DegenerateSampleError(NHFluctError, ValueError):
    pass


class DegenerateDiagnosticError(NHFluctError, ValueError):
    pass


class InsufficientDataError(NHFluctError, ValueError):
    pass


class EmptyAggregateError(NHFluctError):
    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class ConfigError(NHFluctError, ValueError):
    """Malformed experiment configuration; ``field`` names the offending key."""

    def __init__(self, message, field=None, line=None):
        super().__init__(message)
        self.field = field
        self.line = line
