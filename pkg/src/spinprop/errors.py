"""Exception hierarchy shared by every module of the package."""


class SpinPropError(Exception):
    """Base class for all errors raised by spinprop."""


class DomainError(SpinPropError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PoleError(DomainError):
    """Evaluation at a pole (e.g. a non-positive integer gamma argument)."""


class NumericalError(SpinPropError, ArithmeticError):
    """A numerical procedure failed or lost the accuracy it promised."""


class PrecisionError(NumericalError):
    """A series or iteration did not converge.

    ``estimate`` carries the last partial result so callers can decide
    whether it is still usable.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class StepUnderflowError(NumericalError):
    """The adaptive integrator could not take a step above round-off."""

    def __init__(self, message, last_time):
        super().__init__(message)
        self.last_time = last_time


class NormalizationDriftError(NumericalError):
    """Euler parameters drifted away from det R = 1."""

    def __init__(self, message, delta):
        super().__init__(message)
        self.delta = delta


class ConfigError(SpinPropError, ValueError):
    """Invalid run configuration (CLI)."""
