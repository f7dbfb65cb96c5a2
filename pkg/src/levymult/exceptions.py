"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class UnsupportedMeasureError(InvalidInputError):
    """The measure is outside the supported class for the operation."""


class SingularPointError(InvalidInputError):
    """Evaluation requested exactly at a singular point."""


class ConvergenceError(RuntimeError):
    """An adaptive computation could not reach the requested tolerance.

    Carries the best available estimate and its error bound.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound
