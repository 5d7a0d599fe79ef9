"""Exception hierarchy shared by all modules."""


class InvalidParameterError(ValueError):
    """A numeric argument violates its documented constraint."""


class StepTooLargeError(InvalidParameterError):
    """Time step does not satisfy ``delta < 1 / (2 * beta)``."""


class DimensionError(ValueError):
    """Vectors or matrices of incompatible shape."""


class UnconvergedError(RuntimeError):
    """Iteration stopped before reaching the requested tolerance.

    ``best`` holds the last computed estimate (an ``AttractorPoint``) so callers
    can still inspect it together with its certified radius.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ConfigError(ValueError):
    """Malformed or semantically invalid experiment configuration."""
