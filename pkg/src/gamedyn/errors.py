"""Exception types raised across the package.

Distinct from the built-in ``ValueError``/``RuntimeError`` so that callers
(and the CLI) can tell domain failures apart from programming errors.
"""


class GamedynError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(GamedynError):
    """Shapes are inconsistent (non-square matrix, mismatched lengths)."""


class DomainError(GamedynError):
    """An argument is outside the mathematically valid range."""


class SingularMatrixError(GamedynError):
    """A linear solve hit a singular or numerically singular matrix."""


class NumericalError(GamedynError):
    """An iterative numerical routine failed to converge."""


class ConfigurationError(GamedynError):
    """A solver configuration is invalid for the requested method."""


class StepSizeError(DomainError):
    """A step size violates the validity cap of the rate being used."""


class InsufficientDataError(GamedynError):
    """A trajectory is too short for the requested estimate."""


class DegenerateFieldError(GamedynError):
    """The vector field carries no usable signal (e.g. zero spectrum)."""
