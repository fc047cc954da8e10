"""Exception types shared across the package."""


class CliqueMcError(Exception):
    """Base class for all package errors."""


class NotDecomposableError(CliqueMcError):
    """Operation requires a decomposable (chordal) graph."""


class InvalidFlipError(CliqueMcError):
    """Edge-flip action inconsistent with the current adjacency."""


class TooLargeError(CliqueMcError):
    """Input exceeds a hard size cap for an exhaustive operation."""


class InvalidSpecError(CliqueMcError):
    """Prior family parameters violate their constraints."""


class SizeMismatchError(CliqueMcError):
    """Two graphs expected on the same vertex set differ in size."""


class InvalidParamsError(CliqueMcError):
    """Numeric parameters outside their valid domain."""


class EmptyDataError(CliqueMcError):
    """Data matrix has no rows."""


class NonFiniteError(CliqueMcError):
    """Data contains NaN or infinite entries."""


class DomainError(CliqueMcError):
    """Argument outside a special function's domain."""


class SingularScaleError(CliqueMcError):
    """A matrix that must be positive definite is numerically singular."""


class NotPositiveDefiniteError(CliqueMcError):
    """Covariance argument is not positive definite."""


class DimensionMismatchError(CliqueMcError):
    """Train/test data disagree on variable count."""


class NoSamplesError(CliqueMcError):
    """Model averaging requires at least one kept sample."""


class ConfigError(CliqueMcError):
    """Experiment configuration is invalid. CLI exit code 2."""


class DataError(CliqueMcError):
    """Data file is missing or malformed. CLI exit code 3."""


class NoFitError(ConfigError):
    """Prediction requested before a completed fit summary exists."""
