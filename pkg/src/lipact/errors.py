"""Exception types shared across the package."""


class LipactError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(LipactError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(LipactError, ValueError):
    """A numeric input or parameter is outside the function's domain."""


class ShapeError(LipactError, ValueError):
    """Array dimensions do not match."""


class DataError(LipactError, ValueError):
    """A dataset violates a structural requirement."""


class IngestionError(DataError):
    """A data file is missing, truncated, or malformed."""
