"""Exception types shared across the package."""


class UavliftError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(UavliftError, ValueError):
    """A value violates a documented invariant or precondition."""


class ParseError(UavliftError, ValueError):
    """A scenario or report file is malformed; the message names the field."""


class ConfigurationError(UavliftError, ValueError):
    """Parameters are individually valid but jointly unusable."""


class EmptyRegionError(UavliftError, RuntimeError):
    """An operation required a non-empty feasible region."""


class NumericalError(UavliftError, RuntimeError):
    """A computation produced a NaN or infinity."""
