"""Exception types raised across the package."""


class TrustNetError(Exception):
    """Base class for all package errors."""


class DomainError(TrustNetError, ValueError):
    """A value lies outside the carrier of the structure it was given to."""


class ConfigurationError(TrustNetError, ValueError):
    """Inputs that are individually valid but inconsistent with each other."""


class StuckStateError(TrustNetError, RuntimeError):
    """The trust process has no selectable shop."""


class InsufficientTailError(TrustNetError, ValueError):
    """Too few observations above ``x_min`` to fit a tail model."""


class DegenerateFitError(TrustNetError, ValueError):
    """The tail sample carries no information about shape (e.g. constant data)."""


class ParseError(TrustNetError, ValueError):
    """Malformed network, config, or CSV input."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
