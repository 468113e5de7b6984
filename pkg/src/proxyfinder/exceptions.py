"""Exception hierarchy shared across the package."""


class ProxyFinderError(Exception):
    """Base class for all errors raised by proxyfinder."""


class ValidationError(ProxyFinderError, ValueError):
    """An object failed its construction-time invariants."""


class SchemaError(ValidationError):
    """An attribute name or value label is not part of the schema."""


class CatalogError(ValidationError, KeyError):
    """Unknown scenario name."""

    def __str__(self):
        return Exception.__str__(self)


class UnsupportedExactError(ProxyFinderError):
    """Exact enumeration was requested for a distribution that cannot provide it."""


class SizeError(ProxyFinderError):
    """A problem exceeds a configured size cap."""


class EstimationError(ProxyFinderError):
    """An uncertainty value is undefined for the given inputs."""
