"""Exception types shared across the package."""


class SigrouteError(Exception):
    """Base class for all package errors."""


class ConfigError(SigrouteError):
    """Base class for configuration loading errors."""


class ConfigParseError(ConfigError):
    """The config document is not well-formed structured text."""


class ConfigReferenceError(ConfigError):
    """A name reference (signal, model, plugin) does not resolve."""


class ConfigConstraintError(ConfigError):
    """A value violates a declared constraint (range, emptiness, uniqueness)."""


class SelectionError(SigrouteError):
    """Model selection failed (unknown algorithm, empty candidates, no data)."""


class UpstreamError(SigrouteError):
    """All candidate endpoints failed for a request."""

    def __init__(self, message: str, attempts: list | None = None):
        super().__init__(message)
        self.attempts = attempts or []


class AnalysisError(SigrouteError):
    """Policy analysis refused (e.g. leaf count over the enumeration bound)."""
