"""Exception hierarchy shared across the pipeline.

Exit-code mapping used by the CLI: ConfigError -> 1, DataError -> 2,
NumericalError -> 3.
"""


class SentpipeError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(SentpipeError):
    """Invalid configuration, usage, or unsupported option."""


class DataError(SentpipeError):
    """Malformed, inconsistent, or missing input data."""


class NumericalError(SentpipeError):
    """Non-finite values or other numerical failure during computation."""
