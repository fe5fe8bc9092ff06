"""Exception types shared across the package.

Each maps to one CLI exit code, so library code should raise the most
specific one that applies.
"""


class BsrnnLiteError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(BsrnnLiteError):
    """Invalid model, band, resampling, pruning, or analysis configuration."""


class AudioFormatError(BsrnnLiteError):
    """Input audio violates a format precondition (channels, dtype, range)."""


class WeightsFormatError(BsrnnLiteError):
    """Weights file or tensor set does not match the expected layout."""
