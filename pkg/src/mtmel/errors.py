"""Typed errors shared across the package.

Plain ``ValueError`` is used for bad arguments (out-of-range parameters,
mismatched dimensions); the classes below mark problems with the *content*
of input data or files, which the CLI maps to their own exit codes.
"""


class MtmelError(Exception):
    """Base class for data and file errors raised by this package."""


class AudioFormatError(MtmelError):
    """WAV input violates the expected format (rate, channels, encoding)."""


class SignalTooShortError(MtmelError):
    """Signal has fewer samples than the operation needs."""


class SilentSignalError(MtmelError):
    """Operation is undefined for an all-zero signal."""


class FeatureFileError(MtmelError):
    """Feature file is corrupt or not in the expected binary format."""
