"""
Exception hierarchy for the thermometry toolkit.

Entity validation raises plain ValueError (as the models do); the classes
below mark failures that callers are expected to tell apart.
"""


class ThermographError(Exception):
    """Base class for toolkit errors."""


class DescriptorError(ThermographError, ValueError):
    """Graph descriptor or edge-list text could not be parsed."""


class UnsupportedFamilyError(ThermographError, ValueError):
    """No closed-form spectrum is known for the graph family."""


class SpectrumError(ThermographError):
    """Eigendecomposition failed or the spectrum lacks required data."""


class EstimationError(ThermographError, ValueError):
    """Invalid estimation input (bracket, sample)."""
