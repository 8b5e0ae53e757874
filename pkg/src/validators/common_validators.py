"""
Common numeric validators shared by the services.
"""

from typing import Tuple

import numpy as np


def require_positive_temperature(temperature: float) -> float:
    """
    Return the temperature as float.

    Raises:
        ValueError: If it is not a finite positive number
    """
    try:
        value = float(temperature)
    except (TypeError, ValueError):
        raise ValueError(f"Temperature must be a number, got {temperature!r}")
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"Temperature must be positive, got {temperature!r}")
    return value


def require_temperature_range(t_lo: float, t_hi: float) -> Tuple[float, float]:
    """Validate 0 < t_lo < t_hi."""
    lo = require_positive_temperature(t_lo)
    hi = require_positive_temperature(t_hi)
    if not lo < hi:
        raise ValueError(f"Temperature range must satisfy T_lo < T_hi, got ({lo}, {hi})")
    return lo, hi


def require_int_at_least(value: int, minimum: int, name: str) -> int:
    """Integer check with a lower bound."""
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)
