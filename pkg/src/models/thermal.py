"""
Thermal models.

ThermalModel binds a Spectrum to a temperature (k_B = 1, dimensionless
energies); FisherReport gathers every thermometric figure at one temperature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.models.spectrum import Spectrum


# CSV schema for one FisherReport row
FISHER_REPORT_SCHEMA = [
    'T',
    'qfi',
    'fi',
    'qfi_low',
    'qfi_high',
    'fi_high',
    'bound_lo',
    'bound_hi',
    'ratio_limit',
    'coherence',
]


@dataclass(frozen=True, eq=False)
class ThermalModel:
    """
    Gibbs state of a graph walker at temperature T.

    Attributes:
        spectrum: Laplacian spectrum (the Hamiltonian)
        temperature: T > 0
        partition_function: Z = sum_n g_n exp(-E_n/T)
        populations: Per-level weights g_n exp(-E_n/T) / Z
    """
    spectrum: Spectrum
    temperature: float
    partition_function: float
    populations: np.ndarray

    def __post_init__(self):
        if not np.isfinite(self.temperature) or self.temperature <= 0:
            raise ValueError(f"Temperature must be positive, got {self.temperature}")
        if self.partition_function < 1.0 - 1e-12:
            raise ValueError(f"Partition function must be >= 1, got {self.partition_function}")
        populations = np.array(self.populations, dtype=float, copy=True)
        if populations.shape != (len(self.spectrum.levels),):
            raise ValueError("One population per level is required")
        if abs(populations.sum() - 1.0) > 1e-12:
            raise ValueError(f"Populations must sum to 1, got {populations.sum()!r}")
        populations.setflags(write=False)
        object.__setattr__(self, 'populations', populations)

    @property
    def state_weights(self) -> np.ndarray:
        """exp(-E_k/T)/Z for every eigenstate k."""
        degeneracies = self.spectrum.degeneracies
        return (self.populations / degeneracies)[self.spectrum.level_of]

    @property
    def order(self) -> int:
        return self.spectrum.order


@dataclass(frozen=True)
class FisherReport:
    """
    Thermometric figures at one temperature.

    qfi_high_bounds is the (lower, upper) pair bounding qfi_high.
    """
    temperature: float
    qfi: float
    fi_position: float
    qfi_low: float
    qfi_high: float
    fi_high: float
    qfi_high_bounds: Tuple[float, float]
    ratio_limit: float
    coherence_l1_normalized: float

    def __post_init__(self):
        if self.qfi < 0 or self.fi_position < 0:
            raise ValueError("Fisher informations must be non-negative")
        slack = 1e-10 + 1e-9 * self.qfi
        if self.fi_position > self.qfi + slack:
            raise ValueError(
                f"FI {self.fi_position!r} exceeds QFI {self.qfi!r} at T={self.temperature}"
            )
        lower, upper = self.qfi_high_bounds
        tol = 1e-12 * max(1.0, abs(upper))
        if not lower - tol <= self.qfi_high <= upper + tol:
            raise ValueError("qfi_high lies outside its degree bounds")

    @property
    def ratio(self) -> float:
        """F_c/F_q at this temperature (0 when the QFI vanishes)."""
        return self.fi_position / self.qfi if self.qfi > 0 else 0.0

    def to_row(self) -> dict:
        """Row keyed by FISHER_REPORT_SCHEMA."""
        lower, upper = self.qfi_high_bounds
        return {
            'T': self.temperature,
            'qfi': self.qfi,
            'fi': self.fi_position,
            'qfi_low': self.qfi_low,
            'qfi_high': self.qfi_high,
            'fi_high': self.fi_high,
            'bound_lo': lower,
            'bound_hi': upper,
            'ratio_limit': self.ratio_limit,
            'coherence': self.coherence_l1_normalized,
        }

    def to_dict(self) -> dict:
        data = self.to_row()
        data['ratio'] = self.ratio
        return data
