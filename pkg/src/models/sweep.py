"""
Sweep and approximation-report models.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from src.models.thermal import FISHER_REPORT_SCHEMA, FisherReport


@dataclass(frozen=True, eq=False)
class SweepResult:
    """
    Fisher reports over a temperature grid plus the refined QFI peak.

    Attributes:
        graph: Graph descriptor
        temperatures: Strictly increasing grid
        reports: One FisherReport per grid point, in grid order
        peak: (T_max, qfi_max) from the refinement
    """
    graph: str
    temperatures: np.ndarray
    reports: Tuple[FisherReport, ...]
    peak: Tuple[float, float]

    def __post_init__(self):
        grid = np.asarray(self.temperatures, dtype=float).copy()
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("A sweep needs at least two temperatures")
        if not np.all(np.diff(grid) > 0):
            raise ValueError("Temperature grid must be strictly increasing")
        if len(self.reports) != grid.size:
            raise ValueError("One report per grid point is required")
        t_max, qfi_max = self.peak
        if not grid[0] <= t_max <= grid[-1]:
            raise ValueError(f"Peak T={t_max} lies outside the grid hull")
        best = max(report.qfi for report in self.reports)
        if qfi_max < best:
            raise ValueError("Refined peak is below the best grid sample")
        grid.setflags(write=False)
        object.__setattr__(self, 'temperatures', grid)
        object.__setattr__(self, 'reports', tuple(self.reports))

    @property
    def qfi(self) -> np.ndarray:
        return np.array([r.qfi for r in self.reports])

    @property
    def fi(self) -> np.ndarray:
        return np.array([r.fi_position for r in self.reports])

    @property
    def ratio_curve(self) -> np.ndarray:
        """F_c/F_q along the grid."""
        return np.array([r.ratio for r in self.reports])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_row() for r in self.reports], columns=FISHER_REPORT_SCHEMA)

    def to_dict(self) -> dict:
        t_max, qfi_max = self.peak
        return {
            'graph': self.graph,
            'peak': {'T_max': t_max, 'qfi_max': qfi_max},
            'reports': [r.to_dict() for r in self.reports],
        }


@dataclass(frozen=True, eq=False)
class ApproximationReport:
    """Relative errors of the low/high temperature QFI approximations."""
    graph: str
    table: pd.DataFrame
    peak_temperature: float
    low_error_at_peak: float
    high_error_at_peak: float
    max_temperature_error_high: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            'graph': self.graph,
            'peak_T': self.peak_temperature,
            'low_error_at_peak': self.low_error_at_peak,
            'high_error_at_peak': self.high_error_at_peak,
            'rows': self.table.to_dict(orient='records'),
        }


@dataclass(frozen=True, eq=False)
class CoherenceCurve:
    """Normalized l1 coherence and QFI over a grid, with the 1/e crossing."""
    graph: str
    temperatures: np.ndarray
    coherence: np.ndarray
    qfi: np.ndarray
    crossing_temperature: Optional[float]
    peak: Tuple[float, float]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'T': self.temperatures,
            'coherence': self.coherence,
            'qfi': self.qfi,
        })
