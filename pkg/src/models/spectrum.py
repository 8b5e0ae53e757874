"""
Spectrum model.

A Spectrum holds the ascending Laplacian eigenvalues of a connected graph,
their grouping into degenerate levels and (optionally) the orthonormal
eigenvectors in the position basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.exceptions import SpectrumError


class SpectrumSource(str, Enum):
    """How the spectrum was obtained."""
    ANALYTIC = "analytic"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Level:
    """Energy level E_n with degeneracy g_n."""
    energy: float
    degeneracy: int

    def __post_init__(self):
        if self.degeneracy < 1:
            raise ValueError(f"Degeneracy must be positive, got {self.degeneracy}")
        if self.energy < 0:
            raise ValueError(f"Laplacian energies are non-negative, got {self.energy}")

    def as_tuple(self) -> Tuple[float, int]:
        return (self.energy, self.degeneracy)


def _frozen(array: Optional[np.ndarray]) -> Optional[np.ndarray]:
    if array is None:
        return None
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Laplacian spectrum with degeneracy grouping.

    Attributes:
        eigenvalues: Ascending eigenvalues, one per state (E_0 clamped to 0)
        levels: Distinct levels in strictly increasing energy
        level_of: Level index of each flat eigenvalue index
        eigenvectors: N x N matrix, column k belongs to eigenvalue k (may be None)
        source: analytic | numeric
        group_tol: Tolerance used for the grouping
    """
    eigenvalues: np.ndarray
    levels: Tuple[Level, ...]
    level_of: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    source: SpectrumSource = SpectrumSource.NUMERIC
    group_tol: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, 'eigenvalues', _frozen(np.asarray(self.eigenvalues, dtype=float)))
        object.__setattr__(self, 'level_of', _frozen(np.asarray(self.level_of, dtype=np.int64)))
        object.__setattr__(self, 'eigenvectors', _frozen(self.eigenvectors))
        object.__setattr__(self, 'levels', tuple(self.levels))
        object.__setattr__(self, 'source', SpectrumSource(self.source))
        self._validate()

    def _validate(self) -> None:
        n = self.eigenvalues.shape[0]
        if n == 0:
            raise ValueError("Spectrum must contain at least one eigenvalue")
        if self.level_of.shape != (n,):
            raise ValueError("level_of must map every eigenvalue index")
        if sum(level.degeneracy for level in self.levels) != n:
            raise ValueError("Level degeneracies must sum to N")
        energies = [level.energy for level in self.levels]
        if any(b <= a for a, b in zip(energies, energies[1:])):
            raise ValueError("Levels must be strictly increasing in energy")
        counts = np.bincount(self.level_of, minlength=len(self.levels))
        if list(counts) != [level.degeneracy for level in self.levels]:
            raise ValueError("level_of is inconsistent with level degeneracies")
        if self.eigenvectors is not None and self.eigenvectors.shape != (n, n):
            raise ValueError(f"Eigenvector matrix must be {n}x{n}")

    @property
    def order(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def has_eigenvectors(self) -> bool:
        return self.eigenvectors is not None

    @property
    def level_energies(self) -> np.ndarray:
        return np.array([level.energy for level in self.levels])

    @property
    def degeneracies(self) -> np.ndarray:
        return np.array([level.degeneracy for level in self.levels], dtype=np.int64)

    @property
    def state_energies(self) -> np.ndarray:
        """Per-state energies taken from the grouped levels."""
        return self.level_energies[self.level_of]

    @property
    def max_energy(self) -> float:
        return float(self.levels[-1].energy)

    def overlaps(self) -> np.ndarray:
        """|<j|e_k>|^2 as an N x N real matrix (rows j, columns k)."""
        if self.eigenvectors is None:
            raise SpectrumError("Spectrum carries no eigenvectors")
        return np.abs(self.eigenvectors) ** 2

    def level_overlaps(self) -> np.ndarray:
        """Sum of |<j|e_{n,a}>|^2 over each level: N x (number of levels)."""
        overlaps = self.overlaps()
        summed = np.zeros((self.order, len(self.levels)))
        np.add.at(summed.T, self.level_of, overlaps.T)
        return summed

    def to_dict(self, include_eigenvectors: bool = False) -> dict:
        """JSON-ready representation."""
        data = {
            'source': self.source.value,
            'order': self.order,
            'group_tol': self.group_tol,
            'eigenvalues': [float(e) for e in self.eigenvalues],
            'levels': [
                {'energy': float(level.energy), 'degeneracy': int(level.degeneracy)}
                for level in self.levels
            ],
        }
        if include_eigenvectors and self.eigenvectors is not None:
            vectors = self.eigenvectors
            if np.iscomplexobj(vectors):
                data['eigenvectors'] = {
                    'real': vectors.real.tolist(),
                    'imag': vectors.imag.tolist(),
                }
            else:
                data['eigenvectors'] = vectors.tolist()
        return data

    def __repr__(self) -> str:
        levels = ", ".join(f"({lv.energy:.6g},{lv.degeneracy})" for lv in self.levels)
        return f"Spectrum(source={self.source.value}, N={self.order}, levels=[{levels}])"
