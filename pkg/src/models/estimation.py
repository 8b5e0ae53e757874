"""
Estimation models for the Cramer-Rao Monte Carlo experiments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np


# Generator family used for every sampling pipeline
RNG_ALGORITHM = "numpy.PCG64 via SeedSequence.spawn"


class MeasurementKind(str, Enum):
    """Measurement performed on the thermalized walker."""
    ENERGY = "energy"
    POSITION = "position"


@dataclass(frozen=True, eq=False)
class OutcomeSample:
    """
    Outcome counts of M i.i.d. measurements.

    Attributes:
        kind: energy (outcome = level index) or position (outcome = vertex)
        counts: Occurrences of every outcome in the outcome space
        shots: Total number of shots M
        true_temperature: Temperature the sample was drawn at
        seed: Seed used for the draw
    """
    kind: MeasurementKind
    counts: np.ndarray
    shots: int
    true_temperature: float
    seed: int

    def __post_init__(self):
        object.__setattr__(self, 'kind', MeasurementKind(self.kind))
        counts = np.asarray(self.counts, dtype=np.int64).copy()
        if counts.ndim != 1 or counts.size == 0:
            raise ValueError("Counts must be a non-empty 1-D array")
        if (counts < 0).any():
            raise ValueError("Counts cannot be negative")
        if self.shots < 1:
            raise ValueError(f"At least one shot is required, got {self.shots}")
        if int(counts.sum()) != self.shots:
            raise ValueError(f"Counts sum to {counts.sum()} instead of M = {self.shots}")
        counts.setflags(write=False)
        object.__setattr__(self, 'counts', counts)

    @property
    def outcome_space_size(self) -> int:
        return int(self.counts.size)

    def as_dict(self) -> Dict[int, int]:
        """Outcome -> count for outcomes that occurred."""
        return {int(k): int(c) for k, c in enumerate(self.counts) if c > 0}


@dataclass(frozen=True)
class EstimationTrial:
    """Result of one maximum-likelihood temperature estimate."""
    estimate: float
    log_likelihood: float
    converged: bool
    iterations: int

    def __post_init__(self):
        if self.converged and not self.estimate > 0:
            raise ValueError("A converged estimate must be positive")


@dataclass
class CrbReport:
    """
    Outcome of a Cramer-Rao experiment.

    efficiency is Var(T_hat) * M * F for the Fisher information of the
    measurement performed; values near 1 mean the bound is saturated.
    """
    graph: str
    temperature: float
    kind: MeasurementKind
    shots: int
    trials: int
    seed: int
    fisher_measurement: float
    fisher_quantum: float
    variance: float
    mean_estimate: float
    crb_measurement: float
    crb_quantum: float
    efficiency: float
    excluded_trials: int
    estimates: List[Optional[float]] = field(default_factory=list)
    rng_algorithm: str = RNG_ALGORITHM

    def to_dict(self, include_estimates: bool = False) -> dict:
        data = {
            'config': {
                'graph': self.graph,
                'T': self.temperature,
                'kind': MeasurementKind(self.kind).value,
                'M': self.shots,
                'trials': self.trials,
                'seed': self.seed,
                'rng': self.rng_algorithm,
            },
            'fisher_measurement': self.fisher_measurement,
            'fisher_quantum': self.fisher_quantum,
            'variance': self.variance,
            'mean_estimate': self.mean_estimate,
            'crb_measurement': self.crb_measurement,
            'crb_quantum': self.crb_quantum,
            'efficiency': self.efficiency,
            'excluded_trials': self.excluded_trials,
        }
        if include_estimates:
            data['estimates'] = list(self.estimates)
        return data
