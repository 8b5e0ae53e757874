"""
Seed derivation for reproducible sampling pipelines.

Every trial draws from its own generator spawned from the run seed, so the
output depends only on (seed, trial index) and never on scheduling.
"""

from typing import List

import numpy as np


class SeedGenerator:
    """Utility class for deriving independent generators."""

    @staticmethod
    def validate_seed(seed: int) -> int:
        """
        Raises:
            ValueError: If the seed is not a non-negative integer
        """
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
            raise ValueError(f"Seed must be an integer, got {seed!r}")
        if seed < 0:
            raise ValueError(f"Seed must be non-negative, got {seed}")
        return int(seed)

    @staticmethod
    def generator(seed: int) -> np.random.Generator:
        return np.random.default_rng(SeedGenerator.validate_seed(seed))

    @staticmethod
    def spawn(seed: int, count: int) -> List[np.random.SeedSequence]:
        """Child seed sequences, one per trial."""
        if count < 1:
            raise ValueError(f"Need at least one child seed, got {count}")
        return np.random.SeedSequence(SeedGenerator.validate_seed(seed)).spawn(count)
