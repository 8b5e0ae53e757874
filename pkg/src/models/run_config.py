"""
RunConfig model: the validated view of one CLI invocation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.models.estimation import MeasurementKind


class Subcommand(str, Enum):
    SPECTRUM = "spectrum"
    REPORT = "report"
    SWEEP = "sweep"
    TABLE1 = "table1"
    CRB = "crb"
    COHERENCE = "coherence"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    TABLE = "table"


class TableRegime(str, Enum):
    """Which side of the family comparison table `table1` emits."""
    HIGH = "high"
    LOW = "low"
    XMAX = "xmax"


@dataclass
class RunConfig:
    """
    Flags of one CLI run.

    Business Rules:
    - `report` and `crb` need a positive temperature
    - `crb` needs seed, shots and trials
    - `table1` needs N; every other subcommand needs a graph descriptor
    - temperature ranges must satisfy 0 < T_lo < T_hi
    - `table1 --regime low` accepts an optional positive evaluation temperature
    """
    subcommand: Subcommand
    graph: Optional[str] = None
    temperature: Optional[float] = None
    t_lo: Optional[float] = None
    t_hi: Optional[float] = None
    points: Optional[int] = None
    out: Optional[str] = None
    output_format: OutputFormat = OutputFormat.CSV
    tol: Optional[float] = None
    seed: Optional[int] = None
    shots: Optional[int] = None
    trials: Optional[int] = None
    kind: MeasurementKind = MeasurementKind.ENERGY
    order: Optional[int] = None
    n1: Optional[int] = None
    threads: Optional[int] = None
    regime: TableRegime = TableRegime.HIGH
    analytic: bool = False
    eigenvectors: bool = False
    estimates: bool = False

    def __post_init__(self):
        self.subcommand = Subcommand(self.subcommand)
        self.output_format = OutputFormat(self.output_format)
        self.kind = MeasurementKind(self.kind)
        self.regime = TableRegime(self.regime)
        self._validate()

    def _validate(self) -> None:
        """
        Raises:
            ValueError: If the flags are inconsistent for the subcommand
        """
        if self.subcommand is Subcommand.TABLE1:
            if self.order is None:
                raise ValueError("table1 requires --N")
        elif not self.graph:
            raise ValueError(f"{self.subcommand.value} requires a graph descriptor")

        if self.subcommand in (Subcommand.REPORT, Subcommand.CRB):
            if self.temperature is None:
                raise ValueError(f"{self.subcommand.value} requires --T")
            if not self.temperature > 0:
                raise ValueError(f"Temperature must be positive, got {self.temperature}")

        if self.subcommand is Subcommand.CRB:
            for name, value in (('--seed', self.seed), ('--M', self.shots), ('--trials', self.trials)):
                if value is None:
                    raise ValueError(f"crb requires {name}")
            if self.shots < 1:
                raise ValueError("--M must be >= 1")
            if self.trials < 100:
                raise ValueError("--trials must be >= 100")

        if self.subcommand is Subcommand.TABLE1 and self.temperature is not None and not self.temperature > 0:
            raise ValueError(f"Temperature must be positive, got {self.temperature}")

        if self.t_lo is not None and not self.t_lo > 0:
            raise ValueError("--T-lo must be positive")
        if self.t_hi is not None and not self.t_hi > 0:
            raise ValueError("--T-hi must be positive")
        if self.t_lo is not None and self.t_hi is not None and not self.t_lo < self.t_hi:
            raise ValueError("--T-lo must be smaller than --T-hi")
        if self.points is not None and self.points < 2:
            raise ValueError("--points must be >= 2")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("--tol must be positive")
        if self.threads is not None and self.threads < 1:
            raise ValueError("--threads must be >= 1")
