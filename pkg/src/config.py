"""
Runtime settings.

Values come from the process environment, optionally seeded from a `.env`
file in the project root (existing variables are never overridden):

    THERMOGRAPH_THREADS        worker count for sweeps and CRB trials
    THERMOGRAPH_GROUP_TOL      degeneracy grouping tolerance
    THERMOGRAPH_LOG_LEVEL      logging level name
    THERMOGRAPH_SWEEP_POINTS   default temperature grid size
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

ENV_PATH = Path(__file__).resolve().parent.parent / '.env'
load_dotenv(dotenv_path=ENV_PATH, override=False)

LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'


@dataclass(frozen=True)
class Settings:
    """Immutable snapshot of the environment configuration."""
    threads: int
    group_tol: float = 1e-9
    log_level: str = 'WARNING'
    sweep_points: int = 400

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError("THERMOGRAPH_THREADS must be >= 1")
        if not self.group_tol > 0:
            raise ValueError("THERMOGRAPH_GROUP_TOL must be positive")
        if self.sweep_points < 2:
            raise ValueError("THERMOGRAPH_SWEEP_POINTS must be >= 2")
        if logging.getLevelName(self.log_level.upper()) == f"Level {self.log_level.upper()}":
            raise ValueError(f"THERMOGRAPH_LOG_LEVEL unknown: {self.log_level}")


def _read_env(name: str, cast, default):
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return cast(raw.strip())
    except (TypeError, ValueError):
        raise ValueError(f"Invalid value for {name}: {raw!r}")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Build (once) the settings from the environment."""
    return Settings(
        threads=_read_env('THERMOGRAPH_THREADS', int, os.cpu_count() or 1),
        group_tol=_read_env('THERMOGRAPH_GROUP_TOL', float, 1e-9),
        log_level=_read_env('THERMOGRAPH_LOG_LEVEL', str, 'WARNING'),
        sweep_points=_read_env('THERMOGRAPH_SWEEP_POINTS', int, 400),
    )


def configure_logging(level: Optional[str] = None) -> None:
    """Install a single stderr handler on the root logger."""
    name = (level or get_settings().log_level).upper()
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(name)
