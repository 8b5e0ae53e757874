"""
Base Repository - file access for graphs and results.

Every repository reads or writes plain files under a base directory:
- text and JSON through `to_json` / `write_text`
- tabular data through pandas with `#`-prefixed metadata header lines
"""

from __future__ import annotations

import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Optional

import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12g'


class BaseRepository:
    """Base repository for file-backed reads and writes."""

    def __init__(self, base_dir: Optional[str | Path] = None):
        self.base_dir = Path(base_dir) if base_dir else None

    # ------------------ Path Management ------------------

    def resolve(self, path: str | Path) -> Path:
        """Resolve a path against the base directory (absolute paths win)."""
        candidate = Path(path)
        if self.base_dir is not None and not candidate.is_absolute():
            return self.base_dir / candidate
        return candidate

    def _ensure_parent(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)

    # ------------------ Serialization ------------------

    @staticmethod
    def frame_to_csv(frame: pd.DataFrame, header_lines: Iterable[str] = (),
                     footer_lines: Iterable[str] = ()) -> str:
        """
        Render a frame as CSV text with `#` metadata lines.

        Args:
            frame: Table to render
            header_lines: Lines emitted before the column header (without '#')
            footer_lines: Lines emitted after the last row (without '#')
        """
        buffer = io.StringIO()
        for line in header_lines:
            buffer.write(f"# {line}\n")
        frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        for line in footer_lines:
            buffer.write(f"# {line}\n")
        return buffer.getvalue()

    @staticmethod
    def to_json(data: Any) -> str:
        """Deterministic JSON text (sorted keys, trailing newline)."""
        return json.dumps(data, indent=2, sort_keys=True, allow_nan=True) + "\n"

    # ------------------ Core IO ------------------

    def read_text(self, path: str | Path) -> str:
        target = self.resolve(path)
        logger.debug("reading %s", target)
        return target.read_text(encoding='utf-8')

    def write_text(self, path: str | Path, content: str) -> Path:
        target = self.resolve(path)
        self._ensure_parent(target)
        target.write_text(content, encoding='utf-8')
        logger.debug("wrote %d bytes to %s", len(content), target)
        return target

