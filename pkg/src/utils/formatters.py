"""
Formatting helpers for terminal tables and CSV metadata lines.
"""

from __future__ import annotations

import math
from typing import Iterable, List, Optional

from src import __version__

TOOL_NAME = "thermograph"


def format_number(value, digits: int = 6) -> str:
    """Compact numeric text; integers and strings pass through."""
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{digits}g}"
    return str(value)


def header_lines(graph: Optional[str], extra: Iterable[str] = ()) -> List[str]:
    """Metadata lines heading every CSV output (without the '#')."""
    lines = [f"{TOOL_NAME} {__version__}"]
    if graph:
        lines.append(f"graph {graph}")
    lines.extend(extra)
    return lines


def peak_lines(t_max: float, qfi_max: float) -> List[str]:
    return [f"peak T_max={t_max!r}", f"peak qfi_max={qfi_max!r}"]
