"""
Display utilities for presenting results as terminal tables.

Used for the `table` output format; every function returns plain text with
fixed column alignment, printing is left to the caller.
"""

from typing import List, Optional

import pandas as pd

from src.utils.formatters import format_number

MIN_WIDTH = 8
RULE_WIDTH = 60


def section_header(title: str) -> List[str]:
    """Title framed by two rules."""
    return ["=" * RULE_WIDTH, f"  {title}", "=" * RULE_WIDTH]


def format_table_header(columns: List[tuple[str, int]]) -> List[str]:
    """
    Header line and separator for aligned columns.

    Args:
        columns: List of (column_name, width) tuples
    """
    header = " | ".join(name.ljust(width) for name, width in columns)
    separator = "-+-".join("-" * width for _, width in columns)
    return [header.rstrip(), separator]


def format_table_row(values: List[str], widths: List[int]) -> str:
    return " | ".join(str(val).ljust(width) for val, width in zip(values, widths)).rstrip()


def render_frame(frame: pd.DataFrame, title: Optional[str] = None) -> str:
    """
    Render a DataFrame as an aligned text table.

    Args:
        frame: Table to render
        title: Optional section title printed above the table
    """
    cells = [[format_number(value) for value in row] for row in frame.itertuples(index=False)]
    widths = []
    for position, name in enumerate(frame.columns):
        longest = max((len(row[position]) for row in cells), default=0)
        widths.append(max(MIN_WIDTH, len(str(name)), longest))

    lines = section_header(title) if title else []
    lines.extend(format_table_header(list(zip(map(str, frame.columns), widths))))
    lines.extend(format_table_row(row, widths) for row in cells)
    return "\n".join(lines) + "\n"
