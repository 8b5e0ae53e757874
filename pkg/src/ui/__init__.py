"""Terminal output."""

from src.ui.display import format_table_header, format_table_row, render_frame, section_header

__all__ = ['format_table_header', 'format_table_row', 'render_frame', 'section_header']
