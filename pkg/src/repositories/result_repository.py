"""
Result repository: rendering and writing of every CLI result.

Each `render_*` method returns the full text of one output in the requested
format; `emit` writes it to a file, or returns it for printing when no path
is given. Identical inputs always render to identical text.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import pandas as pd

from src.models.estimation import CrbReport
from src.models.run_config import OutputFormat
from src.models.spectrum import Spectrum
from src.models.sweep import CoherenceCurve, SweepResult
from src.models.thermal import FISHER_REPORT_SCHEMA, FisherReport
from src.repositories.base_repository import BaseRepository
from src.ui.display import render_frame
from src.utils.formatters import header_lines, peak_lines

logger = logging.getLogger(__name__)


class ResultRepository(BaseRepository):
    """Repository for thermometry outputs (CSV, JSON or text tables)."""

    # ========== SPECTRUM ==========

    def render_spectrum(self, spectrum: Spectrum, graph: str, fmt: OutputFormat,
                        include_eigenvectors: bool = False) -> str:
        """
        Levels of a spectrum; eigenvectors are only written in JSON.
        """
        if fmt is OutputFormat.JSON:
            data = spectrum.to_dict(include_eigenvectors)
            data['graph'] = graph
            return self.to_json(data)
        frame = pd.DataFrame(
            [(n, level.energy, level.degeneracy) for n, level in enumerate(spectrum.levels)],
            columns=['level', 'energy', 'degeneracy'],
        )
        extra = [f"source {spectrum.source.value}", f"N {spectrum.order}"]
        return self._render_frame(frame, graph, fmt, extra)

    # ========== FISHER REPORTS ==========

    def render_report(self, report: FisherReport, graph: str, fmt: OutputFormat) -> str:
        if fmt is OutputFormat.JSON:
            data = report.to_dict()
            data['graph'] = graph
            return self.to_json(data)
        frame = pd.DataFrame([report.to_row()], columns=FISHER_REPORT_SCHEMA)
        return self._render_frame(frame, graph, fmt)

    def render_sweep(self, result: SweepResult, fmt: OutputFormat) -> str:
        """Sweep rows in grid order; CSV carries the refined peak as footer lines."""
        if fmt is OutputFormat.JSON:
            return self.to_json(result.to_dict())
        frame = result.to_frame()
        extra = [f"points {len(result.reports)}"]
        footer = peak_lines(*result.peak)
        if fmt is OutputFormat.TABLE:
            return render_frame(frame, f"sweep {result.graph}") + "\n".join(footer) + "\n"
        return self.frame_to_csv(frame, header_lines(result.graph, extra), footer)

    def render_coherence(self, curve: CoherenceCurve, fmt: OutputFormat) -> str:
        t_max, qfi_max = curve.peak
        if fmt is OutputFormat.JSON:
            return self.to_json({
                'graph': curve.graph,
                'crossing_T': curve.crossing_temperature,
                'peak': {'T_max': t_max, 'qfi_max': qfi_max},
                'rows': curve.to_frame().to_dict(orient='records'),
            })
        footer = [f"crossing_T={curve.crossing_temperature!r}"] + peak_lines(t_max, qfi_max)
        if fmt is OutputFormat.TABLE:
            return render_frame(curve.to_frame(), f"coherence {curve.graph}") + "\n".join(footer) + "\n"
        return self.frame_to_csv(curve.to_frame(), header_lines(curve.graph), footer)

    # ========== TABLES ==========

    def render_table(self, frame: pd.DataFrame, title: str, fmt: OutputFormat) -> str:
        if fmt is OutputFormat.JSON:
            return self.to_json({'table': title, 'rows': frame.to_dict(orient='records')})
        if fmt is OutputFormat.TABLE:
            return render_frame(frame, title)
        return self.frame_to_csv(frame, header_lines(None, [f"table {title}"]))

    # ========== CRB ==========

    def render_crb(self, report: CrbReport, fmt: OutputFormat, include_estimates: bool = False) -> str:
        data = report.to_dict(include_estimates)
        if fmt is OutputFormat.JSON:
            return self.to_json(data)
        config = data.pop('config')
        data.pop('estimates', None)
        row = {**{key: config[key] for key in ('kind', 'T', 'M', 'trials', 'seed')}, **data}
        frame = pd.DataFrame([row], columns=list(row))
        return self._render_frame(frame, report.graph, fmt, [f"rng {config['rng']}"])

    # ========== OUTPUT ==========

    def emit(self, text: str, out: Optional[str | Path]) -> Optional[Path]:
        """
        Write text to `out`; with no path, nothing is written.

        Raises:
            OSError: If the file cannot be written
        """
        if out is None:
            return None
        target = self.write_text(out, text)
        logger.info("wrote %s", target)
        return target

    # ------------------ helpers ------------------

    def _render_frame(self, frame: pd.DataFrame, graph: str, fmt: OutputFormat,
                      extra: tuple | list = ()) -> str:
        if fmt is OutputFormat.TABLE:
            return render_frame(frame, graph)
        return self.frame_to_csv(frame, header_lines(graph, extra))
