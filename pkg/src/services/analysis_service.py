"""
Analysis service: temperature sweeps, QFI peaks and approximation tables.
"""

from __future__ import annotations

import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import optimize

from src.config import get_settings
from src.models.graph import Graph
from src.models.spectrum import Spectrum
from src.models.sweep import ApproximationReport, CoherenceCurve, SweepResult
from src.services.graph_service import GraphService
from src.services.spectral_service import SpectralService
from src.services.thermo_service import ThermoService
from src.utils.parallel import ordered_map
from src.validators.common_validators import require_int_at_least, require_temperature_range

logger = logging.getLogger(__name__)

# Default grid: [GRID_LOW * E_1, GRID_HIGH * E_max]
GRID_LOW = 1e-2
GRID_HIGH = 1e3
PEAK_TOL = 1e-8

# Temperature of the symbolic-vs-numeric high-T comparison, in units of E_max
TABLE1_HIGH_T = 1e3
APPROXIMATION_HIGH_T = 1e2

TABLE1_COLUMNS = [
    'family', 'graph', 'N', 'M',
    'qfi_high', 'fi_high', 'ratio_high',
    'qfi_numeric', 'fi_numeric', 'ratio_numeric',
    'qfi_dev', 'fi_dev',
]
TABLE1_LOW_T_COLUMNS = [
    'family', 'graph', 'E1', 'g1', 'E1_closed', 'g1_closed',
    'T', 'qfi_low_closed', 'qfi_low', 'qfi_exact', 'low_rel_error',
]
APPROXIMATION_COLUMNS = ['T', 'qfi', 'qfi_low', 'qfi_high', 'low_error', 'high_error']


def relative_error(approx: float, exact: float) -> float:
    """|approx - exact| / |exact|; the absolute deviation when exact is 0."""
    if exact == 0:
        return abs(approx)
    return abs(approx - exact) / abs(exact)


class AnalysisService:
    """
    Sweeps and reports built on the thermo service.

    Grid points are independent and evaluated in parallel; results always
    come back in grid order.
    """

    def __init__(
        self,
        graph_service: Optional[GraphService] = None,
        spectral_service: Optional[SpectralService] = None,
        thermo_service: Optional[ThermoService] = None,
        threads: Optional[int] = None,
    ):
        self.graphs = graph_service or GraphService()
        self.spectral = spectral_service or SpectralService(self.graphs)
        self.thermo = thermo_service or ThermoService(self.spectral)
        self.threads = threads

    # ========== GRID ==========

    def default_grid(self, spectrum: Spectrum, points: Optional[int] = None) -> np.ndarray:
        """Log-spaced grid over [1e-2 E_1, 1e3 E_max]."""
        e1, _ = self.spectral.algebraic_connectivity(spectrum)
        return self.grid(GRID_LOW * e1, GRID_HIGH * spectrum.max_energy, points)

    def grid(self, t_lo: float, t_hi: float, points: Optional[int] = None) -> np.ndarray:
        t_lo, t_hi = require_temperature_range(t_lo, t_hi)
        points = require_int_at_least(points if points is not None else get_settings().sweep_points, 2, "points")
        return np.geomspace(t_lo, t_hi, points)

    def _resolve_grid(self, spectrum: Spectrum, t_lo: Optional[float], t_hi: Optional[float],
                      points: Optional[int]) -> np.ndarray:
        if t_lo is None and t_hi is None:
            return self.default_grid(spectrum, points)
        e1, _ = self.spectral.algebraic_connectivity(spectrum)
        lo = t_lo if t_lo is not None else GRID_LOW * e1
        hi = t_hi if t_hi is not None else GRID_HIGH * spectrum.max_energy
        return self.grid(lo, hi, points)

    # ========== SWEEP ==========

    def sweep(self, graph: Graph, t_lo: Optional[float] = None, t_hi: Optional[float] = None,
              points: Optional[int] = None) -> SweepResult:
        """
        FisherReport at every grid point plus the refined QFI peak.

        Args:
            graph: Connected graph
            t_lo, t_hi: Grid range (defaults from the spectrum)
            points: Grid size (default THERMOGRAPH_SWEEP_POINTS)
        """
        spectrum = self.spectral.spectrum(graph)
        stats = self.graphs.degree_stats(graph)
        temperatures = self._resolve_grid(spectrum, t_lo, t_hi, points)

        reports = ordered_map(
            lambda t: self.thermo.fisher_report(spectrum, stats, t),
            temperatures, self.threads,
        )
        qfi = np.array([report.qfi for report in reports])
        peak = self.refine_peak(spectrum, temperatures, qfi)
        logger.info("sweep %s: %d points, T_max=%.6g", graph.label(), temperatures.size, peak[0])
        return SweepResult(graph.label(), temperatures, tuple(reports), peak)

    def refine_peak(self, spectrum: Spectrum, temperatures: np.ndarray,
                    qfi: np.ndarray) -> Tuple[float, float]:
        """
        Golden-section refinement around the grid argmax.

        An argmax on the grid boundary is returned as is, and a refinement
        that does not beat the best sample falls back to it.
        """
        index = int(np.argmax(qfi))
        best = (float(temperatures[index]), float(qfi[index]))
        if index == 0 or index == temperatures.size - 1:
            return best

        def negative_qfi(t: float) -> float:
            if t <= 0:
                return 0.0
            return -self.thermo.qfi(self.thermo.make_thermal(spectrum, t))

        bracket = (temperatures[index - 1], temperatures[index], temperatures[index + 1])
        try:
            result = optimize.minimize_scalar(negative_qfi, bracket=bracket, method='golden',
                                              tol=PEAK_TOL)
        except ValueError:
            logger.debug("peak bracket rejected, keeping grid point")
            return best

        t_max = float(result.x)
        value = -float(result.fun)
        if not bracket[0] <= t_max <= bracket[2] or value < best[1]:
            return best
        return t_max, value

    # ========== TABLES ==========

    def table1_graphs(self, order: int, n1: Optional[int] = None) -> List[Tuple[str, Graph]]:
        """
        The seven families compared in the high-temperature table.

        Raises:
            ValueError: If N is not a perfect square >= 9 or N1 is out of range
        """
        order = require_int_at_least(order, 9, "N")
        side = math.isqrt(order)
        if side * side != order:
            raise ValueError(f"N must be a perfect square for the lattice rows, got {order}")
        n1 = n1 if n1 is not None else max(1, order // 3)
        n1 = require_int_at_least(n1, 1, "N1")
        if n1 >= order:
            raise ValueError(f"N1 must be smaller than N, got N1={n1}, N={order}")

        return [
            ('complete', self.graphs.parse(f"complete:{order}")),
            ('cycle', self.graphs.parse(f"cycle:{order}")),
            ('bipartite', self.graphs.parse(f"bipartite:{n1},{order - n1}")),
            ('star', self.graphs.parse(f"star:{order}")),
            ('path', self.graphs.parse(f"path:{order}")),
            ('grid', self.graphs.parse(f"grid:{side}x{side}:obc")),
            ('torus', self.graphs.parse(f"torus:{side}x{side}")),
        ]

    def table1_report(self, order: int, n1: Optional[int] = None) -> pd.DataFrame:
        """
        High-temperature table: degree-formula values of T^4 F_q, T^4 F_c and
        their ratio next to the exact values at T = 1e3 E_max.
        """
        rows = []
        for family, graph in self.table1_graphs(order, n1):
            spectrum = self.spectral.spectrum(graph)
            stats = self.graphs.degree_stats(graph)
            n = graph.order
            qfi_high = self.thermo.qfi_high_T(stats, n, 1.0)
            fi_high = self.thermo.fi_high_T(stats, n, 1.0)

            temperature = TABLE1_HIGH_T * spectrum.max_energy
            model = self.thermo.make_thermal(spectrum, temperature)
            scale = temperature ** 4
            qfi_numeric = self.thermo.qfi(model) * scale
            fi_numeric = self.thermo.fi_position(model) * scale

            rows.append({
                'family': family,
                'graph': graph.label(),
                'N': n,
                'M': stats.edge_count,
                'qfi_high': qfi_high,
                'fi_high': fi_high,
                'ratio_high': self.thermo.ratio_limit(stats, n),
                'qfi_numeric': qfi_numeric,
                'fi_numeric': fi_numeric,
                'ratio_numeric': fi_numeric / qfi_numeric if qfi_numeric > 0 else 0.0,
                'qfi_dev': relative_error(qfi_numeric, qfi_high),
                'fi_dev': relative_error(fi_numeric, fi_high),
            })
        return pd.DataFrame(rows, columns=TABLE1_COLUMNS)

    @staticmethod
    def closed_form_gap(family: str, order: int, n1: int) -> Tuple[float, int]:
        """
        (E_1, g_1) of the table families in closed form.

        The bipartite row has parts N1 <= N2 = N - N1; with equal parts both
        excited levels of energy N1 merge.
        """
        side = math.isqrt(order)
        if family == 'complete':
            return float(order), order - 1
        if family == 'cycle':
            return 4.0 * math.sin(math.pi / order) ** 2, 2
        if family == 'bipartite':
            small, large = sorted((n1, order - n1))
            return float(small), (large - 1 if small < large else order - 2)
        if family == 'star':
            return 1.0, order - 2
        if family == 'path':
            return 4.0 * math.sin(math.pi / (2 * order)) ** 2, 1
        if family == 'grid':
            return 4.0 * math.sin(math.pi / (2 * side)) ** 2, 2
        if family == 'torus':
            return 4.0 * math.sin(math.pi / side) ** 2, 4
        raise ValueError(f"No closed-form gap for family '{family}'")

    def table1_low_T(self, order: int, temperature: Optional[float] = None,
                     n1: Optional[int] = None) -> pd.DataFrame:
        """
        Low-temperature side of the table: T^4 F_q^low from the closed-form
        gap next to the spectrum's gap and the exact T^4 F_q.

        Args:
            order: Vertex count N (a perfect square)
            temperature: Evaluation temperature; default is each family's
                predicted peak E_1/x_max(g_1)
            n1: First part of the bipartite row
        """
        n1 = n1 if n1 is not None else max(1, order // 3)
        rows = []
        for family, graph in self.table1_graphs(order, n1):
            spectrum = self.spectral.spectrum(graph)
            e1, g1 = self.spectral.algebraic_connectivity(spectrum)
            closed_e1, closed_g1 = self.closed_form_gap(family, order, n1)
            t = temperature if temperature is not None else self.thermo.qfi_low_T_peak(e1, g1)[0]
            scale = t ** 4
            closed = self.thermo.qfi_low_T(closed_e1, closed_g1, t) * scale
            low = self.thermo.qfi_low_T(e1, g1, t) * scale
            exact = self.thermo.qfi(self.thermo.make_thermal(spectrum, t)) * scale
            rows.append({
                'family': family,
                'graph': graph.label(),
                'E1': e1,
                'g1': g1,
                'E1_closed': closed_e1,
                'g1_closed': closed_g1,
                'T': t,
                'qfi_low_closed': closed,
                'qfi_low': low,
                'qfi_exact': exact,
                'low_rel_error': relative_error(low, exact),
            })
        return pd.DataFrame(rows, columns=TABLE1_LOW_T_COLUMNS)

    def xmax_table(self, degeneracies: Iterable[int]) -> pd.DataFrame:
        """x_max and the peak value f_g(x_max) for each degeneracy g."""
        rows = []
        for g in degeneracies:
            x_max = self.thermo.solve_xmax(g)
            boltzmann = math.exp(-x_max)
            rows.append({
                'g1': int(g),
                'x_max': x_max,
                'f_max': g * x_max ** 4 * boltzmann / (1.0 + g * boltzmann) ** 2,
            })
        return pd.DataFrame(rows, columns=['g1', 'x_max', 'f_max'])

    # ========== APPROXIMATION QUALITY ==========

    def approximation_report(self, graph: Graph,
                             temperatures: Optional[Sequence[float]] = None) -> ApproximationReport:
        """Relative errors of qfi_low and qfi_high against the exact QFI."""
        spectrum = self.spectral.spectrum(graph)
        stats = self.graphs.degree_stats(graph)
        e1, g1 = self.spectral.algebraic_connectivity(spectrum)
        grid = self.default_grid(spectrum) if temperatures is None else np.asarray(temperatures, dtype=float)
        if grid.ndim != 1 or grid.size < 2 or not np.all(np.diff(grid) > 0):
            raise ValueError("Temperature grid must be strictly increasing with at least two points")
        require_temperature_range(grid[0], grid[-1])

        def row(t: float) -> dict:
            exact = self.thermo.qfi(self.thermo.make_thermal(spectrum, t))
            low = self.thermo.qfi_low_T(e1, g1, t)
            high = self.thermo.qfi_high_T(stats, graph.order, t)
            return {
                'T': t,
                'qfi': exact,
                'qfi_low': low,
                'qfi_high': high,
                'low_error': relative_error(low, exact),
                'high_error': relative_error(high, exact),
            }

        rows = ordered_map(row, grid, self.threads)
        table = pd.DataFrame(rows, columns=APPROXIMATION_COLUMNS)
        t_max, _ = self.refine_peak(spectrum, grid, table['qfi'].to_numpy())
        at_peak = row(t_max)
        at_high = row(APPROXIMATION_HIGH_T * spectrum.max_energy)

        return ApproximationReport(
            graph=graph.label(),
            table=table,
            peak_temperature=t_max,
            low_error_at_peak=at_peak['low_error'],
            high_error_at_peak=at_peak['high_error'],
            max_temperature_error_high=at_high['high_error'],
        )

    # ========== COHERENCE ==========

    def coherence_curve(self, graph: Graph, t_lo: Optional[float] = None,
                        t_hi: Optional[float] = None, points: Optional[int] = None) -> CoherenceCurve:
        """
        Normalized l1 coherence of the Gibbs state and the QFI along a grid.

        The crossing temperature is where the coherence first drops below
        1/e (bisection in log T), None if it never does on the grid.
        """
        spectrum = self.spectral.spectrum(graph)
        temperatures = self._resolve_grid(spectrum, t_lo, t_hi, points)

        def evaluate(t: float) -> Tuple[float, float]:
            model = self.thermo.make_thermal(spectrum, t)
            rho = self.thermo.gibbs_position_matrix(model)
            return self.thermo.coherence_l1_normalized(rho), self.thermo.qfi(model)

        values = ordered_map(evaluate, temperatures, self.threads)
        coherence = np.array([c for c, _ in values])
        qfi = np.array([q for _, q in values])
        crossing = self._coherence_crossing(spectrum, temperatures, coherence, math.exp(-1.0))
        peak = self.refine_peak(spectrum, temperatures, qfi)
        return CoherenceCurve(graph.label(), temperatures, coherence, qfi, crossing, peak)

    def coherence_at(self, spectrum: Spectrum, temperature: float) -> float:
        model = self.thermo.make_thermal(spectrum, temperature)
        return self.thermo.coherence_l1_normalized(self.thermo.gibbs_position_matrix(model))

    def _coherence_crossing(self, spectrum: Spectrum, temperatures: np.ndarray,
                            coherence: np.ndarray, level: float) -> Optional[float]:
        below = np.flatnonzero(coherence < level)
        if below.size == 0:
            return None
        index = int(below[0])
        if index == 0:
            return float(temperatures[0])
        # bisection in log T between the bracketing grid points
        root = optimize.bisect(
            lambda log_t: self.coherence_at(spectrum, math.exp(log_t)) - level,
            math.log(temperatures[index - 1]), math.log(temperatures[index]),
            xtol=PEAK_TOL,
        )
        return float(math.exp(root))
