"""
Main application entry point.

Graph Thermometry Toolkit - command-line interface.

    python main.py spectrum complete:5
    python main.py report cycle:8 --T 1
    python main.py sweep honey:4x4:obc --points 200 --out honey.csv
    python main.py table1 --N 16
    python main.py crb complete:8 --T 1 --M 10000 --trials 200 --seed 7 --format json
    python main.py coherence complete:10

Exit codes: 0 success, 1 I/O failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from src import __version__
from src.config import configure_logging
from src.exceptions import ThermographError
from src.models.estimation import MeasurementKind
from src.models.run_config import OutputFormat, RunConfig, Subcommand, TableRegime
from src.repositories.result_repository import ResultRepository
from src.services.analysis_service import AnalysisService
from src.services.estimation_service import EstimationService
from src.services.graph_service import GraphService
from src.services.spectral_service import SpectralService
from src.services.thermo_service import ThermoService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2


class ThermometryApp:
    """Main application class."""

    def __init__(self, result_repository: Optional[ResultRepository] = None):
        self.results = result_repository or ResultRepository()
        self.parser = self.build_parser()

    # ========== ARGUMENTS ==========

    def build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--out", help="Output file (default: standard output).")
        common.add_argument("--format", dest="output_format", default="csv",
                            choices=[f.value for f in OutputFormat], help="Output format.")
        common.add_argument("--tol", type=float, help="Degeneracy grouping tolerance.")
        common.add_argument("--threads", type=int, help="Worker threads for sweeps and trials.")
        common.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")

        parser = argparse.ArgumentParser(
            prog="thermograph",
            description="Quantum thermometry on graphs: spectra, Fisher information, sweeps and CRB checks.",
        )
        parser.add_argument("--version", action="version", version=f"thermograph {__version__}")
        commands = parser.add_subparsers(dest="subcommand", required=True)

        spectrum = commands.add_parser("spectrum", parents=[common], help="Laplacian spectrum of a graph.")
        spectrum.add_argument("graph", help="Graph descriptor, e.g. complete:5 or grid:3x3:obc.")
        spectrum.add_argument("--analytic", action="store_true", help="Require the closed-form spectrum.")
        spectrum.add_argument("--eigenvectors", action="store_true", help="Include eigenvectors (JSON).")

        report = commands.add_parser("report", parents=[common], help="Fisher report at one temperature.")
        report.add_argument("graph")
        report.add_argument("--T", dest="temperature", type=float, required=True, help="Temperature (> 0).")

        for name, text in (("sweep", "Fisher reports over a temperature grid."),
                           ("coherence", "Coherence and QFI over a temperature grid.")):
            grid = commands.add_parser(name, parents=[common], help=text)
            grid.add_argument("graph")
            grid.add_argument("--T-lo", dest="t_lo", type=float, help="Lowest grid temperature.")
            grid.add_argument("--T-hi", dest="t_hi", type=float, help="Highest grid temperature.")
            grid.add_argument("--points", type=int, help="Grid size.")

        table = commands.add_parser("table1", parents=[common], help="Family comparison table.")
        table.add_argument("--N", dest="order", type=int, required=True, help="Vertex count (perfect square).")
        table.add_argument("--N1", dest="n1", type=int, help="First part of the bipartite row.")
        table.add_argument("--regime", default="high", choices=[r.value for r in TableRegime],
                           help="high: T^4 F at high T; low: low-T QFI; xmax: peak equation roots.")
        table.add_argument("--T", dest="temperature", type=float, help="Temperature for --regime low.")

        crb = commands.add_parser("crb", parents=[common], help="Monte Carlo Cramer-Rao experiment.")
        crb.add_argument("graph")
        crb.add_argument("--T", dest="temperature", type=float, required=True)
        crb.add_argument("--M", dest="shots", type=int, required=True, help="Shots per trial.")
        crb.add_argument("--trials", type=int, required=True, help="Number of trials (>= 100).")
        crb.add_argument("--seed", type=int, required=True)
        crb.add_argument("--kind", default="energy", choices=[k.value for k in MeasurementKind])
        crb.add_argument("--estimates", action="store_true", help="Include per-trial estimates (JSON).")
        return parser

    def parse_config(self, argv: Optional[List[str]] = None) -> tuple[RunConfig, bool]:
        """
        Raises:
            SystemExit: On usage errors (code 2) or --help (code 0)
            ValueError: If the flags are inconsistent
        """
        namespace = vars(self.parser.parse_args(argv))
        verbose = namespace.pop("verbose", False)
        return RunConfig(**namespace), verbose

    # ========== COMMANDS ==========

    def _services(self, config: RunConfig):
        graphs = GraphService()
        spectral = SpectralService(graphs, group_tol=config.tol)
        thermo = ThermoService(spectral)
        return graphs, spectral, thermo

    def cmd_spectrum(self, config: RunConfig) -> str:
        graphs, spectral, _ = self._services(config)
        graph = graphs.parse(config.graph)
        if config.analytic:
            graphs.require_connected(graph)
            spectrum = spectral.analytic_spectrum(graph)
        else:
            spectrum = spectral.spectrum(graph)
        return self.results.render_spectrum(spectrum, graph.label(), config.output_format, config.eigenvectors)

    def cmd_report(self, config: RunConfig) -> str:
        graphs, spectral, thermo = self._services(config)
        graph = graphs.parse(config.graph)
        spectrum = spectral.spectrum(graph)
        report = thermo.fisher_report(spectrum, graphs.degree_stats(graph), config.temperature)
        return self.results.render_report(report, graph.label(), config.output_format)

    def cmd_sweep(self, config: RunConfig) -> str:
        analysis = self._analysis(config)
        result = analysis.sweep(analysis.graphs.parse(config.graph), config.t_lo, config.t_hi, config.points)
        return self.results.render_sweep(result, config.output_format)

    def cmd_coherence(self, config: RunConfig) -> str:
        analysis = self._analysis(config)
        curve = analysis.coherence_curve(analysis.graphs.parse(config.graph), config.t_lo, config.t_hi,
                                         config.points)
        return self.results.render_coherence(curve, config.output_format)

    def cmd_table1(self, config: RunConfig) -> str:
        analysis = self._analysis(config)
        if config.regime is TableRegime.HIGH:
            frame = analysis.table1_report(config.order, config.n1)
        elif config.regime is TableRegime.LOW:
            frame = analysis.table1_low_T(config.order, config.temperature, config.n1)
        else:
            frame = analysis.xmax_table(range(1, config.order + 1))
        title = f"{config.regime.value} N={config.order}"
        return self.results.render_table(frame, title, config.output_format)

    def cmd_crb(self, config: RunConfig) -> str:
        graphs, spectral, thermo = self._services(config)
        estimation = EstimationService(spectral, thermo, threads=config.threads)
        report = estimation.crb_experiment(
            graphs.parse(config.graph), config.temperature, config.kind,
            config.shots, config.trials, config.seed,
        )
        return self.results.render_crb(report, config.output_format, config.estimates)

    def _analysis(self, config: RunConfig) -> AnalysisService:
        graphs, spectral, thermo = self._services(config)
        return AnalysisService(graphs, spectral, thermo, threads=config.threads)

    # ========== RUN ==========

    def run(self, argv: Optional[List[str]] = None) -> int:
        """Run one invocation and return its exit code."""
        try:
            config, verbose = self.parse_config(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID

        handlers = {
            Subcommand.SPECTRUM: self.cmd_spectrum,
            Subcommand.REPORT: self.cmd_report,
            Subcommand.SWEEP: self.cmd_sweep,
            Subcommand.TABLE1: self.cmd_table1,
            Subcommand.CRB: self.cmd_crb,
            Subcommand.COHERENCE: self.cmd_coherence,
        }
        try:
            configure_logging("DEBUG" if verbose else None)
            text = handlers[config.subcommand](config)
            if config.out:
                self.results.emit(text, config.out)
            else:
                sys.stdout.write(text)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        except (ValueError, ThermographError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Application entry point."""
    return ThermometryApp().run(argv)


if __name__ == "__main__":
    sys.exit(main())
