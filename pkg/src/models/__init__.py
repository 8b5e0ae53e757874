"""
Data models for the thermometry toolkit.

Graph -> Spectrum -> ThermalModel -> FisherReport; SweepResult and the
estimation models build on them.
"""

from src.models.graph import BoundaryCondition, DegreeStats, Graph, GraphFamily
from src.models.spectrum import Level, Spectrum, SpectrumSource
from src.models.thermal import FISHER_REPORT_SCHEMA, FisherReport, ThermalModel
from src.models.estimation import CrbReport, EstimationTrial, MeasurementKind, OutcomeSample
from src.models.sweep import ApproximationReport, CoherenceCurve, SweepResult
from src.models.run_config import OutputFormat, RunConfig, Subcommand, TableRegime

__all__ = [
    'BoundaryCondition', 'DegreeStats', 'Graph', 'GraphFamily',
    'Level', 'Spectrum', 'SpectrumSource',
    'FISHER_REPORT_SCHEMA', 'FisherReport', 'ThermalModel',
    'CrbReport', 'EstimationTrial', 'MeasurementKind', 'OutcomeSample',
    'ApproximationReport', 'CoherenceCurve', 'SweepResult',
    'OutputFormat', 'RunConfig', 'Subcommand', 'TableRegime',
]
