"""Business logic layer."""

from src.services.lattice_service import LatticeService
from src.services.graph_service import GraphService
from src.services.spectral_service import SpectralService
from src.services.thermo_service import ThermoService
from src.services.estimation_service import EstimationService
from src.services.analysis_service import AnalysisService

__all__ = [
    'LatticeService', 'GraphService', 'SpectralService',
    'ThermoService', 'EstimationService', 'AnalysisService',
]
