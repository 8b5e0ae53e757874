"""Shared fixtures for the thermometry test suite."""

import pytest

from src.services.analysis_service import AnalysisService
from src.services.estimation_service import EstimationService
from src.services.graph_service import GraphService
from src.services.spectral_service import SpectralService
from src.services.thermo_service import ThermoService


@pytest.fixture
def graph_service():
    return GraphService()


@pytest.fixture
def spectral_service(graph_service):
    return SpectralService(graph_service, group_tol=1e-9)


@pytest.fixture
def thermo_service(spectral_service):
    return ThermoService(spectral_service)


@pytest.fixture
def analysis_service(graph_service, spectral_service, thermo_service):
    return AnalysisService(graph_service, spectral_service, thermo_service, threads=2)


@pytest.fixture
def estimation_service(spectral_service, thermo_service):
    return EstimationService(spectral_service, thermo_service, threads=2)


@pytest.fixture
def model_at(graph_service, spectral_service, thermo_service):
    """Build the thermal model of a descriptor at temperature T."""
    def build(descriptor: str, temperature: float):
        spectrum = spectral_service.spectrum(graph_service.parse(descriptor))
        return thermo_service.make_thermal(spectrum, temperature)
    return build
