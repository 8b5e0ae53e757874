"""
Thermo service: thermometric quantities of a walker in a Gibbs state.

Units: k_B = 1 and hopping amplitude 1, so energies and temperatures are
dimensionless. All Boltzmann sums are anchored on E_0 = 0, which carries the
largest weight; excited terms that underflow at small T contribute 0.

The single-walker model loses validity at high T (many excitations); the
high-temperature formulas here are evaluated as stated for the walker.
"""

from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import optimize

from src.exceptions import SpectrumError
from src.models.graph import DegreeStats
from src.models.spectrum import Spectrum
from src.models.thermal import FisherReport, ThermalModel
from src.services.spectral_service import SpectralService
from src.validators.common_validators import require_int_at_least, require_positive_temperature

logger = logging.getLogger(__name__)

# fi_position guard: vanishing probabilities and their numerators
PROBABILITY_FLOOR = 1e-300
NUMERATOR_FLOOR = 1e-150

# Overlap tolerance for the position-independent (null FI) criterion
OVERLAP_TOL = 1e-12

XMAX_LOWER = 4.0 + 1e-12
XMAX_TOL = 1e-12


class ThermoService:
    """All Fisher-information figures of the thermal walker."""

    def __init__(self, spectral_service: Optional[SpectralService] = None):
        self.spectral = spectral_service or SpectralService()

    # ========== GIBBS STATE ==========

    def make_thermal(self, spectrum: Spectrum, temperature: float) -> ThermalModel:
        """
        Gibbs state at temperature T.

        Raises:
            ValueError: If T <= 0 (use the *_zero_limit accessors for T = 0)
        """
        temperature = require_positive_temperature(temperature)
        if spectrum.levels[0].energy != 0.0:
            raise ValueError("Thermal models need a connected-graph spectrum (E_0 = 0)")
        weights = spectrum.degeneracies * np.exp(-spectrum.level_energies / temperature)
        partition = float(weights.sum())
        return ThermalModel(spectrum, temperature, partition, weights / partition)

    def energy_moment(self, model: ThermalModel, power: int) -> float:
        """
        <H^p> for p in {1, 2}.

        Raises:
            ValueError: For any other power
        """
        if power not in (1, 2):
            raise ValueError(f"Only the first two energy moments are supported, got p={power}")
        energies = model.spectrum.level_energies
        return float(np.dot(model.populations, energies ** power))

    def qfi(self, model: ThermalModel) -> float:
        """QFI = Var(H) / T^4, the variance taken in centered form."""
        energies = model.spectrum.level_energies
        mean = np.dot(model.populations, energies)
        variance = float(np.dot(model.populations, (energies - mean) ** 2))
        return variance / model.temperature ** 4

    # ========== POSITION MEASUREMENT ==========

    def position_probabilities(self, model: ThermalModel) -> np.ndarray:
        """p(j|T) = sum_k exp(-E_k/T)/Z |<j|e_k>|^2."""
        return self._level_diagonals(model) @ model.populations

    def energy_weighted(self, model: ThermalModel, vertex: int) -> float:
        """
        <H rho_T>_j = sum_k exp(-E_k/T) E_k / Z |<j|e_k>|^2.

        Raises:
            ValueError: If the vertex is out of range
        """
        if not 0 <= vertex < model.order:
            raise ValueError(f"Vertex {vertex} out of range for N={model.order}")
        return float(self._energy_weighted_all(model)[vertex])

    def fi_position(self, model: ThermalModel) -> float:
        """
        Fisher information of the position measurement.

        F_c = (sum_j <H rho>_j^2 / p(j|T) - <H>^2) / T^4

        Raises:
            SpectrumError: If p(j|T) vanishes while <H rho>_j does not
        """
        if self.has_position_independent_overlaps(model.spectrum):
            return 0.0
        probabilities = self.position_probabilities(model)
        weighted = self._energy_weighted_all(model)
        terms = self._guarded_ratio(weighted ** 2, probabilities, weighted)
        mean = self.energy_moment(model, 1)
        value = (float(terms.sum()) - mean ** 2) / model.temperature ** 4
        return max(value, 0.0)

    def fi_position_definitional(self, model: ThermalModel) -> float:
        """
        F_c from its definition sum_j (d_T p(j|T))^2 / p(j|T), with
        d_T p(j|T) = (<H rho>_j - p(j|T) <H>) / T^2.
        """
        probabilities = self.position_probabilities(model)
        weighted = self._energy_weighted_all(model)
        derivative = (weighted - probabilities * self.energy_moment(model, 1)) / model.temperature ** 2
        return float(self._guarded_ratio(derivative ** 2, probabilities, derivative).sum())

    def has_position_independent_overlaps(self, spectrum: Spectrum) -> bool:
        """
        True when sum_a |<j|e_{n,a}>|^2 / g_n does not depend on the level n.

        Then p(j|T) = t_j and <H rho>_j = t_j <H>, so the position FI is null
        (circulant graphs being the main example).
        """
        if not spectrum.has_eigenvectors:
            return False
        per_state = spectrum.level_overlaps() / spectrum.degeneracies[None, :]
        spread = per_state.max(axis=1) - per_state.min(axis=1)
        return bool(np.all(spread < OVERLAP_TOL))

    # ========== LOW TEMPERATURE ==========

    def qfi_low_T(self, e1: float, g1: int, temperature: float) -> float:
        """f_{g1}(E1/T)/E1^2 with f_g(x) = g x^4 e^{-x} / (1 + g e^{-x})^2."""
        temperature = require_positive_temperature(temperature)
        if not e1 > 0:
            raise ValueError(f"E1 must be positive, got {e1}")
        require_int_at_least(g1, 1, "g1")
        x = e1 / temperature
        boltzmann = np.exp(-x)
        return float(g1 * x ** 4 * boltzmann / (1.0 + g1 * boltzmann) ** 2 / e1 ** 2)

    def solve_xmax(self, g1: int) -> float:
        """
        Root x > 4 of e^x = g1 (x + 4) / (x - 4), the peak position of f_{g1}.

        Solved by bisection in log form on (4 + 1e-12, 64 + ln g1).
        """
        g1 = require_int_at_least(g1, 1, "g1")

        def residual(x: float) -> float:
            return x + np.log(x - 4.0) - np.log(g1 * (x + 4.0))

        upper = 4.0 + 60.0 + np.log(g1)
        return float(optimize.bisect(residual, XMAX_LOWER, upper, xtol=XMAX_TOL, rtol=4 * np.finfo(float).eps))

    def qfi_low_T_peak(self, e1: float, g1: int) -> Tuple[float, float]:
        """(T_max, peak value) of the low-temperature QFI."""
        t_max = e1 / self.solve_xmax(g1)
        return t_max, self.qfi_low_T(e1, g1, t_max)

    def fi_low_T(self, spectrum: Spectrum, temperature: float) -> float:
        """Low-temperature position FI from the first excited level only."""
        temperature = require_positive_temperature(temperature)
        e1, g1 = self.spectral.algebraic_connectivity(spectrum)
        n = spectrum.order
        eta = spectrum.level_overlaps()[:, 1]
        boltzmann = np.exp(-e1 / temperature)
        partition = 1.0 + g1 * boltzmann
        bracket = float(np.sum(eta ** 2 / (1.0 / n + boltzmann * eta))) - g1 ** 2 / partition
        value = e1 ** 2 * boltzmann ** 2 / (partition * temperature ** 4) * bracket
        return max(value, 0.0)

    # ========== HIGH TEMPERATURE ==========

    def qfi_high_T(self, stats: DegreeStats, order: int, temperature: float) -> float:
        """(sum d^2 + 2M(1 - 2M/N)) / (N T^4)."""
        temperature = require_positive_temperature(temperature)
        m = stats.edge_count
        return (stats.sum_deg_sq + 2.0 * m * (1.0 - 2.0 * m / order)) / (order * temperature ** 4)

    def qfi_high_T_bounds(self, order: int, edge_count: int, temperature: float) -> Tuple[float, float]:
        """
        Degree-free bounds on qfi_high_T.

        Raises:
            ValueError: If M < N - 1 (the graph cannot be connected)
        """
        temperature = require_positive_temperature(temperature)
        n, m = order, edge_count
        if m < n - 1:
            raise ValueError(f"A connected graph needs M >= N - 1, got N={n}, M={m}")
        t4 = temperature ** 4
        lower = 2.0 * m / (n * t4)
        upper = m / t4 * (1.0 - 2.0 * m * (n - 2) / (n * n * (n - 1))) if n > 1 else 0.0
        return lower, upper

    def fi_high_T(self, stats: DegreeStats, order: int, temperature: float) -> float:
        """(N sum d^2 - 4M^2) / (N^2 T^4); zero for regular graphs."""
        temperature = require_positive_temperature(temperature)
        m = stats.edge_count
        numerator = order * stats.sum_deg_sq - 4 * m * m
        return numerator / (order ** 2 * temperature ** 4)

    def ratio_limit(self, stats: DegreeStats, order: int) -> float:
        """
        High-temperature limit of F_c/F_q: 1/(1 + lambda), lambda = 2M/(sum d^2 - 4M^2/N).

        Regular graphs (zero denominator) have identically null FI, so 0.
        """
        m = stats.edge_count
        excess = order * stats.sum_deg_sq - 4 * m * m
        if excess == 0:
            return 0.0
        lam = 2.0 * m * order / excess
        return 1.0 / (1.0 + lam)

    # ========== CLOSED FORMS ==========

    def qfi_complete(self, order: int, temperature: float) -> float:
        """Exact QFI of K_N: N^2 (N-1) e^{-N/T} / (T^4 [1 + (N-1) e^{-N/T}]^2)."""
        temperature = require_positive_temperature(temperature)
        n = require_int_at_least(order, 1, "N")
        boltzmann = np.exp(-n / temperature)
        return float(n * n * (n - 1) * boltzmann / (1.0 + (n - 1) * boltzmann) ** 2 / temperature ** 4)

    def qfi_exact_bipartite(self, n1: int, n2: int, temperature: float) -> float:
        """Exact QFI of K_{N1,N2} from its four energy levels."""
        temperature = require_positive_temperature(temperature)
        n1 = require_int_at_least(n1, 1, "N1")
        n2 = require_int_at_least(n2, 1, "N2")
        if n1 == 1 or n2 == 1:
            return self.qfi_exact_star(n1 + n2, temperature)

        t = temperature
        z = 1.0 + (n2 - 1) * np.exp(-n1 / t) + (n1 - 1) * np.exp(-n2 / t) + np.exp(-(n1 + n2) / t)
        # Z^2 Var(H), cross terms collected on e^{-(N1+N2)/T}
        braces = (
            n1 ** 2 * ((n1 - 1) * np.exp(-(n1 + 2 * n2) / t) + (n2 - 1) * np.exp(-n1 / t))
            + n2 ** 2 * ((n1 - 1) * np.exp(-n2 / t) + (n2 - 1) * np.exp(-(2 * n1 + n2) / t))
            + np.exp(-(n1 + n2) / t) * (
                n1 ** 3 * (n2 - 1) - n2 ** 2 * (n2 - 2)
                + n1 * n2 ** 2 * (n2 + 1) - n1 ** 2 * (2 * n2 ** 2 - n2 - 2)
            )
        )
        return float(braces / (z * z * t ** 4))

    def qfi_exact_star(self, order: int, temperature: float) -> float:
        """Exact QFI of the star S_N (three levels 0, 1, N)."""
        temperature = require_positive_temperature(temperature)
        n = require_int_at_least(order, 2, "N")
        t = temperature
        numerator = (n - 2) * np.exp(-1.0 / t) + (n - 2) * (n - 1) ** 2 * np.exp(-(n + 1) / t) \
            + n * n * np.exp(-n / t)
        denominator = t ** 4 * (1.0 + (n - 2) * np.exp(-1.0 / t) + np.exp(-n / t)) ** 2
        return float(numerator / denominator)

    # ========== COHERENCE ==========

    def gibbs_position_matrix(self, model: ThermalModel) -> np.ndarray:
        """rho_T on the vertex basis: sum_k w_k |e_k><e_k|."""
        vectors = self._require_vectors(model.spectrum)
        rho = (vectors * model.state_weights[None, :]) @ vectors.conj().T
        return rho

    def coherence_l1_normalized(self, rho: np.ndarray) -> float:
        """
        sum_{j != k} |rho_jk| / (N - 1), in [0, 1].

        Raises:
            ValueError: For N = 1 or a non-square matrix
        """
        rho = np.asarray(rho)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError("Density matrix must be square")
        n = rho.shape[0]
        if n < 2:
            raise ValueError("Coherence is undefined for N = 1")
        magnitude = np.abs(rho)
        off_diagonal = magnitude.sum() - np.trace(magnitude)
        # rounding can leave the sum just outside [0, 1]
        return float(np.clip(off_diagonal / (n - 1), 0.0, 1.0))

    def coherence_complete(self, order: int, temperature: float) -> float:
        """Normalized coherence of K_N: |1 - e^{-N/T}| / (1 + (N-1) e^{-N/T})."""
        temperature = require_positive_temperature(temperature)
        boltzmann = np.exp(-order / temperature)
        return float(abs(1.0 - boltzmann) / (1.0 + (order - 1) * boltzmann))

    def complete_graph_qfi_coherence_identity(self, order: int, temperature: float) -> Tuple[float, float]:
        """
        Both sides of T^4 F_q / (N-1) = [1 - C][1 + (N-1) C] for K_N.
        """
        order = require_int_at_least(order, 2, "N")
        lhs = temperature ** 4 * self.qfi_complete(order, temperature) / (order - 1)
        c = self.coherence_complete(order, temperature)
        rhs = (1.0 - c) * (1.0 + (order - 1) * c)
        return lhs, rhs

    # ========== T = 0 LIMITS ==========

    @staticmethod
    def qfi_zero_limit() -> float:
        return 0.0

    @staticmethod
    def fi_zero_limit() -> float:
        return 0.0

    @staticmethod
    def coherence_zero_limit() -> float:
        return 1.0

    @staticmethod
    def gibbs_position_zero_limit(order: int) -> np.ndarray:
        """Projector on the uniform ground state."""
        return np.full((order, order), 1.0 / order)

    # ========== REPORT ==========

    def fisher_report(self, spectrum: Spectrum, stats: DegreeStats, temperature: float,
                      model: Optional[ThermalModel] = None) -> FisherReport:
        """Every figure at one temperature."""
        model = model or self.make_thermal(spectrum, temperature)
        n = spectrum.order
        e1, g1 = self.spectral.algebraic_connectivity(spectrum)
        return FisherReport(
            temperature=model.temperature,
            qfi=self.qfi(model),
            fi_position=self.fi_position(model),
            qfi_low=self.qfi_low_T(e1, g1, model.temperature),
            qfi_high=self.qfi_high_T(stats, n, model.temperature),
            fi_high=self.fi_high_T(stats, n, model.temperature),
            qfi_high_bounds=self.qfi_high_T_bounds(n, stats.edge_count, model.temperature),
            ratio_limit=self.ratio_limit(stats, n),
            coherence_l1_normalized=self.coherence_l1_normalized(self.gibbs_position_matrix(model)),
        )

    # ------------------ helpers ------------------

    @staticmethod
    def _require_vectors(spectrum: Spectrum) -> np.ndarray:
        if spectrum.eigenvectors is None:
            raise SpectrumError("Position-basis quantities need eigenvectors")
        return spectrum.eigenvectors

    def _level_diagonals(self, model: ThermalModel) -> np.ndarray:
        # rows j, columns n: sum over the level of |<j|e_{n,a}>|^2, divided by g_n
        self._require_vectors(model.spectrum)
        return model.spectrum.level_overlaps() / model.spectrum.degeneracies[None, :]

    def _energy_weighted_all(self, model: ThermalModel) -> np.ndarray:
        energies = model.spectrum.level_energies
        return self._level_diagonals(model) @ (model.populations * energies)

    @staticmethod
    def _guarded_ratio(numerators: np.ndarray, probabilities: np.ndarray,
                       reference: np.ndarray) -> np.ndarray:
        vanishing = probabilities < PROBABILITY_FLOOR
        if np.any(vanishing & (np.abs(reference) >= NUMERATOR_FLOOR)):
            raise SpectrumError("Vanishing position probability with non-zero energy weight")
        safe = np.where(vanishing, 1.0, probabilities)
        return np.where(vanishing, 0.0, numerators / safe)
