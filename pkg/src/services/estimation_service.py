"""
Estimation service: Monte Carlo check of the Cramer-Rao chain.

Outcomes are drawn i.i.d. from the Gibbs model (energy level or walker
position), the temperature is recovered by maximum likelihood, and the
estimator variance is compared with 1/(M F).
"""

from __future__ import annotations

import logging
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import optimize
from scipy.special import logsumexp

from src.exceptions import EstimationError
from src.models.estimation import (
    CrbReport,
    EstimationTrial,
    MeasurementKind,
    OutcomeSample,
)
from src.models.graph import Graph
from src.models.spectrum import Spectrum
from src.models.thermal import ThermalModel
from src.services.spectral_service import SpectralService
from src.services.thermo_service import ThermoService
from src.utils.parallel import ordered_map
from src.utils.seed_generator import SeedGenerator
from src.validators.common_validators import require_int_at_least, require_temperature_range

logger = logging.getLogger(__name__)

MLE_XATOL = 1e-8
# Likelihoods whose spread over the bracket is below this (relative) are flat
FLAT_TOL = 1e-12
SCAN_POINTS = 65
# Estimates this close to a bracket edge (in log T) are edge solutions
EDGE_TOL = 1e-6
MIN_TRIALS = 100

LogProbability = Callable[[float], np.ndarray]


class EstimationService:
    """Sampling, MLE and CRB experiments."""

    def __init__(self, spectral_service: Optional[SpectralService] = None,
                 thermo_service: Optional[ThermoService] = None,
                 threads: Optional[int] = None):
        self.spectral = spectral_service or SpectralService()
        self.thermo = thermo_service or ThermoService(self.spectral)
        self.threads = threads

    # ========== SAMPLING ==========

    def outcome_probabilities(self, model: ThermalModel, kind: MeasurementKind) -> np.ndarray:
        """Level populations (energy) or p(j|T) (position)."""
        kind = MeasurementKind(kind)
        if kind is MeasurementKind.ENERGY:
            probabilities = np.asarray(model.populations, dtype=float)
        else:
            probabilities = self.thermo.position_probabilities(model)
        probabilities = np.clip(probabilities, 0.0, None)
        return probabilities / probabilities.sum()

    def sample_outcomes(self, model: ThermalModel, kind: MeasurementKind, shots: int,
                        seed: int) -> OutcomeSample:
        """
        Draw M i.i.d. outcomes.

        Energy outcomes are level indices (the eigenbasis projectors grouped
        by level); position outcomes are vertices.

        Raises:
            ValueError: If M < 1 or the seed is invalid
        """
        shots = require_int_at_least(shots, 1, "M")
        rng = SeedGenerator.generator(seed)
        return self._draw(model, MeasurementKind(kind), shots, seed, rng)

    def _draw(self, model: ThermalModel, kind: MeasurementKind, shots: int, seed: int,
              rng: np.random.Generator, probabilities: Optional[np.ndarray] = None) -> OutcomeSample:
        if probabilities is None:
            probabilities = self.outcome_probabilities(model, kind)
        counts = rng.multinomial(shots, probabilities)
        return OutcomeSample(kind, counts, shots, model.temperature, seed)

    # ========== MAXIMUM LIKELIHOOD ==========

    def log_probability_function(self, spectrum: Spectrum, kind: MeasurementKind) -> LogProbability:
        """
        log p(x|T) over the whole outcome space, as a function of T.

        Raises:
            SpectrumError: For position outcomes without eigenvectors
        """
        log_degeneracies = np.log(spectrum.degeneracies.astype(float))
        energies = spectrum.level_energies

        if MeasurementKind(kind) is MeasurementKind.ENERGY:
            def energy_log_p(temperature: float) -> np.ndarray:
                exponents = log_degeneracies - energies / temperature
                return exponents - logsumexp(exponents)
            return energy_log_p

        # per-state level diagonals: rows are vertices, columns levels
        diagonals = spectrum.level_overlaps() / spectrum.degeneracies[None, :]

        def position_log_p(temperature: float) -> np.ndarray:
            exponents = log_degeneracies - energies / temperature
            with np.errstate(divide='ignore'):
                per_vertex = logsumexp(np.broadcast_to(exponents, diagonals.shape), b=diagonals, axis=1)
            return per_vertex - logsumexp(exponents)
        return position_log_p

    def mle_temperature(self, sample: OutcomeSample, spectrum: Spectrum,
                        bracket: Optional[Tuple[float, float]] = None) -> EstimationTrial:
        """
        Maximize sum_x counts(x) log p(x|T) over T in the bracket.

        Golden-section search on log T, bracketed by the best of 65 scan
        points, to 1e-8 absolute (relative in T). A flat
        likelihood, or a maximum on a bracket edge, returns that edge with
        converged=False.

        Args:
            sample: Outcome counts
            spectrum: Spectrum of the measured graph
            bracket: (T_lo, T_hi), default (true_T/10, 10 true_T)

        Raises:
            EstimationError: If the bracket is invalid or does not match the sample
        """
        log_p = self.log_probability_function(spectrum, sample.kind)
        return self._fit(sample, log_p, bracket)

    def _fit(self, sample: OutcomeSample, log_p: LogProbability,
             bracket: Optional[Tuple[float, float]]) -> EstimationTrial:
        if bracket is None:
            bracket = (sample.true_temperature / 10.0, sample.true_temperature * 10.0)
        try:
            t_lo, t_hi = require_temperature_range(*bracket)
        except ValueError as exc:
            raise EstimationError(f"Invalid MLE bracket {bracket}: {exc}") from exc

        observed = np.flatnonzero(sample.counts)
        weights = sample.counts[observed].astype(float)
        if log_p(t_lo).size != sample.outcome_space_size:
            raise EstimationError("Sample outcome space does not match the spectrum")

        def log_likelihood(log_t: float) -> float:
            return float(np.dot(weights, log_p(np.exp(log_t))[observed]))

        lo, hi = np.log(t_lo), np.log(t_hi)
        grid = np.linspace(lo, hi, SCAN_POINTS)
        scan = np.array([log_likelihood(x) for x in grid])
        if scan.max() - scan.min() < FLAT_TOL * (1.0 + abs(scan.max())):
            logger.debug("flat likelihood over [%g, %g]", t_lo, t_hi)
            return EstimationTrial(t_lo, float(scan[0]), False, 0)

        index = int(np.argmax(scan))
        if index in (0, grid.size - 1):
            edge_value = t_lo if index == 0 else t_hi
            logger.debug("likelihood maximum on the bracket edge T=%g", edge_value)
            return EstimationTrial(edge_value, float(scan[index]), False, 0)

        # golden-section tolerance is relative: search on log T shifted to start at 1
        shift = 1.0 - lo
        try:
            result = optimize.minimize_scalar(
                lambda u: -log_likelihood(u - shift), bracket=tuple(grid[index - 1:index + 2] + shift),
                method='golden', tol=MLE_XATOL,
            )
        except ValueError:
            logger.debug("MLE bracket rejected, keeping scan point T=%g", np.exp(grid[index]))
            return EstimationTrial(float(np.exp(grid[index])), float(scan[index]), False, 0)

        iterations = int(getattr(result, 'nit', result.nfev))
        log_estimate = float(np.clip(result.x - shift, lo, hi))
        best = log_likelihood(log_estimate)
        if best < scan[index]:
            log_estimate, best = float(grid[index]), float(scan[index])

        # a maximum reached on (or flat up to) an edge is an edge solution
        for edge, edge_value in ((lo, t_lo), (hi, t_hi)):
            at_edge = log_likelihood(edge)
            if abs(log_estimate - edge) < EDGE_TOL or at_edge >= best - FLAT_TOL * (1.0 + abs(best)):
                logger.debug("likelihood maximum on the bracket edge T=%g", edge_value)
                return EstimationTrial(edge_value, at_edge, False, iterations)

        return EstimationTrial(float(np.exp(log_estimate)), best, bool(result.success), iterations)

    # ========== CRAMER-RAO EXPERIMENT ==========

    def crb_experiment(self, graph: Graph, temperature: float, kind: MeasurementKind,
                       shots: int, trials: int, seed: int,
                       bracket: Optional[Tuple[float, float]] = None) -> CrbReport:
        """
        Repeat sample-then-estimate and compare Var(T_hat) with the bounds.

        Each trial uses its own generator spawned from the seed, so the report
        only depends on the arguments. Non-converged trials are excluded from
        the variance and counted.

        Raises:
            ValueError: If trials < 100, M < 1 or T <= 0
        """
        kind = MeasurementKind(kind)
        shots = require_int_at_least(shots, 1, "M")
        trials = require_int_at_least(trials, MIN_TRIALS, "trials")
        seed = SeedGenerator.validate_seed(seed)

        spectrum = self.spectral.spectrum(graph)
        model = self.thermo.make_thermal(spectrum, temperature)
        fisher_quantum = self.thermo.qfi(model)
        fisher_measurement = fisher_quantum if kind is MeasurementKind.ENERGY \
            else self.thermo.fi_position(model)

        probabilities = self.outcome_probabilities(model, kind)
        log_p = self.log_probability_function(spectrum, kind)
        children = SeedGenerator.spawn(seed, trials)

        def run_trial(index: int) -> EstimationTrial:
            rng = np.random.default_rng(children[index])
            sample = self._draw(model, kind, shots, seed, rng, probabilities)
            return self._fit(sample, log_p, bracket)

        results = ordered_map(run_trial, range(trials), self.threads)
        estimates = [r.estimate if r.converged else None for r in results]
        kept = np.array([e for e in estimates if e is not None], dtype=float)
        excluded = trials - kept.size
        if excluded:
            logger.info("%d of %d trials did not converge", excluded, trials)

        variance = float(np.var(kept, ddof=1)) if kept.size >= 2 else float('nan')
        mean_estimate = float(kept.mean()) if kept.size else float('nan')

        return CrbReport(
            graph=graph.label(),
            temperature=model.temperature,
            kind=kind,
            shots=shots,
            trials=trials,
            seed=seed,
            fisher_measurement=fisher_measurement,
            fisher_quantum=fisher_quantum,
            variance=variance,
            mean_estimate=mean_estimate,
            crb_measurement=_bound(shots, fisher_measurement),
            crb_quantum=_bound(shots, fisher_quantum),
            efficiency=variance * shots * fisher_measurement,
            excluded_trials=int(excluded),
            estimates=estimates,
        )


def _bound(shots: int, fisher: float) -> float:
    """1/(M F), infinite for a null Fisher information."""
    return 1.0 / (shots * fisher) if fisher > 0 else float('inf')
