"""
Spectral service: Laplacian spectra of graphs.

Closed forms are used for the families that have them (complete, cycle,
path, complete bipartite, star, and products of those, which covers grid and
torus); everything else goes through a dense symmetric eigensolver.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg

from src.config import get_settings
from src.exceptions import SpectrumError, UnsupportedFamilyError
from src.models.graph import BoundaryCondition, Graph, GraphFamily
from src.models.spectrum import Level, Spectrum, SpectrumSource
from src.services.graph_service import GraphService

logger = logging.getLogger(__name__)


class SpectralService:
    """Service producing Spectrum objects."""

    def __init__(self, graph_service: Optional[GraphService] = None,
                 group_tol: Optional[float] = None):
        self.graphs = graph_service or GraphService()
        self.group_tol = group_tol if group_tol is not None else get_settings().group_tol

    # ========== ENTRY POINT ==========

    def spectrum(self, graph: Graph, prefer_analytic: bool = True,
                 group_tol: Optional[float] = None) -> Spectrum:
        """
        Spectrum of a connected graph, closed form when available.

        Raises:
            ValueError: If the graph is disconnected
        """
        self.graphs.require_connected(graph)
        if prefer_analytic:
            try:
                return self.analytic_spectrum(graph, group_tol)
            except UnsupportedFamilyError:
                logger.debug("no closed form for %s, using eigensolver", graph.label())
        return self.numeric_spectrum(graph, group_tol)

    # ========== CLOSED FORMS ==========

    def analytic_spectrum(self, graph: Graph, group_tol: Optional[float] = None) -> Spectrum:
        """
        Closed-form eigenpairs.

        Raises:
            UnsupportedFamilyError: If the family has no closed form here
        """
        tol = self._tol(group_tol)
        energies, vectors = self._analytic_pairs(graph)
        order = np.argsort(energies, kind='stable')
        return self._assemble(energies[order], vectors[:, order], SpectrumSource.ANALYTIC, tol)

    def _analytic_pairs(self, graph: Graph) -> Tuple[np.ndarray, np.ndarray]:
        family = graph.family
        n = graph.order

        if family in (GraphFamily.COMPLETE, GraphFamily.CYCLE):
            return self._circulant_pairs(graph)

        if family is GraphFamily.PATH:
            k = np.arange(n)
            energies = 2.0 * (1.0 - np.cos(np.pi * k / n))
            j = np.arange(n)[:, None]
            vectors = np.cos(np.pi * k[None, :] * (2 * j + 1) / (2 * n))
            vectors *= np.where(k == 0, np.sqrt(1.0 / n), np.sqrt(2.0 / n))[None, :]
            return energies, vectors

        if family is GraphFamily.BIPARTITE:
            n1, n2 = graph.params
            return self._bipartite_pairs(n1, n2)

        if family is GraphFamily.STAR:
            return self._bipartite_pairs(1, n - 1)

        if family in (GraphFamily.GRID, GraphFamily.TORUS):
            m, cols = graph.params
            factor = 'cycle' if graph.bc is BoundaryCondition.PBC else 'path'
            left = self.graphs.build_family(f"{factor}:{m}")
            right = self.graphs.build_family(f"{factor}:{cols}")
            return self._product_pairs(left, right)

        if family is GraphFamily.PRODUCT:
            left, right = graph.params
            return self._product_pairs(left, right)

        raise UnsupportedFamilyError(f"No closed-form spectrum for family '{family.value}'")

    @staticmethod
    def _circulant_pairs(graph: Graph) -> Tuple[np.ndarray, np.ndarray]:
        # Fourier vectors w^{kj}/sqrt(N), w = exp(2 pi i / N)
        n = graph.order
        k = np.arange(n)
        if graph.family is GraphFamily.CYCLE:
            energies = 2.0 * (1.0 - np.cos(2.0 * np.pi * k / n))
        else:
            energies = np.where(k == 0, 0.0, float(n))
        vectors = np.exp(2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)
        return energies, vectors

    @staticmethod
    def _bipartite_pairs(n1: int, n2: int) -> Tuple[np.ndarray, np.ndarray]:
        """Eigenpairs of K_{n1,n2} with parts {0..n1-1} and {n1..n-1}."""
        n = n1 + n2
        energies: List[float] = [0.0]
        columns: List[np.ndarray] = [np.full(n, 1.0 / np.sqrt(n))]

        # energy n1: zero-sum vectors on the second part
        for step in range(1, n2):
            vector = np.zeros(n)
            vector[n1:n1 + step] = 1.0
            vector[n1 + step] = -step
            columns.append(vector / np.sqrt(step * (step + 1)))
            energies.append(float(n1))

        # energy n2: zero-sum vectors on the first part
        for step in range(1, n1):
            vector = np.zeros(n)
            vector[:step] = 1.0
            vector[step] = -step
            columns.append(vector / np.sqrt(step * (step + 1)))
            energies.append(float(n2))

        top = np.empty(n)
        top[:n1] = np.sqrt(n2 / n1)
        top[n1:] = -np.sqrt(n1 / n2)
        columns.append(top / np.sqrt(n))
        energies.append(float(n))

        return np.array(energies), np.column_stack(columns)

    def _product_pairs(self, left: Graph, right: Graph) -> Tuple[np.ndarray, np.ndarray]:
        # L(G1 x G2) = L1 (x) I + I (x) L2: energies add, vectors are Kronecker products
        first = self.spectrum(left)
        second = self.spectrum(right)
        energies = np.add.outer(first.eigenvalues, second.eigenvalues).ravel()
        vectors = np.kron(first.eigenvectors, second.eigenvectors)
        return energies, vectors

    # ========== NUMERIC ==========

    def numeric_spectrum(self, graph: Graph, group_tol: Optional[float] = None) -> Spectrum:
        """
        Dense symmetric eigendecomposition of L = D - A.

        Raises:
            SpectrumError: If L is not symmetric or the solver does not converge
        """
        tol = self._tol(group_tol)
        laplacian = graph.laplacian()
        if not np.array_equal(laplacian, laplacian.T):
            raise SpectrumError(f"Laplacian of {graph.label()} is not symmetric")
        try:
            energies, vectors = linalg.eigh(laplacian)
        except linalg.LinAlgError as exc:
            raise SpectrumError(
                f"Eigensolver failed for {graph.label()} (N={graph.order}, M={graph.edge_count}): {exc}"
            ) from exc
        return self._assemble(energies, vectors, SpectrumSource.NUMERIC, tol)

    # ========== QUERIES ==========

    def algebraic_connectivity(self, spectrum: Spectrum) -> Tuple[float, int]:
        """
        (E_1, g_1): energy and degeneracy of the first excited level.

        Raises:
            ValueError: If the spectrum has a single level (N = 1)
        """
        if len(spectrum.levels) < 2:
            raise ValueError("Algebraic connectivity needs at least two levels")
        level = spectrum.levels[1]
        return level.energy, level.degeneracy

    def level_projector(self, spectrum: Spectrum, level_index: int) -> np.ndarray:
        """Projector onto the eigenspace of one level."""
        if spectrum.eigenvectors is None:
            raise SpectrumError("Spectrum carries no eigenvectors")
        columns = spectrum.eigenvectors[:, spectrum.level_of == level_index]
        return columns @ columns.conj().T

    # ------------------ helpers ------------------

    def _tol(self, group_tol: Optional[float]) -> float:
        tol = self.group_tol if group_tol is None else group_tol
        if not tol > 0:
            raise ValueError(f"group_tol must be positive, got {tol}")
        return tol

    @staticmethod
    def _assemble(energies: np.ndarray, vectors: np.ndarray, source: SpectrumSource,
                  tol: float) -> Spectrum:
        energies = np.array(energies, dtype=float)
        if abs(energies[0]) < tol:
            energies[0] = 0.0
        scale = tol * max(1.0, float(energies[-1]))

        groups: List[List[int]] = [[0]]
        for index in range(1, energies.size):
            if energies[index] - energies[index - 1] <= scale:
                groups[-1].append(index)
            else:
                groups.append([index])

        levels = []
        level_of = np.empty(energies.size, dtype=np.int64)
        for number, members in enumerate(groups):
            mean = 0.0 if number == 0 and energies[0] == 0.0 else float(np.mean(energies[members]))
            levels.append(Level(max(mean, 0.0), len(members)))
            level_of[members] = number

        logger.debug("%s spectrum: %d levels, E1=%s", source.value, len(levels),
                     levels[1].energy if len(levels) > 1 else None)
        return Spectrum(energies, tuple(levels), level_of, vectors, source, tol)
