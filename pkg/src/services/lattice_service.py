"""
Lattice service: finite two-dimensional lattice patches.

Patch conventions (vertex (i, j) of an m x n array has index i*n + j):
- triangular: square grid plus the diagonal (i, j)-(i+1, j+1) in every cell,
  interior degree 6
- honeycomb: brick wall; all horizontal bonds, vertical bond (i, j)-(i+1, j)
  only when i + j is even, interior degree 3
- truncated square (4.8.8): an m x n array of square cells with four vertices
  each (left, down, right, up); neighbouring cells are joined right->left and
  up->down, so octagons close between cells, interior degree 3. Vertex index
  is 4*(a*n + b) + corner.

Under PBC the bonds wrap around both directions.
"""

from __future__ import annotations

import logging
from typing import Set, Tuple

from src.models.graph import BoundaryCondition, Edge, normalize_edge

logger = logging.getLogger(__name__)

# Corner offsets inside a truncated-square cell
LEFT, DOWN, RIGHT, UP = 0, 1, 2, 3


class LatticeService:
    """Builders for lattice edge sets."""

    def square_edges(self, m: int, n: int, bc: BoundaryCondition) -> Set[Edge]:
        """Edges of the m x n square lattice."""
        edges: Set[Edge] = set()
        for i in range(m):
            for j in range(n):
                self._bond(edges, (i, j), (i, j + 1), m, n, bc)
                self._bond(edges, (i, j), (i + 1, j), m, n, bc)
        return edges

    def triangular_edges(self, m: int, n: int, bc: BoundaryCondition) -> Set[Edge]:
        """Square lattice plus one fixed diagonal per unit cell."""
        edges = self.square_edges(m, n, bc)
        for i in range(m):
            for j in range(n):
                self._bond(edges, (i, j), (i + 1, j + 1), m, n, bc)
        logger.debug("triangular %dx%d %s: %d edges", m, n, bc.value, len(edges))
        return edges

    def honeycomb_edges(self, m: int, n: int, bc: BoundaryCondition) -> Set[Edge]:
        """Brick-wall embedding of the honeycomb lattice."""
        edges: Set[Edge] = set()
        for i in range(m):
            for j in range(n):
                self._bond(edges, (i, j), (i, j + 1), m, n, bc)
                if (i + j) % 2 == 0:
                    self._bond(edges, (i, j), (i + 1, j), m, n, bc)
        logger.debug("honeycomb %dx%d %s: %d edges", m, n, bc.value, len(edges))
        return edges

    def truncated_square_edges(self, m: int, n: int, bc: BoundaryCondition) -> Tuple[int, Set[Edge]]:
        """
        4.8.8 tiling patch.

        Returns:
            (vertex count 4*m*n, edges)
        """
        def vertex(a: int, b: int, corner: int) -> int:
            return 4 * (a * n + b) + corner

        edges: Set[Edge] = set()
        for a in range(m):
            for b in range(n):
                # square cell
                ring = [LEFT, DOWN, RIGHT, UP]
                for k in range(4):
                    edges.add(normalize_edge(vertex(a, b, ring[k]), vertex(a, b, ring[(k + 1) % 4])))
                # links closing the octagons
                right = self._wrap(a, b + 1, m, n, bc)
                if right is not None:
                    edges.add(normalize_edge(vertex(a, b, RIGHT), vertex(*right, LEFT)))
                up = self._wrap(a + 1, b, m, n, bc)
                if up is not None:
                    edges.add(normalize_edge(vertex(a, b, UP), vertex(*up, DOWN)))
        logger.debug("truncated square %dx%d %s: %d edges", m, n, bc.value, len(edges))
        return 4 * m * n, edges

    # ------------------ helpers ------------------

    @staticmethod
    def _wrap(i: int, j: int, m: int, n: int, bc: BoundaryCondition):
        if bc is BoundaryCondition.PBC:
            return i % m, j % n
        if 0 <= i < m and 0 <= j < n:
            return i, j
        return None

    def _bond(self, edges: Set[Edge], site: Tuple[int, int], other: Tuple[int, int],
              m: int, n: int, bc: BoundaryCondition) -> None:
        target = self._wrap(other[0], other[1], m, n, bc)
        if target is None:
            return
        u = site[0] * n + site[1]
        v = target[0] * n + target[1]
        if u != v:
            edges.add(normalize_edge(u, v))
