"""
Graph service for construction and topology statistics.

This module builds the named graph families, lattice patches and Cartesian
products, and computes the statistics the thermometry formulas need.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from src.models.graph import (
    BoundaryCondition,
    DegreeStats,
    Graph,
    GraphFamily,
    normalize_edge,
)
from src.repositories.edge_list_repository import EdgeListRepository
from src.services.lattice_service import LatticeService
from src.validators.descriptor_validator import DescriptorValidator, FamilySpec

logger = logging.getLogger(__name__)


def _edges_of(graph: nx.Graph) -> frozenset:
    return frozenset(normalize_edge(int(u), int(v)) for u, v in graph.edges())


class GraphService:
    """
    Service layer for graph construction.

    Graphs are immutable once built and can be shared freely between threads.
    """

    def __init__(
        self,
        lattice_service: Optional[LatticeService] = None,
        edge_list_repository: Optional[EdgeListRepository] = None,
    ):
        self.lattices = lattice_service or LatticeService()
        self.edge_lists = edge_list_repository or EdgeListRepository()

    # ========== CONSTRUCTION ==========

    def parse(self, descriptor: str) -> Graph:
        """Build a graph straight from descriptor text."""
        return self.build_family(DescriptorValidator.parse(descriptor))

    def build_family(self, spec: FamilySpec | str) -> Graph:
        """
        Build a graph from a family descriptor.

        Args:
            spec: Parsed FamilySpec or descriptor text

        Returns:
            Graph with its family tag, parameters and canonical descriptor

        Raises:
            DescriptorError: If the descriptor is invalid
        """
        if isinstance(spec, str):
            spec = DescriptorValidator.parse(spec)

        family = spec.family
        descriptor = spec.canonical()

        if family is GraphFamily.COMPLETE:
            (n,) = spec.sizes
            graph = Graph(n, _edges_of(nx.complete_graph(n)), family, (n,), descriptor=descriptor)
        elif family is GraphFamily.CYCLE:
            (n,) = spec.sizes
            graph = Graph(n, _edges_of(nx.cycle_graph(n)), family, (n,), descriptor=descriptor)
        elif family is GraphFamily.PATH:
            (n,) = spec.sizes
            graph = Graph(n, _edges_of(nx.path_graph(n)), family, (n,), descriptor=descriptor)
        elif family is GraphFamily.BIPARTITE:
            n1, n2 = spec.sizes
            graph = Graph(n1 + n2, _edges_of(nx.complete_bipartite_graph(n1, n2)),
                          family, (n1, n2), descriptor=descriptor)
        elif family is GraphFamily.STAR:
            # S_N is K_{1,N-1}: centre 0, leaves 1..N-1
            (n,) = spec.sizes
            graph = Graph(n, _edges_of(nx.complete_bipartite_graph(1, n - 1)),
                          family, (n,), descriptor=descriptor)
        elif family in (GraphFamily.GRID, GraphFamily.TORUS):
            graph = self._square_lattice(spec, descriptor)
        elif family is GraphFamily.TRIANGULAR:
            m, n = spec.sizes
            graph = Graph(m * n, frozenset(self.lattices.triangular_edges(m, n, spec.bc)),
                          family, (m, n), spec.bc, descriptor)
        elif family is GraphFamily.HONEYCOMB:
            m, n = spec.sizes
            graph = Graph(m * n, frozenset(self.lattices.honeycomb_edges(m, n, spec.bc)),
                          family, (m, n), spec.bc, descriptor)
        elif family is GraphFamily.TRUNCATED_SQUARE:
            m, n = spec.sizes
            order, edges = self.lattices.truncated_square_edges(m, n, spec.bc)
            graph = Graph(order, frozenset(edges), family, (m, n), spec.bc, descriptor)
        elif family is GraphFamily.PRODUCT:
            left, right = (self.build_family(factor) for factor in spec.factors)
            graph = self.cartesian_product(left, right)
        elif family is GraphFamily.CUSTOM:
            graph = self.edge_lists.load(spec.path)
        else:
            raise ValueError(f"Unsupported family {family}")

        logger.debug("built %r", graph)
        return graph

    def _square_lattice(self, spec: FamilySpec, descriptor: str) -> Graph:
        # grid = P_m x P_n, torus (or grid with pbc) = C_m x C_n
        m, n = spec.sizes
        bc = spec.bc or BoundaryCondition.PBC
        factor = 'cycle' if bc is BoundaryCondition.PBC else 'path'
        product = self.cartesian_product(
            self.build_family(f"{factor}:{m}"), self.build_family(f"{factor}:{n}")
        )
        return Graph(product.order, product.edges, spec.family, (m, n), bc, descriptor)

    def cartesian_product(self, first: Graph, second: Graph) -> Graph:
        """
        Cartesian product G1 x G2.

        Vertex (j, k) gets index j*N2 + k; (j, k) ~ (j', k') iff j = j' and
        k ~ k' in G2, or k = k' and j ~ j' in G1.
        """
        product = nx.cartesian_product(first.to_networkx(), second.to_networkx())
        n2 = second.order
        mapping = {(j, k): j * n2 + k for j, k in product.nodes()}
        relabeled = nx.relabel_nodes(product, mapping)
        descriptor = f"prod({first.label()},{second.label()})"
        return Graph(first.order * n2, _edges_of(relabeled), GraphFamily.PRODUCT,
                     (first, second), descriptor=descriptor)

    def from_edge_list(self, order: int, edges: Sequence[tuple]) -> Graph:
        """Custom graph from explicit edges."""
        return Graph(order, frozenset(normalize_edge(int(u), int(v)) for u, v in edges),
                     GraphFamily.CUSTOM)

    def relabel(self, graph: Graph, permutation: Sequence[int]) -> Graph:
        """
        Move vertex v to label permutation[v]; the result is tagged custom.

        Raises:
            ValueError: If permutation is not a permutation of 0..N-1
        """
        if sorted(permutation) != list(range(graph.order)):
            raise ValueError("Relabeling must be a permutation of the vertex labels")
        edges = frozenset(normalize_edge(permutation[u], permutation[v]) for u, v in graph.edges)
        return Graph(graph.order, edges, GraphFamily.CUSTOM)

    # ========== TOPOLOGY STATISTICS ==========

    def degree_stats(self, graph: Graph) -> DegreeStats:
        degrees = graph.degrees
        return DegreeStats(
            edge_count=graph.edge_count,
            degrees=degrees,
            sum_deg=sum(degrees),
            sum_deg_sq=sum(d * d for d in degrees),
        )

    def is_connected(self, graph: Graph) -> bool:
        """Breadth-first reachability from vertex 0 covers every vertex."""
        reached = nx.node_connected_component(graph.to_networkx(), 0)
        return len(reached) == graph.order

    def is_circulant_labeled(self, graph: Graph) -> bool:
        """
        True iff every adjacency row is the right cyclic shift of the row above.

        Only the given labeling is tested.
        """
        adjacency = graph.adjacency_matrix()
        for row in range(1, graph.order):
            if not np.array_equal(adjacency[row], np.roll(adjacency[row - 1], 1)):
                return False
        return True

    def require_connected(self, graph: Graph) -> Graph:
        """
        Raises:
            ValueError: If the graph is disconnected
        """
        if not self.is_connected(graph):
            raise ValueError(f"Graph {graph.label()} is not connected")
        return graph
