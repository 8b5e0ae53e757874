"""
Graph model and validation.

This module defines the Graph entity (a labeled simple undirected graph with
family provenance) and the DegreeStats summary used by the high-temperature
formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import FrozenSet, Optional, Tuple

import networkx as nx
import numpy as np


class BoundaryCondition(str, Enum):
    """Boundary conditions for lattice patches."""
    OBC = "obc"
    PBC = "pbc"


class GraphFamily(str, Enum):
    """Provenance tags for constructed graphs."""
    COMPLETE = "complete"
    CYCLE = "cycle"
    PATH = "path"
    BIPARTITE = "bipartite"
    STAR = "star"
    GRID = "grid"
    TORUS = "torus"
    TRIANGULAR = "tri"
    HONEYCOMB = "honey"
    TRUNCATED_SQUARE = "trsq"
    PRODUCT = "prod"
    CUSTOM = "custom"


# Families whose adjacency matrix is circulant under the canonical labeling
CIRCULANT_FAMILIES = (GraphFamily.COMPLETE, GraphFamily.CYCLE)


Edge = Tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    """Return the edge as an ordered (min, max) pair."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """
    Labeled simple undirected graph on vertices 0..order-1.

    Attributes:
        order: Vertex count N
        edges: Unordered vertex pairs stored as (u, v) with u < v
        family: Provenance tag
        params: Family parameters (sizes; factor graphs for products)
        bc: Boundary condition for lattice families
    """
    order: int
    edges: FrozenSet[Edge]
    family: GraphFamily = GraphFamily.CUSTOM
    params: Tuple = ()
    bc: Optional[BoundaryCondition] = None
    descriptor: str = field(default="", compare=False)

    def __post_init__(self):
        """Validate and normalize the edge set."""
        if not isinstance(self.order, (int, np.integer)) or isinstance(self.order, bool):
            raise ValueError("Graph order must be an integer")
        if self.order < 1:
            raise ValueError(f"Graph order must be positive, got {self.order}")

        normalized = set()
        for edge in self.edges:
            if len(edge) != 2:
                raise ValueError(f"Edge must be a vertex pair, got {edge!r}")
            u, v = int(edge[0]), int(edge[1])
            if u == v:
                raise ValueError(f"Self-loop on vertex {u} is not allowed")
            for vertex in (u, v):
                if not 0 <= vertex < self.order:
                    raise ValueError(
                        f"Vertex {vertex} out of range for order {self.order}"
                    )
            pair = normalize_edge(u, v)
            if pair in normalized:
                raise ValueError(f"Duplicate edge {pair}")
            normalized.add(pair)

        object.__setattr__(self, 'order', int(self.order))
        object.__setattr__(self, 'edges', frozenset(normalized))
        object.__setattr__(self, 'family', GraphFamily(self.family))
        if self.bc is not None:
            object.__setattr__(self, 'bc', BoundaryCondition(self.bc))

    @property
    def edge_count(self) -> int:
        """Number of edges M."""
        return len(self.edges)

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        """Degree sequence d_0..d_{N-1}."""
        counts = [0] * self.order
        for u, v in self.edges:
            counts[u] += 1
            counts[v] += 1
        return tuple(counts)

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix."""
        adjacency = np.zeros((self.order, self.order), dtype=np.int64)
        for u, v in self.edges:
            adjacency[u, v] = 1
            adjacency[v, u] = 1
        return adjacency

    def laplacian(self) -> np.ndarray:
        """Laplacian L = D - A as a float matrix."""
        adjacency = self.adjacency_matrix()
        return (np.diag(adjacency.sum(axis=1)) - adjacency).astype(float)

    def to_networkx(self) -> nx.Graph:
        """Equivalent networkx graph with the same integer labels."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.order))
        graph.add_edges_from(sorted(self.edges))
        return graph

    @property
    def is_regular(self) -> bool:
        return len(set(self.degrees)) == 1

    def label(self) -> str:
        """Descriptor if known, otherwise a short custom tag."""
        if self.descriptor:
            return self.descriptor
        return f"custom:N={self.order},M={self.edge_count}"

    def __repr__(self) -> str:
        return (f"Graph(label='{self.label()}', order={self.order}, "
                f"edges={self.edge_count}, family={self.family.value})")


@dataclass(frozen=True)
class DegreeStats:
    """
    Degree summary of a graph.

    Attributes:
        edge_count: M
        degrees: Degree sequence
        sum_deg: Sum of degrees (= 2M)
        sum_deg_sq: Sum of squared degrees
    """
    edge_count: int
    degrees: Tuple[int, ...]
    sum_deg: int
    sum_deg_sq: int

    def __post_init__(self):
        if self.sum_deg != 2 * self.edge_count:
            raise ValueError(
                f"Handshake violated: sum of degrees {self.sum_deg} != 2M = {2 * self.edge_count}"
            )
        if self.sum_deg != sum(self.degrees):
            raise ValueError("sum_deg does not match the degree sequence")
        if self.sum_deg_sq != sum(d * d for d in self.degrees):
            raise ValueError("sum_deg_sq does not match the degree sequence")

    @property
    def order(self) -> int:
        return len(self.degrees)

    def squared_degree_bounds(self) -> Tuple[float, float]:
        """
        Lower and upper bounds on the squared-degree sum.

        Returns:
            (4M^2/N, M(2M/(N-1) + N - 2)); the upper bound needs N >= 2
        """
        n, m = self.order, self.edge_count
        lower = 4.0 * m * m / n
        upper = m * (2.0 * m / (n - 1) + n - 2) if n > 1 else 0.0
        return lower, upper

    def to_dict(self) -> dict:
        return {
            'M': self.edge_count,
            'degrees': list(self.degrees),
            'sum_deg': self.sum_deg,
            'sum_deg_sq': self.sum_deg_sq,
        }
