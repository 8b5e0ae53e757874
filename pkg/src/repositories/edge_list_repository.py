"""
Edge-list repository: graphs stored as plain text files.

Format: first line N, then one `u v` pair per line.
"""

from __future__ import annotations

from pathlib import Path

from src.models.graph import Graph, GraphFamily
from src.repositories.base_repository import BaseRepository
from src.validators.descriptor_validator import DescriptorValidator


class EdgeListRepository(BaseRepository):
    """Repository for edge-list graph files."""

    def load(self, path: str | Path) -> Graph:
        """
        Load a graph from an edge-list file.

        Raises:
            DescriptorError: If the content is malformed
            ValueError: If the edges violate Graph invariants
            OSError: If the file cannot be read
        """
        order, edges = DescriptorValidator.parse_edge_list(self.read_text(path))
        return Graph(order, _as_set(edges), GraphFamily.CUSTOM, descriptor=f"file:{path}")

    def save(self, graph: Graph, path: str | Path) -> Path:
        lines = [str(graph.order)] + [f"{u} {v}" for u, v in sorted(graph.edges)]
        return self.write_text(path, "\n".join(lines) + "\n")


def _as_set(edges):
    seen = set()
    for u, v in edges:
        pair = (min(u, v), max(u, v))
        if pair in seen:
            raise ValueError(f"Duplicate edge {pair} in edge list")
        seen.add(pair)
    return frozenset(seen)
