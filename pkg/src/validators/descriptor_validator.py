"""
Graph descriptor validation utilities.

This module parses the graph descriptor mini-language used by the CLI and
by result files, and the plain-text edge-list format:

    complete:N   cycle:N   path:N   bipartite:N1,N2   star:N
    grid:MxN:obc|pbc   torus:MxN
    tri:MxN:obc|pbc    honey:MxN:obc|pbc   trsq:MxN:obc|pbc
    prod(<desc>,<desc>)
    file:<path>        (edge-list file)

Edge-list text: first line N, then one "u v" pair per line; blank lines and
lines starting with '#' are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from src.exceptions import DescriptorError
from src.models.graph import BoundaryCondition, GraphFamily


@dataclass(frozen=True)
class FamilySpec:
    """
    Parsed descriptor.

    Attributes:
        family: Graph family
        sizes: Integer parameters (N; N1, N2; m, n)
        bc: Boundary condition for lattice families
        factors: The two factor specs of a product
        path: Edge-list file path for `file:` descriptors
    """
    family: GraphFamily
    sizes: Tuple[int, ...] = ()
    bc: Optional[BoundaryCondition] = None
    factors: Tuple['FamilySpec', ...] = ()
    path: Optional[str] = None

    def canonical(self) -> str:
        """Canonical descriptor text."""
        if self.family is GraphFamily.PRODUCT:
            left, right = self.factors
            return f"prod({left.canonical()},{right.canonical()})"
        if self.family is GraphFamily.CUSTOM:
            return f"file:{self.path}"
        if self.family is GraphFamily.BIPARTITE:
            return f"bipartite:{self.sizes[0]},{self.sizes[1]}"
        if self.family is GraphFamily.TORUS:
            return f"torus:{self.sizes[0]}x{self.sizes[1]}"
        if self.family in LATTICE_FAMILIES:
            return f"{self.family.value}:{self.sizes[0]}x{self.sizes[1]}:{self.bc.value}"
        return f"{self.family.value}:{self.sizes[0]}"


LATTICE_FAMILIES = (
    GraphFamily.GRID,
    GraphFamily.TRIANGULAR,
    GraphFamily.HONEYCOMB,
    GraphFamily.TRUNCATED_SQUARE,
)

# Minimum order per single-size family
MIN_ORDER = {
    GraphFamily.COMPLETE: 1,
    GraphFamily.CYCLE: 3,
    GraphFamily.PATH: 1,
    GraphFamily.STAR: 2,
}

_INT = r'\s*(\d+)\s*'
_SIZE_RE = re.compile(rf'^{_INT}$')
_PAIR_RE = re.compile(rf'^{_INT},{_INT}$')
_DIMS_RE = re.compile(r'^\s*(\d+)\s*[xX]\s*(\d+)\s*$')


class DescriptorValidator:
    """Utility class for graph descriptor parsing and validation."""

    @staticmethod
    def parse(text: str) -> FamilySpec:
        """
        Parse a graph descriptor.

        Args:
            text: Descriptor such as 'cycle:8' or 'prod(path:3,cycle:4)'

        Returns:
            FamilySpec with validated parameters

        Raises:
            DescriptorError: If the text is malformed or parameters invalid
        """
        if not text or not isinstance(text, str) or not text.strip():
            raise DescriptorError("Graph descriptor cannot be empty")

        desc = text.strip()

        if desc.startswith('prod(') and desc.endswith(')'):
            return DescriptorValidator._parse_product(desc[5:-1])

        if ':' not in desc:
            raise DescriptorError(f"Malformed descriptor '{desc}': expected '<family>:<params>'")

        name, _, rest = desc.partition(':')
        name = name.strip().lower()

        if name == 'file':
            if not rest.strip():
                raise DescriptorError("file: descriptor needs a path")
            return FamilySpec(GraphFamily.CUSTOM, path=rest.strip())

        if name in ('complete', 'cycle', 'path', 'star'):
            family = GraphFamily(name)
            size = DescriptorValidator._single_size(rest, desc)
            minimum = MIN_ORDER[family]
            if size < minimum:
                raise DescriptorError(f"{name} requires N >= {minimum}, got {size}")
            return FamilySpec(family, (size,))

        if name == 'bipartite':
            match = _PAIR_RE.match(rest)
            if not match:
                raise DescriptorError(f"Malformed descriptor '{desc}': expected bipartite:N1,N2")
            n1, n2 = int(match.group(1)), int(match.group(2))
            if n1 < 1 or n2 < 1:
                raise DescriptorError(f"bipartite requires N1 >= 1 and N2 >= 1, got {n1},{n2}")
            return FamilySpec(GraphFamily.BIPARTITE, (n1, n2))

        if name == 'torus':
            m, n = DescriptorValidator._dims(rest, desc)
            DescriptorValidator.validate_lattice_sides(m, n, BoundaryCondition.PBC)
            return FamilySpec(GraphFamily.TORUS, (m, n), BoundaryCondition.PBC)

        if name in ('grid', 'tri', 'honey', 'trsq'):
            dims, sep, bc_text = rest.rpartition(':')
            if not sep:
                raise DescriptorError(f"Malformed descriptor '{desc}': expected {name}:MxN:obc|pbc")
            try:
                bc = BoundaryCondition(bc_text.strip().lower())
            except ValueError:
                raise DescriptorError(f"Unknown boundary condition '{bc_text}' (use obc or pbc)")
            m, n = DescriptorValidator._dims(dims, desc)
            DescriptorValidator.validate_lattice_sides(m, n, bc)
            family = GraphFamily(name)
            if family is GraphFamily.HONEYCOMB and bc is BoundaryCondition.PBC:
                if m % 2 or n % 2:
                    raise DescriptorError("honey with pbc requires even sides")
            return FamilySpec(family, (m, n), bc)

        raise DescriptorError(f"Unknown graph family '{name}'")

    @staticmethod
    def validate_lattice_sides(m: int, n: int, bc: BoundaryCondition) -> None:
        """
        Lattice sides must be >= 2 (OBC) or >= 3 (PBC, to avoid duplicate edges).

        Raises:
            DescriptorError: If a side is too small
        """
        minimum = 3 if bc is BoundaryCondition.PBC else 2
        if m < minimum or n < minimum:
            raise DescriptorError(
                f"Lattice sides must be >= {minimum} under {bc.value}, got {m}x{n}"
            )

    @staticmethod
    def parse_edge_list(text: str) -> Tuple[int, List[Tuple[int, int]]]:
        """
        Parse edge-list text.

        Returns:
            (N, edges) with edges in file order

        Raises:
            DescriptorError: If the header or a pair line is malformed
        """
        lines = [
            line.strip() for line in text.splitlines()
            if line.strip() and not line.strip().startswith('#')
        ]
        if not lines:
            raise DescriptorError("Edge list is empty")

        header = _SIZE_RE.match(lines[0])
        if not header:
            raise DescriptorError(f"Edge list must start with the vertex count, got '{lines[0]}'")
        order = int(header.group(1))

        edges = []
        for number, line in enumerate(lines[1:], start=2):
            parts = line.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise DescriptorError(f"Line {number}: expected 'u v', got '{line}'")
            edges.append((int(parts[0]), int(parts[1])))
        return order, edges

    # ------------------ helpers ------------------

    @staticmethod
    def _single_size(rest: str, desc: str) -> int:
        match = _SIZE_RE.match(rest)
        if not match:
            raise DescriptorError(f"Malformed descriptor '{desc}': expected a vertex count")
        return int(match.group(1))

    @staticmethod
    def _dims(text: str, desc: str) -> Tuple[int, int]:
        match = _DIMS_RE.match(text)
        if not match:
            raise DescriptorError(f"Malformed descriptor '{desc}': expected MxN dimensions")
        return int(match.group(1)), int(match.group(2))

    @staticmethod
    def _parse_product(inner: str) -> FamilySpec:
        # Factors may contain commas themselves (bipartite:N1,N2), so try every
        # top-level comma until both halves parse.
        depth = 0
        last_error: Optional[DescriptorError] = None
        for index, char in enumerate(inner):
            if char == '(':
                depth += 1
            elif char == ')':
                depth -= 1
            elif char == ',' and depth == 0:
                try:
                    left = DescriptorValidator.parse(inner[:index])
                    right = DescriptorValidator.parse(inner[index + 1:])
                except DescriptorError as exc:
                    last_error = exc
                    continue
                return FamilySpec(GraphFamily.PRODUCT, factors=(left, right))
        detail = f": {last_error}" if last_error else ""
        raise DescriptorError(f"Malformed product 'prod({inner})'{detail}")
