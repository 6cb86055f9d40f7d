"""
Named graph families.

Each FamilySpec variant is a frozen dataclass that validates its parameters on
construction and builds the graph with ``build()``. ``generate`` is the single
entry point used by the services and the command line.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import List, Tuple, Union

from domain.errors import ParameterError
from domain.graph import Graph


def _require_non_negative(**values: int) -> None:
    for name, value in values.items():
        if value < 0:
            raise ParameterError(f"{name} must be non-negative, got {value}")


@dataclass(frozen=True)
class PathSpec:
    n: int

    def __post_init__(self):
        _require_non_negative(n=self.n)

    def build(self) -> Graph:
        return Graph.from_edges(self.n, ((i, i + 1) for i in range(self.n - 1)))


@dataclass(frozen=True)
class CycleSpec:
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ParameterError(f"A cycle needs at least 3 vertices, got {self.n}")

    def build(self) -> Graph:
        return Graph.from_edges(self.n, ((i, (i + 1) % self.n) for i in range(self.n)))


@dataclass(frozen=True)
class CompleteSpec:
    n: int

    def __post_init__(self):
        _require_non_negative(n=self.n)

    def build(self) -> Graph:
        return Graph.from_edges(self.n, combinations(range(self.n), 2))


@dataclass(frozen=True)
class CompleteMultipartiteSpec:
    """K_{n1,...,nd} with an extra clique of size overlay joined to every part.

    Parts of size zero are allowed and contribute no vertices.
    """

    parts: Tuple[int, ...]
    overlay: int = 0

    def __post_init__(self):
        _require_non_negative(overlay=self.overlay)
        for size in self.parts:
            _require_non_negative(part=size)

    def build(self) -> Graph:
        groups: List[List[int]] = []
        start = 0
        for size in list(self.parts) + [1] * self.overlay:
            groups.append(list(range(start, start + size)))
            start += size
        edges = [
            (u, v)
            for first, second in combinations(groups, 2)
            for u in first
            for v in second
        ]
        return Graph.from_edges(start, edges)


@dataclass(frozen=True)
class StarSpec:
    """K_{1,b}; vertex 0 is the centre."""

    b: int

    def __post_init__(self):
        _require_non_negative(b=self.b)

    def build(self) -> Graph:
        return Graph.from_edges(self.b + 1, ((0, i) for i in range(1, self.b + 1)))


@dataclass(frozen=True)
class DaddyLonglegsSpec:
    """Spider W^(k): root 0, legs 0 - i - (k + i) for i in 1..k."""

    k: int

    def __post_init__(self):
        _require_non_negative(k=self.k)

    def build(self) -> Graph:
        edges = []
        for i in range(1, self.k + 1):
            edges.append((0, i))
            edges.append((i, self.k + i))
        return Graph.from_edges(2 * self.k + 1, edges)


@dataclass(frozen=True)
class BinaryTreeSpec:
    """Complete binary tree of the given height; vertex i has children 2i + 1 and 2i + 2."""

    height: int

    def __post_init__(self):
        _require_non_negative(height=self.height)

    def build(self) -> Graph:
        n = 2 ** (self.height + 1) - 1
        return Graph.from_edges(n, ((v, (v - 1) // 2) for v in range(1, n)))


@dataclass(frozen=True)
class GridSpec:
    """P_rows □ P_cols; vertex (i, j) has id i * cols + j."""

    rows: int
    cols: int

    def __post_init__(self):
        _require_non_negative(rows=self.rows, cols=self.cols)

    def build(self) -> Graph:
        edges = []
        for i in range(self.rows):
            for j in range(self.cols):
                v = i * self.cols + j
                if j + 1 < self.cols:
                    edges.append((v, v + 1))
                if i + 1 < self.rows:
                    edges.append((v, v + self.cols))
        return Graph.from_edges(self.rows * self.cols, edges)


@dataclass(frozen=True)
class CirculantSpec:
    n: int
    offsets: Tuple[int, ...]

    def __post_init__(self):
        _require_non_negative(n=self.n)
        for offset in self.offsets:
            if not 1 <= offset <= self.n // 2:
                raise ParameterError(f"Offset {offset} outside [1, {self.n // 2}]")

    def build(self) -> Graph:
        edges = set()
        for v in range(self.n):
            for offset in self.offsets:
                u = (v + offset) % self.n
                edges.add((min(u, v), max(u, v)))
        return Graph.from_edges(self.n, sorted(edges))


@dataclass(frozen=True)
class DisjointUnionSpec:
    members: Tuple["FamilySpec", ...]

    def build(self) -> Graph:
        result = Graph.empty(0)
        for member in self.members:
            result = result.disjoint_union(member.build())
        return result


@dataclass(frozen=True)
class GknSpec:
    """Path v_0..v_{n-k-1} (ids 0..n-k-1) plus a clique on v_0 and ids n-k..n-1."""

    k: int
    n: int

    def __post_init__(self):
        _require_non_negative(k=self.k, n=self.n)
        if self.n < self.k + 1:
            raise ParameterError(f"Gkn needs n >= k + 1, got k={self.k}, n={self.n}")

    @property
    def path_length(self) -> int:
        return self.n - self.k

    @property
    def clique(self) -> List[int]:
        return [0] + list(range(self.path_length, self.n))

    def build(self) -> Graph:
        edges = [(i, i + 1) for i in range(self.path_length - 1)]
        edges.extend(combinations(self.clique, 2))
        return Graph.from_edges(self.n, edges)


FamilySpec = Union[
    PathSpec,
    CycleSpec,
    CompleteSpec,
    CompleteMultipartiteSpec,
    StarSpec,
    DaddyLonglegsSpec,
    BinaryTreeSpec,
    GridSpec,
    CirculantSpec,
    DisjointUnionSpec,
    GknSpec,
]


def generate(spec: FamilySpec) -> Graph:
    return spec.build()


def regular_circulant(d: int, n: int = 0) -> Graph:
    """A d-regular circulant, enlarging n until one exists (n > d, n even when d is odd)."""
    _require_non_negative(d=d)
    n = max(n, d + 1)
    if d % 2 == 1 and n % 2 == 1:
        n += 1
    offsets = list(range(1, d // 2 + 1))
    if d % 2 == 1:
        offsets.append(n // 2)
    return generate(CirculantSpec(n, tuple(offsets)))
