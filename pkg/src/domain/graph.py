"""
Graph Core Module

Immutable simple undirected graphs stored as bitset adjacency rows, and the
three graph products built on top of them:
- Graph value type with neighbourhood, component and colouring helpers
- ProductKind / ProductGraph with the fixed (a, v) -> a * n2 + v pairing
- product, iterated_product and square constructions
- basic_params summary of the structural parameters

Python integers are unbounded, so the same bitset representation serves both
exhaustive searches and large constructions.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx

from domain.errors import GraphSizeError, ParameterError

MAX_ORDER = 1 << 20


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Graph:
    """
    Simple undirected graph on vertices 0..n-1.

    Attributes:
        n (int): Number of vertices
        adj (Tuple[int, ...]): Neighbour bitset of every vertex
    """

    n: int
    adj: Tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise ParameterError(
                f"Adjacency has {len(self.adj)} rows for {self.n} vertices"
            )
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ParameterError(f"Vertex {v} has a neighbour outside [0, {self.n})")
            if (row >> v) & 1:
                raise ParameterError(f"Loop at vertex {v}")
            for u in iter_bits(row):
                if not (self.adj[u] >> v) & 1:
                    raise ParameterError(f"Asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        """Build a graph from an edge iterable.

        Raises:
            ParameterError: On loops or endpoints outside [0, n)
        """
        if n < 0:
            raise ParameterError(f"Vertex count must be non-negative, got {n}")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"Edge ({u}, {v}) outside [0, {n})")
            if u == v:
                raise ParameterError(f"Loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, tuple([0] * n))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        nodes = list(graph.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        return cls.from_edges(
            len(nodes), ((index[u], index[v]) for u, v in graph.edges() if u != v)
        )

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def m(self) -> int:
        return sum(popcount(row) for row in self.adj) // 2

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def neighbors(self, v: int) -> List[int]:
        return list(iter_bits(self.adj[v]))

    def closed_neighborhood(self, v: int) -> int:
        return self.adj[v] | (1 << v)

    def neighborhood_of(self, mask: int) -> int:
        """Vertices adjacent to some vertex of mask, mask itself excluded."""
        out = 0
        for v in iter_bits(mask):
            out |= self.adj[v]
        return out & ~mask

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    @property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    @property
    def min_degree(self) -> int:
        return min((self.degree(v) for v in range(self.n)), default=0)

    def reach(self, start: int, allowed: int) -> int:
        """Connected component of start inside the vertex set allowed | {start}."""
        allowed |= 1 << start
        seen = 1 << start
        frontier = seen
        while frontier:
            grow = self.neighborhood_of(frontier) & allowed & ~seen
            seen |= grow
            frontier = grow
        return seen

    def component_masks(self, within: Optional[int] = None) -> List[int]:
        remaining = self.vertex_mask if within is None else within
        comps = []
        while remaining:
            start = (remaining & -remaining).bit_length() - 1
            comp = self.reach(start, remaining)
            comps.append(comp)
            remaining &= ~comp
        return comps

    def components(self) -> List[List[int]]:
        return [list(iter_bits(c)) for c in self.component_masks()]

    def is_connected_set(self, mask: int) -> bool:
        if not mask:
            return False
        start = (mask & -mask).bit_length() - 1
        return self.reach(start, mask) == mask

    @property
    def is_connected(self) -> bool:
        return len(self.component_masks()) <= 1

    def two_colouring(self) -> Optional[List[int]]:
        """Proper 2-colouring (0/1 per vertex) or None when an odd cycle exists."""
        colour = [-1] * self.n
        for root in range(self.n):
            if colour[root] >= 0:
                continue
            colour[root] = 0
            stack = [root]
            while stack:
                v = stack.pop()
                for u in iter_bits(self.adj[v]):
                    if colour[u] < 0:
                        colour[u] = 1 - colour[v]
                        stack.append(u)
                    elif colour[u] == colour[v]:
                        return None
        return colour

    def induced(self, vertices: Sequence[int]) -> Tuple["Graph", List[int]]:
        """Induced subgraph on vertices, relabelled in the given order."""
        order = list(vertices)
        index = {v: i for i, v in enumerate(order)}
        rows = []
        for v in order:
            row = 0
            for u in iter_bits(self.adj[v]):
                if u in index:
                    row |= 1 << index[u]
            rows.append(row)
        return Graph(len(order), tuple(rows)), order

    def with_edges(self, edges: Iterable[Tuple[int, int]]) -> "Graph":
        return Graph.from_edges(self.n, list(self.edges()) + list(edges))

    def disjoint_union(self, other: "Graph") -> "Graph":
        shifted = tuple(row << self.n for row in other.adj)
        return Graph(self.n + other.n, self.adj + shifted)

    def is_subgraph_of(self, other: "Graph") -> bool:
        """Same vertex set, edge set contained in other's."""
        return self.n == other.n and all(
            row & ~big == 0 for row, big in zip(self.adj, other.adj)
        )


class ProductKind(Enum):
    CARTESIAN = "cartesian"
    DIRECT = "direct"
    STRONG = "strong"


@dataclass(frozen=True)
class ProductGraph:
    """
    A product graph together with its factors.

    Vertex (a, v) with a in G1 and v in G2 has id a * n2 + v.
    """

    base: Graph
    factors: Tuple[Graph, Graph]
    kind: ProductKind

    def pair(self, a: int, v: int) -> int:
        return a * self.factors[1].n + v

    def unpair(self, x: int) -> Tuple[int, int]:
        return divmod(x, self.factors[1].n)

    def projection(self, vertices: Iterable[int], which: int) -> Set[int]:
        return {self.unpair(x)[which] for x in vertices}

    def is_aligned(self, vertices: Iterable[int]) -> bool:
        """True when all vertices share their first or their second coordinate."""
        pairs = [self.unpair(x) for x in vertices]
        return len({a for a, _ in pairs}) <= 1 or len({v for _, v in pairs}) <= 1


def product(g1: Graph, g2: Graph, kind: ProductKind) -> ProductGraph:
    """Build the cartesian, direct or strong product of two graphs.

    Raises:
        GraphSizeError: When n1 * n2 exceeds MAX_ORDER
    """
    n1, n2 = g1.n, g2.n
    if n1 * n2 > MAX_ORDER:
        raise GraphSizeError(f"Product order {n1 * n2} exceeds {MAX_ORDER}")
    steps_first = kind in (ProductKind.CARTESIAN, ProductKind.STRONG)
    steps_both = kind in (ProductKind.DIRECT, ProductKind.STRONG)
    rows = []
    for a in range(n1):
        others = list(iter_bits(g1.adj[a]))
        for v in range(n2):
            row = 0
            if steps_first:
                row |= g2.adj[v] << (a * n2)
                for b in others:
                    row |= 1 << (b * n2 + v)
            if steps_both:
                for b in others:
                    row |= g2.adj[v] << (b * n2)
            rows.append(row)
    return ProductGraph(Graph(n1 * n2, tuple(rows)), (g1, g2), kind)


def iterated_product(graphs: Sequence[Graph], kind: ProductKind) -> Graph:
    """Fold the binary product left to right over graphs."""
    if not graphs:
        raise ParameterError("iterated_product needs at least one graph")
    result = graphs[0]
    for g in graphs[1:]:
        result = product(result, g, kind).base
    return result


def square(g: Graph) -> Graph:
    rows = []
    for v in range(g.n):
        row = g.adj[v]
        for u in iter_bits(g.adj[v]):
            row |= g.adj[u]
        rows.append(row & ~(1 << v))
    return Graph(g.n, tuple(rows))


@dataclass
class GraphParams:
    n: int
    m: int
    max_degree: int
    min_degree: int
    components: List[List[int]]
    max_component_order: int
    is_connected: bool
    colouring: Optional[List[int]]

    @property
    def is_bipartite(self) -> bool:
        return self.colouring is not None

    def as_dict(self) -> Dict:
        return {
            "n": self.n,
            "m": self.m,
            "max_degree": self.max_degree,
            "min_degree": self.min_degree,
            "components": self.components,
            "max_component_order": self.max_component_order,
            "is_connected": self.is_connected,
            "is_bipartite": self.is_bipartite,
            "colouring": self.colouring,
        }


def basic_params(g: Graph) -> GraphParams:
    comps = g.components()
    return GraphParams(
        n=g.n,
        m=g.m,
        max_degree=g.max_degree,
        min_degree=g.min_degree,
        components=comps,
        max_component_order=max((len(c) for c in comps), default=0),
        is_connected=len(comps) <= 1,
        colouring=g.two_colouring(),
    )
