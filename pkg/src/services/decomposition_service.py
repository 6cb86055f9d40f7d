"""
Decomposition Service Module

Validation and explicit construction of H-decompositions:
- validate_decomposition: the vertex, connectivity and edge axioms as data
- lift_product: W_t × V(G2) bags for strong (and hence cartesian and direct) products
- lift_square: closed-neighbourhood bags for the square of a graph
- vc_subdivision_decomp: vertex-cover based decomposition of a direct product
  on a subdivided host
- gkn_decomposition: the three-legged tree decomposition of G_{k,n} ⊠ G_{k,n}
- strong_grid_decomposition: path decompositions of d-dimensional strong grids
"""

import logging
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

from domain.errors import InvalidCertificateError, ParameterError, ProdwidthError
from domain.families import GknSpec, PathSpec, generate
from domain.graph import Graph, ProductKind, iter_bits, iterated_product, product, square
from domain.models import HDecomposition, Violation


class DecompositionServiceError(ProdwidthError):
    """Base exception for decomposition constructions."""

    pass


class InvalidDecompositionError(DecompositionServiceError, InvalidCertificateError):
    """Raised when an input decomposition fails validation."""

    pass


def validate_decomposition(g: Graph, d: HDecomposition) -> List[Violation]:
    """
    Check the H-decomposition axioms of d against g.

    Returns:
        List of violations; empty when d is a valid decomposition of g
    """
    violations = []
    for x, bag in enumerate(d.bags):
        outside = sorted(v for v in bag if not 0 <= v < g.n)
        if outside:
            violations.append(
                Violation(
                    "vertex-out-of-range",
                    f"Bag {x} holds {outside}, outside [0, {g.n})",
                    (x,) + tuple(outside),
                )
            )
    if violations:
        return violations

    nodes_of = [0] * g.n
    for x, bag in enumerate(d.bags):
        for v in bag:
            nodes_of[v] |= 1 << x

    for v in range(g.n):
        if not nodes_of[v]:
            violations.append(Violation("vertex-uncovered", f"Vertex {v} is in no bag", (v,)))
        elif not d.host.is_connected_set(nodes_of[v]):
            violations.append(
                Violation(
                    "vertex-disconnected",
                    f"Host nodes {list(iter_bits(nodes_of[v]))} holding vertex {v} are not connected",
                    (v,),
                )
            )
    for u, v in g.edges():
        if not nodes_of[u] & nodes_of[v]:
            violations.append(Violation("edge-uncovered", f"Edge {u}{v} lies in no bag", (u, v)))
    return violations


def _path_host(length: int) -> Graph:
    return Graph.from_edges(length, [(i, i + 1) for i in range(length - 1)])


class DecompositionService:
    """Constructions of H-decompositions for products and squares."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def validate(self, g: Graph, d: HDecomposition) -> List[Violation]:
        return validate_decomposition(g, d)

    def _require_valid(self, g: Graph, d: HDecomposition, role: str) -> None:
        violations = validate_decomposition(g, d)
        if violations:
            self.logger.error(f"{role} is not a valid decomposition: {violations[0].message}")
            raise InvalidDecompositionError(
                f"{role} is not a valid decomposition ({len(violations)} violation(s))", violations
            )

    def _checked(self, g: Graph, d: HDecomposition, construction: str) -> HDecomposition:
        violations = validate_decomposition(g, d)
        if violations:
            raise DecompositionServiceError(
                f"{construction} produced an invalid decomposition: {violations[0].message}"
            )
        self.logger.debug(f"{construction}: width {d.width} on {d.host.n} host nodes")
        return d

    def lift_product(self, g1: Graph, dec: HDecomposition, g2: Graph) -> HDecomposition:
        """
        Same host, bag W_t × V(G2) for every host node t.

        The result is a decomposition of G1 ⊠ G2 and so of G1 □ G2 and G1 × G2.

        Raises:
            InvalidDecompositionError: When dec is not a decomposition of g1
        """
        self._require_valid(g1, dec, "Factor decomposition")
        bags = tuple(
            frozenset(a * g2.n + v for a in bag for v in range(g2.n)) for bag in dec.bags
        )
        lifted = HDecomposition(dec.host, bags)
        return self._checked(product(g1, g2, ProductKind.STRONG).base, lifted, "lift_product")

    def lift_square(self, g: Graph, dec: HDecomposition) -> HDecomposition:
        """Same host, bag ∪_{v ∈ W_t} N[v] for every host node t."""
        self._require_valid(g, dec, "Decomposition")
        bags = []
        for bag in dec.bags:
            mask = 0
            for v in bag:
                mask |= g.closed_neighborhood(v)
            bags.append(frozenset(iter_bits(mask)))
        return self._checked(square(g), HDecomposition(dec.host, tuple(bags)), "lift_square")

    def vc_subdivision_decomp(
        self, g1: Graph, cover: Iterable[int], g2: Graph, dec2: HDecomposition
    ) -> HDecomposition:
        """
        Decomposition of G1 × G2 built from a vertex cover A of G1 and a
        decomposition of G2.

        Every host node x first gets A × W'_x, where W'_x is the square-lifted
        bag of dec2. Each vertex (ℓ, v) with ℓ outside the cover then receives a
        new host node subdividing an edge at the lowest node x whose dec2 bag
        holds v, with bag A × W'_x ∪ {(ℓ, v)}.

        Args:
            g1: Connected first factor
            cover: Vertex cover of g1
            g2: Second factor
            dec2: Decomposition of g2 on any host

        Returns:
            HDecomposition whose host is a subdivision of dec2's host (a pendant
            node is attached when that host is K_1)

        Raises:
            InvalidCertificateError: When cover is not a vertex cover of g1
            ParameterError: When g1 is disconnected
            InvalidDecompositionError: When dec2 is not a decomposition of g2
        """
        cover_set = sorted(set(cover))
        if any(not 0 <= a < g1.n for a in cover_set):
            raise InvalidCertificateError(f"Cover {cover_set} has vertices outside [0, {g1.n})")
        in_cover = set(cover_set)
        uncovered = [(u, v) for u, v in g1.edges() if u not in in_cover and v not in in_cover]
        if uncovered:
            raise InvalidCertificateError(
                f"Cover {cover_set} misses edge {uncovered[0]}",
                [Violation("edge-uncovered", f"Edge {u}{v} has no cover endpoint", (u, v)) for u, v in uncovered],
            )
        if not g1.is_connected:
            raise ParameterError("vc_subdivision_decomp needs a connected first factor")

        squared = self.lift_square(g2, dec2)
        n2 = g2.n
        bags: List[FrozenSet[int]] = [
            frozenset(a * n2 + u for a in cover_set for u in bag) for bag in squared.bags
        ]
        adjacency: Dict[int, Set[int]] = {x: set(dec2.host.neighbors(x)) for x in range(dec2.host.n)}
        home = {}
        for x, bag in enumerate(dec2.bags):
            for v in bag:
                home.setdefault(v, x)

        for leaf in range(g1.n):
            if leaf in in_cover:
                continue
            for v in range(n2):
                x = home[v]
                z = len(bags)
                adjacency[z] = {x}
                if adjacency[x]:
                    y = min(adjacency[x])
                    adjacency[x].discard(y)
                    adjacency[y].discard(x)
                    adjacency[y].add(z)
                    adjacency[z].add(y)
                adjacency[x].add(z)
                bags.append(bags[x] | {leaf * n2 + v})

        host = Graph.from_edges(len(bags), [(x, y) for x in adjacency for y in adjacency[x] if x < y])
        result = HDecomposition(host, tuple(bags))
        self.logger.info(
            f"Built cover decomposition of width {result.width} with |A| = {len(cover_set)}"
        )
        return self._checked(product(g1, g2, ProductKind.DIRECT).base, result, "vc_subdivision_decomp")

    def gkn_decomposition(self, k: int, n: int) -> Tuple[Graph, HDecomposition]:
        """
        G_{k,n} ⊠ G_{k,n} with a tree decomposition of width O(n + k²).

        G_{k,n} is a path v_0..v_{ñ-1} (ñ = n - k) glued at v_0 to a clique K of
        k + 1 vertices. With X = {(v_0, u), (u, v_0)} in every bag, the host is a
        node y (bag K × K) joined to the first node of three paths of ñ - 1 nodes:
        C_i = K × {v_{i-1}, v_i}, its mirror D_i, and L_ℓ holding the path pairs
        whose smaller index is ℓ - 1 or ℓ.

        Raises:
            ParameterError: When n < k + 1 or k < 0
        """
        spec = GknSpec(k, n)
        g = generate(spec)
        strong = product(g, g, ProductKind.STRONG)
        path_length = spec.path_length
        clique = spec.clique

        x_part = {strong.pair(0, u) for u in range(n)} | {strong.pair(u, 0) for u in range(n)}
        bags = [frozenset({strong.pair(a, b) for a in clique for b in clique} | x_part)]
        edges = []
        legs = path_length - 1
        for leg in range(3):
            for i in range(1, path_length):
                if leg == 0:
                    members = {strong.pair(a, p) for a in clique for p in (i - 1, i)}
                elif leg == 1:
                    members = {strong.pair(p, a) for a in clique for p in (i - 1, i)}
                else:
                    members = {
                        strong.pair(p, q)
                        for p in range(path_length)
                        for q in range(path_length)
                        if min(p, q) in (i - 1, i)
                    }
                bags.append(frozenset(members | x_part))
                node = leg * legs + i
                edges.append((0 if i == 1 else node - 1, node))

        decomposition = HDecomposition(Graph.from_edges(len(bags), edges), tuple(bags))
        self.logger.info(f"Built G_(k,n) decomposition for k={k}, n={n} of width {decomposition.width}")
        return strong.base, self._checked(strong.base, decomposition, "gkn_decomposition")

    def strong_grid_decomposition(self, dims: Iterable[int]) -> Tuple[Graph, HDecomposition]:
        """
        Path decomposition of P_{n1} ⊠ ... ⊠ P_{nd} with width 2·n2···nd − 1.

        Dimensions are sorted so that n1 is the largest; the width-1 path
        decomposition of P_{n1} is lifted through the strong product of the rest.

        Raises:
            ParameterError: When no dimension is given or one is below 1
        """
        sizes = sorted(dims, reverse=True)
        if not sizes or min(sizes) < 1:
            raise ParameterError(f"Grid dimensions must be positive, got {sizes}")
        first = generate(PathSpec(sizes[0]))
        rest = (
            iterated_product([generate(PathSpec(s)) for s in sizes[1:]], ProductKind.STRONG)
            if len(sizes) > 1
            else Graph.empty(1)
        )
        if sizes[0] == 1:
            base = HDecomposition(Graph.empty(1), (frozenset({0}),))
        else:
            bags = tuple(frozenset({i, i + 1}) for i in range(sizes[0] - 1))
            base = HDecomposition(_path_host(sizes[0] - 1), bags)
        grid = product(first, rest, ProductKind.STRONG).base
        return grid, self.lift_product(first, base, rest)

