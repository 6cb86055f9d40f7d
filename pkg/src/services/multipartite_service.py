"""
Multipartite Service Module

Complete multipartite subgraphs of graph products:
- An exhaustive oracle for K_{n1,...,nd} plus an overlay clique in any graph
- Decision procedures for the cartesian, direct and strong products that only
  inspect the factors, each returning a certificate
- Realisation of certificates as explicit embeddings in the product
- The forbidden-pattern bound for strong products of K_{s,t}-free graphs
"""

import logging
from itertools import combinations, product as cartesian_power
from typing import List, Optional, Sequence, Tuple

import cachetools

from domain.errors import ParameterError, ProdwidthError
from domain.families import CompleteMultipartiteSpec, generate
from domain.graph import Graph, ProductGraph, iter_bits, popcount
from domain.models import (
    CartesianCertificate,
    DirectCertificate,
    InFactorCertificate,
    K22Certificate,
    KstBound,
    MultipartiteEmbedding,
    MultipartitePattern,
    StarCertificate,
    StrongCertificate,
)
from services.search_budget import SearchBudget


class MultipartiteServiceError(ProdwidthError):
    """Base exception for multipartite containment errors."""

    pass


class UnsupportedPatternError(MultipartiteServiceError):
    """Raised for patterns a product characterisation does not cover."""

    pass


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


class MultipartiteService:
    """Decides K_{n1,...,nd} containment in graphs and graph products.

    Attributes:
        budget (SearchBudget): Size limits for the exhaustive oracle
        cache (LRUCache): Oracle results keyed on (graph, part sizes)
    """

    def __init__(self, budget: Optional[SearchBudget] = None):
        self.budget = budget or SearchBudget()
        self.logger = logging.getLogger(__name__)
        self.cache = cachetools.LRUCache(maxsize=4096)

    # --- oracle -------------------------------------------------------------

    def find_parts(
        self, g: Graph, sizes: Sequence[int], force: bool = False
    ) -> Optional[List[Tuple[int, ...]]]:
        """Find disjoint vertex groups of the given sizes, pairwise completely joined.

        Zero sizes are allowed and give empty groups. Groups come back in the
        order of sizes.
        """
        self.budget.check("oracle_subgraph", "subgraph", g.n, force)
        key = (g, tuple(sizes))
        if key in self.cache:
            return self.cache[key]
        found = self._search(g, list(sizes))
        self.cache[key] = found
        return found

    def _search(self, g: Graph, sizes: List[int]) -> Optional[List[Tuple[int, ...]]]:
        total = sum(sizes)
        if total > g.n:
            return None
        order = sorted((i for i in range(len(sizes)) if sizes[i] > 0), key=lambda i: -sizes[i])
        result: List[Tuple[int, ...]] = [()] * len(sizes)
        tail = [sum(sizes[i] for i in order[k:]) for k in range(len(order) + 1)]

        def place(k: int, candidates: int) -> bool:
            if k == len(order):
                return True
            idx = order[k]
            size = sizes[idx]
            need = total - size
            pool = [v for v in iter_bits(candidates) if popcount(g.adj[v]) >= need]
            floor = -1
            if k > 0 and sizes[order[k - 1]] == size:
                floor = result[order[k - 1]][0]
            for combo in combinations(pool, size):
                if combo[0] <= floor:
                    continue
                common = candidates
                for v in combo:
                    common &= g.adj[v]
                if popcount(common) < tail[k + 1]:
                    continue
                result[idx] = combo
                if place(k + 1, common):
                    return True
            return False

        if place(0, g.vertex_mask):
            return list(result)
        return None

    def oracle_subgraph(
        self, g: Graph, pattern: MultipartitePattern, force: bool = False
    ) -> Optional[MultipartiteEmbedding]:
        """
        Exhaustively search for K_{n1,...,nd} plus an overlay clique in g.

        Args:
            g: Host graph
            pattern: Part sizes and overlay size
            force: Run even when g is beyond the subgraph budget

        Returns:
            An embedding with parts in pattern order, or None when absent

        Raises:
            BudgetExceededError: When g is too large and force is False
        """
        groups = self.find_parts(g, pattern.sizes(), force)
        if groups is None:
            return None
        return self._split(groups, pattern.d)

    def clique_number(self, g: Graph, force: bool = False) -> int:
        omega = 0
        while omega < g.n and self.find_parts(g, (1,) * (omega + 1), force) is not None:
            omega += 1
        return omega

    def _split(self, groups: List[Tuple[int, ...]], d: int) -> MultipartiteEmbedding:
        return MultipartiteEmbedding(tuple(groups[:d]), tuple(group[0] for group in groups[d:]))

    @staticmethod
    def _require_plain(pattern: MultipartitePattern, product_name: str) -> None:
        if pattern.overlay > 0:
            raise UnsupportedPatternError(
                f"The {product_name} characterisation covers overlay-free patterns only"
            )
        if pattern.d < 2:
            raise UnsupportedPatternError("Patterns need at least two parts")

    # --- cartesian ----------------------------------------------------------

    def decide_cartesian(
        self, g1: Graph, g2: Graph, pattern: MultipartitePattern
    ) -> Optional[CartesianCertificate]:
        """
        Decide K_{n1,...,nd} ⊆ G1 □ G2.

        The pattern is present exactly when it lies in a factor, or it is K_{2,2}
        and both factors have an edge, or it is K_{1,s} with Δ1 + Δ2 >= s.

        Raises:
            UnsupportedPatternError: For overlay patterns or d < 2
            ParameterError: When a factor has no vertices
        """
        self._require_plain(pattern, "cartesian")
        if g1.n == 0 or g2.n == 0:
            raise ParameterError("Both factors need at least one vertex")

        for which, g in enumerate((g1, g2)):
            embedding = self.oracle_subgraph(g, pattern)
            if embedding is not None:
                return InFactorCertificate(which, embedding)

        if sorted(pattern.parts) == [2, 2] and g1.m > 0 and g2.m > 0:
            return K22Certificate(g1.edges()[0], g2.edges()[0])

        if pattern.d == 2 and min(pattern.parts) == 1:
            s = max(pattern.parts)
            if g1.max_degree + g2.max_degree >= s:
                centre1 = max(range(g1.n), key=lambda v: (g1.degree(v), -v))
                centre2 = max(range(g2.n), key=lambda v: (g2.degree(v), -v))
                return StarCertificate(s, centre1, centre2)
        return None

    def realise_cartesian(
        self, prod: ProductGraph, pattern: MultipartitePattern, cert: CartesianCertificate
    ) -> MultipartiteEmbedding:
        g1, g2 = prod.factors
        if isinstance(cert, InFactorCertificate):

            def lift(w: int) -> int:
                return prod.pair(w, 0) if cert.which == 0 else prod.pair(0, w)

            return MultipartiteEmbedding(tuple(tuple(lift(w) for w in part) for part in cert.embedding.parts))
        if isinstance(cert, K22Certificate):
            x, y = cert.edge1
            u, v = cert.edge2
            return MultipartiteEmbedding(
                ((prod.pair(x, u), prod.pair(y, v)), (prod.pair(y, u), prod.pair(x, v)))
            )
        centre = prod.pair(cert.centre1, cert.centre2)
        leaves = [prod.pair(b, cert.centre2) for b in g1.neighbors(cert.centre1)]
        leaves += [prod.pair(cert.centre1, u) for u in g2.neighbors(cert.centre2)]
        leaves = tuple(leaves[: cert.s])
        if pattern.parts[0] == 1:
            return MultipartiteEmbedding(((centre,), leaves))
        return MultipartiteEmbedding((leaves, (centre,)))

    # --- direct -------------------------------------------------------------

    def decide_direct(
        self, g1: Graph, g2: Graph, pattern: MultipartitePattern
    ) -> Optional[DirectCertificate]:
        """
        Decide K_{n1,...,nd} ⊆ G1 × G2 by finding K_{a} ⊆ G1 and K_{b} ⊆ G2
        with a_i, b_i >= 1 and n_i <= a_i b_i.

        Raises:
            ParameterError: When a factor has no edge
        """
        self._require_plain(pattern, "direct")
        if g1.m == 0 or g2.m == 0:
            raise ParameterError("The direct-product characterisation needs an edge in each factor")

        options = [
            [(a, _ceil_div(n, a)) for a in range(1, min(n, g1.n) + 1) if _ceil_div(n, a) <= g2.n]
            for n in pattern.parts
        ]
        for choice in cartesian_power(*options):
            a = tuple(pair[0] for pair in choice)
            b = tuple(pair[1] for pair in choice)
            if sum(a) > g1.n or sum(b) > g2.n:
                continue
            first = self.find_parts(g1, a)
            if first is None:
                continue
            second = self.find_parts(g2, b)
            if second is None:
                continue
            self.logger.debug(f"Direct certificate a={a} b={b} for parts {pattern.parts}")
            return DirectCertificate(a, b, self._split(first, len(a)), self._split(second, len(b)))
        return None

    def realise_direct(
        self, prod: ProductGraph, pattern: MultipartitePattern, cert: DirectCertificate
    ) -> MultipartiteEmbedding:
        parts = []
        for n, left, right in zip(pattern.parts, cert.embedding1.parts, cert.embedding2.parts):
            pairs = [prod.pair(x, y) for x in left for y in right]
            parts.append(tuple(pairs[:n]))
        return MultipartiteEmbedding(tuple(parts))

    # --- strong -------------------------------------------------------------

    def decide_strong(
        self, g1: Graph, g2: Graph, pattern: MultipartitePattern
    ) -> Optional[StrongCertificate]:
        """
        Decide K_{n1,...,nd} ⊆ G1 ⊠ G2.

        Searches overlay patterns K_{a1,...,ad,x̄} ⊆ G1 and K_{b1,...,bd,ȳ} ⊆ G2
        in ascending x + y, then lexicographic (a, b), with z filled greedily so
        that n_j <= a_j b_j + a_j y + b_j x + z_j and Σ z_j <= x y.
        """
        self._require_plain(pattern, "strong")
        parts = pattern.parts
        omega1, omega2 = self.clique_number(g1), self.clique_number(g2)
        ranges = [range(0, n + 1) for n in parts]

        for total in range(0, omega1 + omega2 + 1):
            for x in range(0, min(total, omega1) + 1):
                y = total - x
                if y > omega2:
                    continue
                for a in cartesian_power(*ranges):
                    if sum(a) + x > g1.n:
                        continue
                    first = None
                    for b in cartesian_power(*ranges):
                        if sum(b) + y > g2.n:
                            continue
                        z = tuple(
                            max(0, n - aj * bj - aj * y - bj * x)
                            for n, aj, bj in zip(parts, a, b)
                        )
                        if sum(z) > x * y:
                            continue
                        if first is None:
                            first = self.find_parts(g1, tuple(a) + (1,) * x)
                            if first is None:
                                break
                        second = self.find_parts(g2, tuple(b) + (1,) * y)
                        if second is None:
                            continue
                        return StrongCertificate(
                            tuple(a), tuple(b), z, x, y,
                            self._split(first, len(a)), self._split(second, len(b)),
                        )
        return None

    def realise_strong(
        self, prod: ProductGraph, pattern: MultipartitePattern, cert: StrongCertificate
    ) -> MultipartiteEmbedding:
        xs, ys = cert.embedding1.overlay, cert.embedding2.overlay
        corner = [prod.pair(p, q) for p in xs for q in ys]
        parts = []
        offset = 0
        for n, left, right, zj in zip(pattern.parts, cert.embedding1.parts, cert.embedding2.parts, cert.z):
            pool = [prod.pair(p, q) for p in left for q in right]
            pool += [prod.pair(p, q) for p in left for q in ys]
            pool += [prod.pair(p, q) for p in xs for q in right]
            pool += corner[offset : offset + zj]
            offset += zj
            parts.append(tuple(pool[:n]))
        return MultipartiteEmbedding(tuple(parts))

    # --- bounds -------------------------------------------------------------

    def strong_kst_bound(self, s: int, t: int, max_degree: int, n: Optional[int] = None) -> KstBound:
        """
        Forbidden complete bipartite pattern for G ⊠ H with G K_{s,t}-free, Δ(H) <= max_degree.

        When n is given and s >= 2, also returns the pair K_{s-2,n,1}, K_{Δ,0,1}
        whose strong product contains K_{(s-1)(Δ+1),n}.
        """
        if not (t >= s >= 1 and max_degree >= 1):
            raise ParameterError(f"Need t >= s >= 1 and Δ >= 1, got s={s}, t={t}, Δ={max_degree}")
        forbidden = MultipartitePattern(
            ((s - 1) * (max_degree + 1) + 1, (s + t) * (max_degree + 1))
        )
        if n is None:
            return KstBound(forbidden, witness_reason="no witness order requested")
        if s < 2:
            return KstBound(forbidden, witness_reason="witness family needs s >= 2")
        if n < 1:
            raise ParameterError(f"Witness order must be positive, got {n}")
        g_tilde = generate(CompleteMultipartiteSpec((s - 2, n, 1)))
        h_tilde = generate(CompleteMultipartiteSpec((max_degree, 0, 1)))
        witness_pattern = MultipartitePattern(((s - 1) * (max_degree + 1), n))
        return KstBound(forbidden, (g_tilde, h_tilde), witness_pattern, "")
