"""
Degeneracy Service Module

Exact degeneracy by min-degree peeling, the degeneracy bounds for direct and
strong products in terms of factor statistics, and the witness families on
which those bounds are attained.
"""

import heapq
import logging
from typing import List, Optional, Tuple

from domain.errors import ParameterError, ProdwidthError
from domain.families import CompleteMultipartiteSpec, StarSpec, generate, regular_circulant
from domain.graph import Graph, ProductKind
from domain.models import DegeneracyBounds, DegenProfile, FactorStats
from services.multipartite_service import MultipartiteService
from services.search_budget import SearchBudget


class DegeneracyServiceError(ProdwidthError):
    """Base exception for degeneracy errors."""

    pass


class WitnessUnavailableError(DegeneracyServiceError):
    """No factor pair with the given statistics attains the lower bound."""

    pass


def strong_cbg_f(s1: int, t1: int, s2: int, t2: int) -> int:
    """Degeneracy of K_{s1,t1} ⊠ K_{s2,t2} for t_i >= s_i >= 1."""
    if not (t1 >= s1 >= 1 and t2 >= s2 >= 1):
        raise ParameterError(f"Need t_i >= s_i >= 1, got ({s1}, {t1}, {s2}, {t2})")
    return max(
        s1 + s2 + s1 * s2,
        min(t1 + t2, s1 * (t2 + 1), s2 * (t1 + 1)),
        min(s1 * t2, s2 * t1),
    )


def bounds_direct(f1: FactorStats, f2: FactorStats) -> DegeneracyBounds:
    terms = (
        ("d1*d2", f1.d * f2.d),
        ("min(s1*t2, s2*t1)", min(f1.s * f2.t, f2.s * f1.t)),
        ("min(Δ1, Δ2)", min(f1.max_degree, f2.max_degree)),
    )
    lower = max(value for _, value in terms)
    upper = min(f1.d * f2.max_degree, f2.d * f1.max_degree)
    if lower > upper:
        raise ParameterError(f"Inconsistent factor statistics {f1} and {f2}")
    return DegeneracyBounds(lower, upper, terms)


def bounds_strong(f1: FactorStats, f2: FactorStats) -> DegeneracyBounds:
    f_term = strong_cbg_f(f1.s, f1.t, f2.s, f2.t) if f1.s and f2.s else 0
    star_term = min(f1.max_degree, f2.max_degree) + 1 if f1.max_degree and f2.max_degree else 0
    terms = (
        ("d1+d2+d1*d2", f1.d + f2.d + f1.d * f2.d),
        ("f(s1,t1,s2,t2)", f_term),
        ("min(Δ1, Δ2)+1", star_term),
    )
    lower = max(value for _, value in terms)
    upper = f1.d + f2.d + min(f1.d * f2.max_degree, f2.d * f1.max_degree)
    if lower > upper:
        raise ParameterError(f"Inconsistent factor statistics {f1} and {f2}")
    return DegeneracyBounds(lower, upper, terms)


def bounds_cartesian(f1: FactorStats, f2: FactorStats) -> DegeneracyBounds:
    total = f1.d + f2.d
    return DegeneracyBounds(total, total, (("d1+d2", total),))


def forced_direct_lower(f1: FactorStats, f2: FactorStats) -> int:
    """
    Degeneracy every direct product with these factor statistics reaches.

    A vertex of maximum degree gives K_{1,Δ1} ⊆ G1, and K_{1,Δ1} × K_{s2,t2}
    contains K_{t2, s2 Δ1}; symmetrically for the other factor.
    """
    return max(
        bounds_direct(f1, f2).lower,
        min(f2.t, f2.s * f1.max_degree),
        min(f1.t, f1.s * f2.max_degree),
    )


BOUNDS = {
    ProductKind.CARTESIAN: bounds_cartesian,
    ProductKind.DIRECT: bounds_direct,
    ProductKind.STRONG: bounds_strong,
}


def _lower_witness_factor(stats: FactorStats) -> Graph:
    regular = regular_circulant(stats.d)
    bipartite = generate(CompleteMultipartiteSpec((stats.s, stats.t)))
    star = generate(StarSpec(stats.max_degree))
    return regular.disjoint_union(bipartite).disjoint_union(star)


def _upper_witness_factor(k: int, d: int) -> Graph:
    # A = 0..d is a clique; B vertex j attaches to A indices j..j+d-1 mod d+1.
    size_a = d + 1
    size_b = (d + 1) * (k - 1)
    edges = [(u, v) for u in range(size_a) for v in range(u + 1, size_a)]
    for j in range(size_b):
        for offset in range(d):
            edges.append((size_a + j, (j + offset) % size_a))
    return Graph.from_edges(size_a + size_b, edges)


class DegeneracyService:
    """Degeneracy computations, product bounds and their witness families.

    Attributes:
        budget (SearchBudget): Limit for complete-bipartite statistics extraction
        multipartite (MultipartiteService): Oracle used to find K_{s,t} subgraphs
    """

    def __init__(
        self,
        budget: Optional[SearchBudget] = None,
        multipartite: Optional[MultipartiteService] = None,
    ):
        self.budget = budget or SearchBudget()
        self.multipartite = multipartite or MultipartiteService(self.budget)
        self.logger = logging.getLogger(__name__)

    def degeneracy_exact(self, g: Graph) -> DegenProfile:
        """
        Peel a minimum-degree vertex (lowest id on ties) until the graph is empty.

        Returns:
            DegenProfile whose degeneracy is the largest degree seen at removal
        """
        degree = [g.degree(v) for v in range(g.n)]
        removed = [False] * g.n
        heap = [(degree[v], v) for v in range(g.n)]
        heapq.heapify(heap)
        order: List[int] = []
        steps: List[int] = []
        while heap:
            d, v = heapq.heappop(heap)
            if removed[v] or d != degree[v]:
                continue
            removed[v] = True
            order.append(v)
            steps.append(d)
            for u in g.neighbors(v):
                if not removed[u]:
                    degree[u] -= 1
                    heapq.heappush(heap, (degree[u], u))
        return DegenProfile(max(steps, default=0), tuple(order), tuple(steps))

    def bipartite_frontier(self, g: Graph, force: bool = False) -> List[Tuple[int, int]]:
        """Maximal (s, t) with s <= t and K_{s,t} ⊆ g, one entry per s."""
        self.budget.check("factor_stats", "factor_stats", g.n, force)
        frontier = []
        s = 1
        while 2 * s <= g.n and self.multipartite.find_parts(g, (s, s), force=True) is not None:
            t = s
            while s + t < g.n and self.multipartite.find_parts(g, (s, t + 1), force=True) is not None:
                t += 1
            frontier.append((s, t))
            s += 1
        return frontier

    def factor_stats(self, g: Graph, force: bool = False) -> List[FactorStats]:
        """Every honest FactorStats for g: one per frontier pair, or s = t = 0 when edgeless."""
        d = self.degeneracy_exact(g).degeneracy
        pairs = self.bipartite_frontier(g, force) or [(0, 0)]
        return [FactorStats(d, g.max_degree, s, t) for s, t in pairs]

    def best_bounds(self, g1: Graph, g2: Graph, kind: ProductKind, force: bool = False) -> DegeneracyBounds:
        """Bounds for the product of g1 and g2 using the statistics that maximise the lower bound."""
        bound = BOUNDS[kind]
        best = None
        for f1 in self.factor_stats(g1, force):
            for f2 in self.factor_stats(g2, force):
                candidate = bound(f1, f2)
                if best is None or candidate.lower > best.lower:
                    best = candidate
        return best

    def witness_direct_lower(self, f1: FactorStats, f2: FactorStats) -> Tuple[Graph, Graph]:
        """
        Factors whose direct product has degeneracy exactly bounds_direct(f1, f2).lower.

        Each factor is a d-regular circulant, K_{s,t} and K_{1,Δ} side by side.

        Raises:
            WitnessUnavailableError: When every factor pair with these statistics
                has a product of larger degeneracy (see forced_direct_lower)
        """
        lower = bounds_direct(f1, f2).lower
        forced = forced_direct_lower(f1, f2)
        if forced > lower:
            raise WitnessUnavailableError(
                f"Statistics {f1} and {f2} force direct product degeneracy {forced} "
                f"above the lower bound {lower}"
            )
        return _lower_witness_factor(f1), _lower_witness_factor(f2)

    def witness_strong_lower(self, f1: FactorStats, f2: FactorStats) -> Tuple[Graph, Graph]:
        """Factors whose strong product has degeneracy exactly bounds_strong(f1, f2).lower."""
        return _lower_witness_factor(f1), _lower_witness_factor(f2)

    def witness_strong_upper(self, k1: int, k2: int, d1: int, d2: int) -> Tuple[Graph, Graph]:
        """
        Factors with degeneracy d_i and maximum degree k_i d_i whose strong
        product has degeneracy d1 + d2 + min(d1 Δ2, d2 Δ1).

        Raises:
            ParameterError: When some k_i or d_i is below 1
        """
        if min(k1, k2, d1, d2) < 1:
            raise ParameterError(f"Need k_i, d_i >= 1, got k=({k1}, {k2}), d=({d1}, {d2})")
        return _upper_witness_factor(k1, d1), _upper_witness_factor(k2, d2)
