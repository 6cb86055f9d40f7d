"""
Width Service Module

Exact treewidth and pathwidth for desk-scale graphs, each returned with a
decomposition of matching width:
- Treewidth by a decision search over eliminated vertex sets, using the
  Q-set characterisation of elimination orderings
- Pathwidth by a decision search over placed prefixes (vertex separation)
- Minor-min-width lower bound and min-fill upper bound bracketing the search
- Decomposition reconstruction from elimination orderings and layouts
"""

import logging
from typing import List, Optional, Tuple

import cachetools

from domain.errors import BudgetExceededError, ParameterError, ProdwidthError
from domain.graph import Graph, iter_bits, popcount
from domain.models import HDecomposition, WidthResult
from services.search_budget import SearchBudget

WIDTH_KINDS = ("tree", "path")


class WidthServiceError(ProdwidthError):
    """Base exception for exact width computations."""

    pass


def eliminated_neighbours(g: Graph, eliminated: int, v: int) -> int:
    """Q-set of v: vertices outside eliminated | {v} reachable from v through eliminated."""
    return g.neighborhood_of(g.reach(v, eliminated))


def _is_filled_clique(g: Graph, eliminated: int, q: int) -> bool:
    for u in iter_bits(q):
        if (q & ~(1 << u)) & ~eliminated_neighbours(g, eliminated, u):
            return False
    return True


def _missing_pairs(g: Graph, eliminated: int, q: int) -> int:
    missing = 0
    for u in iter_bits(q):
        missing += popcount((q & ~(1 << u)) & ~eliminated_neighbours(g, eliminated, u))
    return missing // 2


def minor_min_width(g: Graph, within: Optional[int] = None) -> int:
    """Treewidth lower bound: contract a minimum-degree vertex into its sparsest neighbour."""
    within = g.vertex_mask if within is None else within
    rows = {v: g.adj[v] & within for v in iter_bits(within)}
    best = 0
    while rows:
        degree, u = min((popcount(row), v) for v, row in rows.items())
        best = max(best, degree)
        row = rows.pop(u)
        for w in iter_bits(row):
            rows[w] &= ~(1 << u)
        if row:
            _, v = min((popcount(rows[w] & row), w) for w in iter_bits(row))
            for w in iter_bits(row & ~(1 << v)):
                rows[w] |= 1 << v
            rows[v] = (rows[v] | row) & ~(1 << v)
    return best


def min_fill_ordering(g: Graph, within: Optional[int] = None) -> Tuple[int, List[int]]:
    """Greedy elimination by fewest fill edges, lowest id on ties.

    Returns:
        (width, ordering) with width the largest Q-set met during elimination
    """
    remaining = g.vertex_mask if within is None else within
    eliminated = 0
    width = 0
    order = []
    while remaining:
        best = None
        for v in iter_bits(remaining):
            q = eliminated_neighbours(g, eliminated, v)
            key = (_missing_pairs(g, eliminated, q), v)
            if best is None or key < best[0]:
                best = (key, q)
        (_, v), q = best
        width = max(width, popcount(q))
        order.append(v)
        eliminated |= 1 << v
        remaining &= ~(1 << v)
    return width, order


def boundary(g: Graph, placed: int, within: Optional[int] = None) -> int:
    """Placed vertices with a neighbour still outside placed."""
    within = g.vertex_mask if within is None else within
    return placed & g.neighborhood_of(within & ~placed)


def tree_decomposition_from_ordering(g: Graph, order: List[int]) -> HDecomposition:
    """
    Tree decomposition of an elimination ordering.

    Host node i carries bag {order[i]} ∪ Q(order[i]); its parent is the node of
    the earliest eliminated vertex of that Q-set, or node i + 1 when it is empty.
    """
    if sorted(order) != list(range(g.n)):
        raise ParameterError(f"Ordering is not a permutation of 0..{g.n - 1}")
    if g.n == 0:
        return HDecomposition(Graph.empty(1), (frozenset(),))

    position = {v: i for i, v in enumerate(order)}
    bags = []
    edges = []
    eliminated = 0
    for i, v in enumerate(order):
        q = eliminated_neighbours(g, eliminated, v)
        bags.append(frozenset(iter_bits(q | (1 << v))))
        if q:
            edges.append((i, min(position[u] for u in iter_bits(q))))
        elif i + 1 < len(order):
            edges.append((i, i + 1))
        eliminated |= 1 << v
    return HDecomposition(Graph.from_edges(g.n, edges), tuple(bags))


def path_decomposition_from_layout(g: Graph, layout: List[int]) -> HDecomposition:
    """Path decomposition with bag i = {layout[i]} ∪ boundary(layout[:i])."""
    if sorted(layout) != list(range(g.n)):
        raise ParameterError(f"Layout is not a permutation of 0..{g.n - 1}")
    if g.n == 0:
        return HDecomposition(Graph.empty(1), (frozenset(),))

    bags = []
    placed = 0
    for v in layout:
        bags.append(frozenset(iter_bits(boundary(g, placed) | (1 << v))))
        placed |= 1 << v
    host = Graph.from_edges(g.n, [(i, i + 1) for i in range(g.n - 1)])
    return HDecomposition(host, tuple(bags))


class WidthService:
    """Exact treewidth and pathwidth with certificate decompositions.

    Attributes:
        budget (SearchBudget): Size limits for the two searches
        cache (LRUCache): Results keyed on kind and adjacency
    """

    def __init__(self, budget: Optional[SearchBudget] = None):
        self.budget = budget or SearchBudget()
        self.cache = cachetools.LRUCache(maxsize=256)
        self.logger = logging.getLogger(__name__)

    def exact_width(self, g: Graph, kind: str = "tree", force: bool = False) -> WidthResult:
        """
        Exact treewidth or pathwidth of g.

        Components are solved independently; the advisory size is the order of
        the largest component.

        Args:
            g: Graph to measure
            kind: "tree" or "path"
            force: Run past the search budget

        Returns:
            WidthResult whose decomposition has width equal to the value

        Raises:
            ParameterError: On an unknown kind
            BudgetExceededError: When the largest component is beyond the budget
            WidthServiceError: For unexpected failures during the search
        """
        if kind not in WIDTH_KINDS:
            raise ParameterError(f"Width kind must be one of {WIDTH_KINDS}, got {kind!r}")

        key = (kind, g.n, g.adj)
        if key in self.cache:
            return self.cache[key]

        components = g.component_masks()
        largest = max((popcount(c) for c in components), default=0)
        self.budget.check(
            f"exact_width({kind})", "tree_width" if kind == "tree" else "path_width", largest, force
        )

        try:
            value = -1
            order: List[int] = []
            for component in components:
                if kind == "tree":
                    width, part = self._component_treewidth(g, component)
                else:
                    width, part = self._component_pathwidth(g, component)
                value = max(value, width)
                order.extend(part)

            if kind == "tree":
                decomposition = tree_decomposition_from_ordering(g, order)
            else:
                decomposition = path_decomposition_from_layout(g, order)
        except (BudgetExceededError, ParameterError):
            raise
        except Exception as e:
            self.logger.error(f"Error computing {kind}width: {str(e)}")
            raise WidthServiceError(f"Error computing {kind}width: {str(e)}")

        if decomposition.width != value:
            raise WidthServiceError(
                f"Reconstructed {kind} decomposition has width {decomposition.width}, expected {value}"
            )

        result = WidthResult(value, kind, decomposition)
        self.cache[key] = result
        self.logger.info(f"Computed {kind}width {value} for graph on {g.n} vertices")
        return result

    def treewidth(self, g: Graph, force: bool = False) -> int:
        return self.exact_width(g, "tree", force).value

    def pathwidth(self, g: Graph, force: bool = False) -> int:
        return self.exact_width(g, "path", force).value

    def _component_treewidth(self, g: Graph, component: int) -> Tuple[int, List[int]]:
        lower = minor_min_width(g, component)
        upper, upper_order = min_fill_ordering(g, component)
        self.logger.debug(f"Treewidth bracket [{lower}, {upper}] on {popcount(component)} vertices")
        for bound in range(lower, upper):
            order = self._elimination_within(g, component, bound)
            if order is not None:
                return bound, order
        return upper, upper_order

    def _elimination_within(self, g: Graph, component: int, bound: int) -> Optional[List[int]]:
        """Elimination ordering of component with every Q-set of size at most bound."""
        failed = set()

        def search(eliminated: int, remaining: int) -> Optional[List[int]]:
            if popcount(remaining) <= bound + 1:
                return list(iter_bits(remaining))
            if eliminated in failed:
                return None

            options = []
            for v in iter_bits(remaining):
                q = eliminated_neighbours(g, eliminated, v)
                size = popcount(q)
                if _is_filled_clique(g, eliminated, q):
                    # a simplicial vertex is always safe to eliminate first
                    options = [(size, v)] if size <= bound else []
                    break
                if size <= bound:
                    options.append((size, v))

            for _, v in sorted(options):
                rest = search(eliminated | (1 << v), remaining & ~(1 << v))
                if rest is not None:
                    return [v] + rest
            failed.add(eliminated)
            return None

        return search(0, component)

    def _component_pathwidth(self, g: Graph, component: int) -> Tuple[int, List[int]]:
        bound = minor_min_width(g, component)
        while True:
            layout = self._layout_within(g, component, bound)
            if layout is not None:
                return bound, layout
            self.logger.debug(f"No layout of vertex separation {bound}, raising bound")
            bound += 1

    def _layout_within(self, g: Graph, component: int, bound: int) -> Optional[List[int]]:
        """Layout of component whose every prefix has a boundary of size at most bound."""
        failed = set()

        def search(placed: int) -> Optional[List[int]]:
            if placed == component:
                return []
            if placed in failed:
                return None

            remaining = component & ~placed
            options = []
            for v in iter_bits(remaining):
                if not g.adj[v] & remaining & ~(1 << v):
                    options = [(0, v)]
                    break
                size = popcount(boundary(g, placed | (1 << v), component))
                if size <= bound:
                    options.append((size, v))

            for _, v in sorted(options):
                rest = search(placed | (1 << v))
                if rest is not None:
                    return [v] + rest
            failed.add(placed)
            return None

        return search(0)
