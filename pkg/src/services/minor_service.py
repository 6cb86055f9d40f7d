"""
Minor Service Module

Minor models and the minor-flavoured graph parameters:
- validate_model and an exhaustive contraction search for H-minors
- Hadwiger number and daddy-longlegs number with witness models
- Path number, vertex cover number and the DFS-tree vertex cover
- The grid embedding P_n □ P_n → P_{2n-1} × P_{2n-1} and the tree leaf bound
"""

import logging
from itertools import combinations
from typing import Dict, List, Optional, Set, Tuple

from networkx.algorithms.isomorphism import GraphMatcher

from domain.errors import BudgetExceededError, ParameterError, ProdwidthError
from domain.families import CompleteSpec, DaddyLonglegsSpec, PathSpec, generate
from domain.graph import Graph, ProductKind, iter_bits, mask_of, popcount, product
from domain.models import MinorModel, MinorParameters, PathAndCover, Violation
from services.search_budget import SearchBudget


class MinorServiceError(ProdwidthError):
    """Base exception for minor computations."""

    pass


def validate_model(g: Graph, h: Graph, model: MinorModel) -> List[Violation]:
    """
    Check that model is a minor model of h in g.

    Returns:
        List of violations; empty when every branch set is a non-empty connected
        vertex set of g, branch sets are disjoint and every edge of h is realised
    """
    if len(model.branch_sets) != h.n:
        return [
            Violation(
                "wrong-size",
                f"Model has {len(model.branch_sets)} branch sets for {h.n} pattern vertices",
            )
        ]

    violations = []
    masks = []
    for i, branch in enumerate(model.branch_sets):
        outside = sorted(v for v in branch if not 0 <= v < g.n)
        if outside:
            violations.append(
                Violation("vertex-out-of-range", f"Branch set {i} holds {outside}", (i,))
            )
            masks.append(0)
            continue
        mask = mask_of(branch)
        masks.append(mask)
        if not mask:
            violations.append(Violation("empty-branch-set", f"Branch set {i} is empty", (i,)))
        elif not g.is_connected_set(mask):
            violations.append(
                Violation("disconnected-branch-set", f"Branch set {i} is not connected", (i,))
            )

    for i, j in combinations(range(h.n), 2):
        if masks[i] & masks[j]:
            violations.append(
                Violation(
                    "overlapping-branch-sets",
                    f"Branch sets {i} and {j} share {list(iter_bits(masks[i] & masks[j]))}",
                    (i, j),
                )
            )
    for i, j in h.edges():
        if not g.neighborhood_of(masks[i]) & masks[j]:
            violations.append(
                Violation("edge-unrealised", f"No edge of g joins branch sets {i} and {j}", (i, j))
            )
    return violations


def _reduce_host(g: Graph, pattern_min_degree: int) -> Tuple[Graph, List[int], List[Tuple[int, int, int]]]:
    """
    Delete vertices of degree at most 1 (pattern minimum degree >= 2) and
    suppress vertices of degree 2 (pattern minimum degree >= 3).

    Returns:
        (reduced graph, original id of each reduced vertex, suppressions (v, a, b))
    """
    adj: Dict[int, Set[int]] = {v: set(g.neighbors(v)) for v in range(g.n)}
    suppressed = []
    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            if v not in adj:
                continue
            degree = len(adj[v])
            if pattern_min_degree >= 2 and degree <= 1:
                for u in adj.pop(v):
                    adj[u].discard(v)
                changed = True
            elif pattern_min_degree >= 3 and degree == 2:
                a, b = sorted(adj.pop(v))
                adj[a].discard(v)
                adj[b].discard(v)
                adj[a].add(b)
                adj[b].add(a)
                suppressed.append((v, a, b))
                changed = True

    labels = sorted(adj)
    index = {v: i for i, v in enumerate(labels)}
    edges = [(index[u], index[v]) for u in labels for v in adj[u] if u < v]
    return Graph.from_edges(len(labels), edges), labels, suppressed


def _monomorphism(host: Graph, pattern: Graph) -> Optional[Dict[int, int]]:
    """Host vertex -> pattern vertex for some copy of pattern inside host."""
    if host.n < pattern.n or host.m < pattern.m or host.max_degree < pattern.max_degree:
        return None
    matcher = GraphMatcher(host.to_networkx(), pattern.to_networkx())
    return next(matcher.subgraph_monomorphisms_iter(), None)


class MinorService:
    """
    Exhaustive minor searches for desk-scale graphs.

    Attributes:
        budget (SearchBudget): Host, pattern and cover limits
    """

    def __init__(self, budget: Optional[SearchBudget] = None):
        self.budget = budget or SearchBudget()
        self.logger = logging.getLogger(__name__)

    def validate_model(self, g: Graph, h: Graph, model: MinorModel) -> List[Violation]:
        return validate_model(g, h, model)

    def find_minor(self, g: Graph, h: Graph, force: bool = False) -> Optional[MinorModel]:
        """
        Search for a model of h in g.

        Args:
            g: Host graph
            h: Pattern graph
            force: Run past the search budget

        Returns:
            MinorModel indexed by the vertices of h, or None when h is not a minor of g

        Raises:
            BudgetExceededError: When g or h exceeds its advisory size
            MinorServiceError: For unexpected failures during the search
        """
        self.budget.check("find_minor", "minor_host", g.n, force)
        self.budget.check("find_minor", "minor_pattern", h.n, force)
        try:
            return self._find_minor(g, h)
        except (BudgetExceededError, ParameterError, MinorServiceError):
            raise
        except Exception as e:
            self.logger.error(f"Error searching for minor: {str(e)}")
            raise MinorServiceError(f"Error searching for minor: {str(e)}")

    def _find_minor(self, g: Graph, h: Graph) -> Optional[MinorModel]:
        if h.n == 0:
            return MinorModel(())
        if h.n > g.n or h.m > g.m:
            return None

        direct = _monomorphism(g, h)
        if direct is not None:
            return self._model_from(direct, [1 << v for v in range(g.n)], h)

        reduced, labels, suppressed = _reduce_host(g, h.min_degree)
        self.logger.debug(
            f"Minor search: host reduced from {g.n} to {reduced.n} vertices for pattern on {h.n}"
        )
        masks = self._contraction_search(reduced, h)
        if masks is None:
            return None

        blocks = [{labels[v] for v in iter_bits(mask)} for mask in masks]
        for v, a, b in reversed(suppressed):
            for block in blocks:
                if a in block:
                    block.add(v)
                    break
        model = MinorModel(tuple(frozenset(block) for block in blocks))
        violations = validate_model(g, h, model)
        if violations:
            raise MinorServiceError(f"Minor search produced an invalid model: {violations[0].message}")
        return model

    @staticmethod
    def _model_from(mapping: Dict[int, int], blocks: List[int], h: Graph) -> MinorModel:
        branch = [0] * h.n
        for host_vertex, pattern_vertex in mapping.items():
            branch[pattern_vertex] = blocks[host_vertex]
        return MinorModel.from_masks(branch)

    def _contraction_search(self, g: Graph, h: Graph) -> Optional[List[int]]:
        """Contract edges of g, fewest lost edges first, until h fits as a subgraph of the quotient."""
        seen = set()

        def quotient(blocks: Tuple[int, ...]) -> Graph:
            rows = []
            for block in blocks:
                reach = g.neighborhood_of(block)
                rows.append(mask_of(j for j, other in enumerate(blocks) if reach & other))
            return Graph(len(blocks), tuple(rows))

        def search(blocks: Tuple[int, ...]) -> Optional[List[int]]:
            if blocks in seen:
                return None
            seen.add(blocks)
            q = quotient(blocks)
            if q.m < h.m:
                return None
            mapping = _monomorphism(q, h)
            if mapping is not None:
                branch = [0] * h.n
                for block_index, pattern_vertex in mapping.items():
                    branch[pattern_vertex] = blocks[block_index]
                return branch
            if q.n == h.n:
                return None

            moves = sorted((popcount(q.adj[i] & q.adj[j]), i, j) for i, j in q.edges())
            for _, i, j in moves:
                merged = [b for k, b in enumerate(blocks) if k not in (i, j)]
                merged.append(blocks[i] | blocks[j])
                found = search(tuple(sorted(merged)))
                if found is not None:
                    return found
            return None

        result = search(tuple(1 << v for v in range(g.n)))
        self.logger.debug(f"Contraction search visited {len(seen)} quotients")
        return result

    def hadwiger_number(self, g: Graph, force: bool = False) -> Tuple[int, MinorModel]:
        """Largest t with a K_t minor, searching t upwards, with its model."""
        self.budget.check("hadwiger_number", "minor_host", g.n, force)
        t, model = 0, MinorModel(())
        while (t + 1) <= g.n and t * (t + 1) // 2 <= g.m:
            found = self._find_minor(g, generate(CompleteSpec(t + 1)))
            if found is None:
                break
            t, model = t + 1, found
        self.logger.debug(f"Hadwiger number {t} on {g.n} vertices")
        return t, model

    def _legs(self, g: Graph, k: int) -> Optional[MinorModel]:
        """Model of W^(k): k disjoint edges u_i v_i plus a component of the rest seeing every u_i."""

        def search(used: int, legs: List[Tuple[int, int]], start: int) -> Optional[MinorModel]:
            if len(legs) == k:
                for root in g.component_masks(g.vertex_mask & ~used):
                    if all(g.adj[u] & root for u, _ in legs):
                        sets = [root] + [1 << u for u, _ in legs] + [1 << v for _, v in legs]
                        return MinorModel.from_masks(sets)
                return None
            if g.n - popcount(used) < 2 * (k - len(legs)) + 1:
                return None
            for u in range(start, g.n):
                if (used >> u) & 1:
                    continue
                for v in iter_bits(g.adj[u] & ~used):
                    found = search(used | (1 << u) | (1 << v), legs + [(u, v)], u + 1)
                    if found is not None:
                        return found
            return None

        return search(0, [], 0)

    def daddy_longlegs(self, g: Graph, force: bool = False) -> Tuple[int, Optional[MinorModel]]:
        """
        Largest k with W^(k) as a minor.

        Branch sets follow the vertex order of DaddyLonglegsSpec: root, the k
        inner leg vertices, then the k outer ones. Legs can be taken as single
        vertices, so only the root set needs searching.
        """
        self.budget.check("daddy_longlegs", "minor_host", g.n, force)
        if g.n == 0:
            return 0, None
        k, model = 0, self._legs(g, 0)
        while True:
            found = self._legs(g, k + 1)
            if found is None:
                break
            k, model = k + 1, found
        violations = validate_model(g, generate(DaddyLonglegsSpec(k)), model)
        if violations:
            raise MinorServiceError(f"Daddy-longlegs model is invalid: {violations[0].message}")
        return k, model

    def minor_parameters(self, g: Graph, force: bool = False) -> MinorParameters:
        eta, eta_model = self.hadwiger_number(g, force)
        dll, dll_model = self.daddy_longlegs(g, force)
        self.logger.info(f"Minor parameters for {g.n} vertices: eta={eta}, dll={dll}")
        return MinorParameters(eta, eta_model, dll, dll_model)

    def longest_path(self, g: Graph, force: bool = False) -> Tuple[int, ...]:
        """
        One longest path, found per component by a DP over vertex subsets
        recording which vertices can end a path covering exactly that subset.
        """
        components = g.component_masks()
        self.budget.check(
            "longest_path", "cover", max((popcount(c) for c in components), default=0), force
        )
        best: List[int] = []
        for component in components:
            sub, labels = g.induced(list(iter_bits(component)))
            path = self._longest_path_connected(sub)
            if len(path) > len(best):
                best = [labels[v] for v in path]
        return tuple(best)

    @staticmethod
    def _longest_path_connected(g: Graph) -> List[int]:
        ends = [0] * (1 << g.n)
        for v in range(g.n):
            ends[1 << v] = 1 << v
        best = 1
        for mask in range(1, 1 << g.n):
            tails = ends[mask]
            if not tails:
                continue
            if popcount(mask) > popcount(best):
                best = mask
            for v in iter_bits(tails):
                for u in iter_bits(g.adj[v] & ~mask):
                    ends[mask | (1 << u)] |= 1 << u

        v = next(iter_bits(ends[best]))
        path = [v]
        mask = best
        while mask != 1 << v:
            mask ^= 1 << v
            v = next(iter_bits(ends[mask] & g.adj[v]))
            path.append(v)
        return path

    def path_number(self, g: Graph, force: bool = False) -> int:
        return len(self.longest_path(g, force))

    def vertex_cover_exact(self, g: Graph, force: bool = False) -> Tuple[int, ...]:
        """Minimum vertex cover, per component, trying subsets by increasing size."""
        components = g.component_masks()
        self.budget.check(
            "vertex_cover", "cover", max((popcount(c) for c in components), default=0), force
        )
        cover: List[int] = []
        for component in components:
            vertices = list(iter_bits(component))
            edges = [(u, v) for u in vertices for v in iter_bits(g.adj[u]) if u < v]
            if not edges:
                continue
            for size in range(1, len(vertices) + 1):
                found = next(
                    (
                        chosen
                        for chosen in combinations(vertices, size)
                        if all(u in chosen or v in chosen for u, v in edges)
                    ),
                    None,
                )
                if found is not None:
                    cover.extend(found)
                    break
        return tuple(sorted(cover))

    def dfs_cover(self, g: Graph) -> Tuple[int, ...]:
        """
        Vertices of a DFS spanning tree from vertex 0 minus its non-root leaves.

        Neighbours are explored lowest id first. K_1 gives the empty cover.

        Raises:
            ParameterError: When g is disconnected
        """
        if g.n <= 1:
            return ()
        if not g.is_connected:
            raise ParameterError("dfs_cover needs a connected graph")

        visited = 1
        has_child = [False] * g.n
        stack = [(0, iter(g.neighbors(0)))]
        while stack:
            v, pending = stack[-1]
            for u in pending:
                if not (visited >> u) & 1:
                    visited |= 1 << u
                    has_child[v] = True
                    stack.append((u, iter(g.neighbors(u))))
                    break
            else:
                stack.pop()
        return tuple(v for v in range(g.n) if v == 0 or has_child[v])

    def path_and_cover(self, g: Graph, force: bool = False) -> PathAndCover:
        path = self.longest_path(g, force)
        cover = self.vertex_cover_exact(g, force)
        dfs = self.dfs_cover(g) if g.is_connected else None
        return PathAndCover(len(path), path, len(cover), cover, dfs)

    def grid_embedding(self, n: int) -> List[int]:
        """
        Image of every vertex i * n + j of P_n □ P_n in P_{2n-1} × P_{2n-1}.

        (i, j) goes to (i + j, n - 1 + i - j); both grid steps move the two
        coordinates by one, so grid edges land on direct-product edges.

        Raises:
            ParameterError: When n < 1
        """
        if n < 1:
            raise ParameterError(f"Grid side must be positive, got {n}")
        side = 2 * n - 1
        image = [(i + j) * side + (n - 1 + i - j) for i in range(n) for j in range(n)]

        grid = product(generate(PathSpec(n)), generate(PathSpec(n)), ProductKind.CARTESIAN).base
        host = product(generate(PathSpec(side)), generate(PathSpec(side)), ProductKind.DIRECT).base
        missing = [(u, v) for u, v in grid.edges() if not host.has_edge(image[u], image[v])]
        if missing or len(set(image)) != len(image):
            raise MinorServiceError(f"Grid embedding failed for n={n}: missing edges {missing}")
        return image

    def grid_minor_model(self, n: int) -> MinorModel:
        """Singleton branch sets of the grid embedding."""
        return MinorModel(tuple(frozenset({x}) for x in self.grid_embedding(n)))

    def tree_leaf_bound(self, tree: Graph, force: bool = False) -> Tuple[int, int, int]:
        """
        (leaves j, path number, ⌈j·pn/2⌉) for a tree; the order of the tree is
        at most the last value. Vertices of degree at most 1 count as leaves.

        Raises:
            ParameterError: When tree is not a tree
        """
        if tree.n == 0 or not tree.is_connected or tree.m != tree.n - 1:
            raise ParameterError("tree_leaf_bound needs a non-empty tree")
        leaves = sum(1 for v in range(tree.n) if tree.degree(v) <= 1)
        pn = self.path_number(tree, force)
        return leaves, pn, -(-leaves * pn // 2)
