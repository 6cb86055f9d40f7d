"""
Double Cover Service Module

The bipartite double cover G × K_2 and the path machinery that carries
structure from G into it:
- double_cover and bipartite_subgraph_lb (local max-cut)
- select_bipartite_paths: switching colourings of disjoint pieces until at
  least half of the joining paths agree
- find_disjoint_linkage: vertex-disjoint paths by unit vertex-capacity max flow
- lift_linked_paths: trunks and linkages of G lifted to G × K_2
- validate_grid_like_minor and the glm_pipeline composition
"""

import logging
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from domain.errors import BudgetExceededError, InvalidCertificateError, ParameterError, ProdwidthError
from domain.families import CompleteSpec, generate
from domain.graph import Graph, ProductGraph, ProductKind, mask_of, product
from domain.models import (
    BipartiteSelection,
    BipartiteSubgraph,
    ColouredSubgraph,
    GridLikeMinor,
    LiftedLinkage,
    Linkage,
    PathSystem,
    Violation,
)
from services.minor_service import MinorService, validate_model
from services.search_budget import SearchBudget
from services.width_service import WidthService

K2 = Graph.from_edges(2, [(0, 1)])


class DoubleCoverServiceError(ProdwidthError):
    """Base exception for double cover constructions."""

    pass


class HypothesisViolationError(DoubleCoverServiceError, InvalidCertificateError):
    """Raised when pieces, paths or path systems do not meet the required hypotheses."""

    pass


def path_violations(g: Graph, path: Sequence[int], label: str) -> List[Violation]:
    """A path must be non-empty, repeat no vertex and follow edges of g."""
    if not path:
        return [Violation("empty-path", f"{label} is empty")]
    if any(not 0 <= v < g.n for v in path):
        return [Violation("vertex-out-of-range", f"{label} leaves [0, {g.n})", tuple(path))]
    if len(set(path)) != len(path):
        return [Violation("repeated-vertex", f"{label} repeats a vertex", tuple(path))]
    broken = [(u, v) for u, v in zip(path, path[1:]) if not g.has_edge(u, v)]
    if broken:
        return [Violation("missing-edge", f"{label} uses non-edge {broken[0]}", broken[0])]
    return []


def _agrees(first: int, last: int, order: int) -> bool:
    # endpoint colours of a path on `order` vertices differ exactly when order is even
    return (first ^ last) == (order - 1) % 2


class DoubleCoverService:
    """
    Double cover constructions and path-system lifting.

    Attributes:
        budget (SearchBudget): Linkage and width limits
        width (WidthService): Exact treewidth for the bipartite subgraph bound
        minors (MinorService): Clique minors of intersection graphs
    """

    def __init__(
        self,
        budget: Optional[SearchBudget] = None,
        width: Optional[WidthService] = None,
        minors: Optional[MinorService] = None,
    ):
        self.budget = budget or SearchBudget()
        self.width = width or WidthService(self.budget)
        self.minors = minors or MinorService(self.budget)
        self.logger = logging.getLogger(__name__)

    def double_cover(self, g: Graph) -> ProductGraph:
        """G × K_2; vertex (v, c) has id 2v + c."""
        return product(g, K2, ProductKind.DIRECT)

    def bipartite_subgraph_lb(self, g: Graph, force: bool = False) -> BipartiteSubgraph:
        """
        Spanning bipartite subgraph with at least |E|/2 edges from a local max cut.

        Starting with every vertex on side 0, the lowest vertex with more
        neighbours on its own side than across is moved until none remains.
        Its treewidth lower-bounds tw(G × K_2); it is None when beyond budget.
        """
        sides = [0] * g.n
        moved = True
        while moved:
            moved = False
            for v in range(g.n):
                same = sum(1 for u in g.neighbors(v) if sides[u] == sides[v])
                if 2 * same > g.degree(v):
                    sides[v] ^= 1
                    moved = True
                    break
        cut = [(u, v) for u, v in g.edges() if sides[u] != sides[v]]
        subgraph = Graph.from_edges(g.n, cut)

        try:
            treewidth = self.width.treewidth(subgraph, force)
        except BudgetExceededError as e:
            self.logger.warning(f"Skipping treewidth of bipartite subgraph: {str(e)}")
            treewidth = None
        self.logger.debug(f"Local max cut keeps {len(cut)} of {g.m} edges")
        return BipartiteSubgraph(subgraph, tuple(sides), treewidth)

    def _selection_violations(
        self, g: Graph, pieces: Sequence[ColouredSubgraph], paths: Sequence[Sequence[int]]
    ) -> List[Violation]:
        violations = []
        owner: Dict[int, int] = {}
        for i, piece in enumerate(pieces):
            if len(piece.colours) != len(piece.vertices):
                violations.append(Violation("bad-colouring", f"Piece {i} colours do not match its vertices", (i,)))
                continue
            colour = piece.colour_of()
            for v in piece.vertices:
                if v in owner:
                    violations.append(Violation("overlapping-pieces", f"Pieces {owner[v]} and {i} share {v}", (v,)))
                owner[v] = i
            for u, v in piece.edges:
                if not g.has_edge(u, v) or u not in colour or v not in colour:
                    violations.append(Violation("missing-edge", f"Piece {i} uses {u}{v} outside g or the piece", (u, v)))
                elif colour[u] == colour[v]:
                    violations.append(Violation("bad-colouring", f"Piece {i} colours edge {u}{v} monochromatic", (u, v)))

        interiors: Dict[int, int] = {}
        for p, path in enumerate(paths):
            found = path_violations(g, path, f"Path {p}")
            if found:
                violations.extend(found)
                continue
            ends = (owner.get(path[0]), owner.get(path[-1]))
            if None in ends or ends[0] == ends[1]:
                violations.append(Violation("not-joining", f"Path {p} does not join two distinct pieces", (p,)))
            for v in path[1:-1]:
                if v in owner:
                    violations.append(Violation("touches-piece", f"Path {p} meets piece {owner[v]} inside", (p, v)))
                if v in interiors:
                    violations.append(Violation("shared-interior", f"Paths {interiors[v]} and {p} share {v}", (v,)))
                interiors[v] = p
        return violations

    def select_bipartite_paths(
        self, g: Graph, pieces: Sequence[ColouredSubgraph], paths: Sequence[Sequence[int]]
    ) -> BipartiteSelection:
        """
        Keep at least half of the joining paths so that the pieces plus the kept
        paths form a bipartite subgraph.

        A path is agreeable when its endpoint colours fit a proper colouring of
        the path. While some piece sees more disagreeable than agreeable paths,
        the lowest such piece switches its colouring; the agreeable paths are kept.

        Raises:
            HypothesisViolationError: When pieces overlap, are badly coloured, or a
                path does not join two pieces internally disjoint from the rest
        """
        violations = self._selection_violations(g, pieces, paths)
        if violations:
            raise HypothesisViolationError(f"Invalid path selection input: {violations[0].message}", violations)

        owner = {v: i for i, piece in enumerate(pieces) for v in piece.vertices}
        base = {v: c for piece in pieces for v, c in piece.colour_of().items()}
        switch = [0] * len(pieces)

        def agreeable(path: Sequence[int]) -> bool:
            first = base[path[0]] ^ switch[owner[path[0]]]
            last = base[path[-1]] ^ switch[owner[path[-1]]]
            return _agrees(first, last, len(path))

        flipped = True
        while flipped:
            flipped = False
            for i in range(len(pieces)):
                incident = [p for p in paths if i in (owner[p[0]], owner[p[-1]])]
                good = sum(1 for p in incident if agreeable(p))
                if 2 * good < len(incident):
                    switch[i] ^= 1
                    flipped = True
                    break

        selected = tuple(p for p, path in enumerate(paths) if agreeable(path))
        colouring = {v: base[v] ^ switch[owner[v]] for v in owner}
        for p in selected:
            path = paths[p]
            for position, v in enumerate(path):
                colouring[v] = colouring[path[0]] ^ (position % 2)

        edges = [e for piece in pieces for e in piece.edges]
        edges += [e for p in selected for e in zip(paths[p], paths[p][1:])]
        if any(colouring[u] == colouring[v] for u, v in edges):
            raise DoubleCoverServiceError("Switching produced a non-bipartite union")
        self.logger.debug(f"Kept {len(selected)} of {len(paths)} joining paths")
        return BipartiteSelection(
            selected, tuple(i for i, s in enumerate(switch) if s), colouring
        )

    def find_disjoint_linkage(
        self,
        g: Graph,
        sources: Iterable[int],
        targets: Iterable[int],
        k: int,
        avoid: Iterable[int] = (),
        force: bool = False,
    ) -> Linkage:
        """
        k vertex-disjoint paths from sources to targets, each meeting sources
        only at its first vertex and targets only at its last.

        Runs a unit vertex-capacity max flow on the split graph; when the flow
        is below k the returned Linkage carries a minimum vertex cut instead.

        Raises:
            ParameterError: When the terminal sets overlap or k is negative
            BudgetExceededError: When g exceeds the linkage budget
        """
        self.budget.check("find_disjoint_linkage", "linkage", g.n, force)
        source_set, target_set = set(sources), set(targets)
        blocked = set(avoid) - source_set - target_set
        if k < 0:
            raise ParameterError(f"Linkage size must be non-negative, got {k}")
        if source_set & target_set:
            raise ParameterError(f"Terminal sets overlap in {sorted(source_set & target_set)}")

        network = nx.DiGraph()
        network.add_nodes_from(["s", "t"])
        for v in range(g.n):
            if v in blocked:
                continue
            network.add_edge(("in", v), ("out", v), capacity=1)
            if v in source_set:
                network.add_edge("s", ("in", v))
            if v in target_set:
                network.add_edge(("out", v), "t")
        for u, v in g.edges():
            if u in blocked or v in blocked:
                continue
            network.add_edge(("out", u), ("in", v))
            network.add_edge(("out", v), ("in", u))

        value, flow = nx.maximum_flow(network, "s", "t")
        if value < k:
            _, (reachable, _) = nx.minimum_cut(network, "s", "t")
            cut = tuple(
                sorted(v for v in range(g.n) if ("in", v) in reachable and ("out", v) not in reachable)
            )
            self.logger.info(f"Only {value} disjoint paths exist, cut {list(cut)}")
            return Linkage((), value, cut, found=False)

        paths = []
        for start in sorted(v for v in source_set if flow["s"].get(("in", v), 0) > 0):
            walk = [start]
            node = ("out", start)
            while True:
                nxt = next(x for x, f in sorted(flow[node].items(), key=str) if f > 0)
                flow[node][nxt] -= 1
                if nxt == "t":
                    break
                walk.append(nxt[1])
                node = ("out", nxt[1])
            paths.append(self._trim(walk, source_set, target_set))
        paths.sort()
        return Linkage(tuple(paths[:k]), value)

    @staticmethod
    def _trim(walk: List[int], sources: set, targets: set) -> Tuple[int, ...]:
        end = next(i for i, v in enumerate(walk) if v in targets)
        start = max(i for i, v in enumerate(walk[: end + 1]) if v in sources)
        return tuple(walk[start : end + 1])

    def validate_path_system(self, g: Graph, system: PathSystem) -> List[Violation]:
        """
        Trunks are disjoint paths; each linkage path runs from its first trunk
        to its second with an interior avoiding every trunk, and the paths of
        one pair are vertex-disjoint.
        """
        violations = []
        trunk_of: Dict[int, int] = {}
        for i, trunk in enumerate(system.trunks):
            violations.extend(path_violations(g, trunk, f"Trunk {i}"))
            for v in trunk:
                if v in trunk_of:
                    violations.append(Violation("overlapping-trunks", f"Trunks {trunk_of[v]} and {i} share {v}", (v,)))
                trunk_of[v] = i

        for (i, j), paths in sorted(system.linkages.items()):
            if not (0 <= i < len(system.trunks) and 0 <= j < len(system.trunks)) or i == j:
                violations.append(Violation("bad-pair", f"Linkage pair ({i}, {j}) names no two trunks", (i, j)))
                continue
            used = set()
            for path in paths:
                label = f"Linkage path {list(path)} of pair ({i}, {j})"
                found = path_violations(g, path, label)
                if found:
                    violations.extend(found)
                    continue
                if trunk_of.get(path[0]) != i or trunk_of.get(path[-1]) != j:
                    violations.append(Violation("bad-endpoints", f"{label} does not run from trunk {i} to trunk {j}", (i, j)))
                if any(v in trunk_of for v in path[1:-1]):
                    violations.append(Violation("touches-trunk", f"{label} meets a trunk inside", (i, j)))
                if used & set(path):
                    violations.append(Violation("shared-vertex", f"{label} meets another path of its pair", (i, j)))
                used |= set(path)
        return violations

    def lift_linked_paths(self, g: Graph, system: PathSystem) -> LiftedLinkage:
        """
        Lift trunks and a majority of linkages into G × K_2.

        Per pair, the linkage paths that share the majority agreeability
        relative to alternating trunk colourings are kept. One representative
        per pair is rebuilt on fresh interior vertices in an auxiliary graph and
        select_bipartite_paths picks the pairs X; its colouring φ lifts trunks
        to {(v, φ(v))} and every kept path of a pair in X along its own
        alternating colouring.

        Raises:
            HypothesisViolationError: When system is not a valid path system of g
        """
        violations = self.validate_path_system(g, system)
        if violations:
            raise HypothesisViolationError(f"Invalid path system: {violations[0].message}", violations)
        self.logger.debug("Agreeability is judged by path parity only")

        colour = {v: position % 2 for trunk in system.trunks for position, v in enumerate(trunk)}
        pairs = sorted(pair for pair, paths in system.linkages.items() if paths)
        majority: Dict[Tuple[int, int], List[Tuple[int, ...]]] = {}
        for pair in pairs:
            paths = system.linkages[pair]
            good = [p for p in paths if _agrees(colour[p[0]], colour[p[-1]], len(p))]
            bad = [p for p in paths if not _agrees(colour[p[0]], colour[p[-1]], len(p))]
            majority[pair] = good if len(good) > len(bad) else bad

        # auxiliary graph: trunk vertices keep their ids, representative interiors are fresh
        fresh = g.n
        aux_edges = [e for trunk in system.trunks for e in zip(trunk, trunk[1:])]
        representatives = []
        for pair in pairs:
            path = majority[pair][0]
            rebuilt = [path[0]] + list(range(fresh, fresh + len(path) - 2)) + [path[-1]]
            fresh += len(path) - 2
            representatives.append(rebuilt)
            aux_edges.extend(zip(rebuilt, rebuilt[1:]))
        auxiliary = Graph.from_edges(fresh, aux_edges)
        pieces = [ColouredSubgraph.from_path(trunk) for trunk in system.trunks]
        selection = self.select_bipartite_paths(auxiliary, pieces, representatives)
        phi = selection.colouring

        selected = tuple(pairs[p] for p in selection.selected)
        lifted_trunks = tuple(tuple(2 * v + phi[v] for v in trunk) for trunk in system.trunks)
        lifted_links = {}
        for pair in selected:
            lifted = []
            for path in majority[pair]:
                first = phi[path[0]]
                if not _agrees(first, phi[path[-1]], len(path)):
                    raise DoubleCoverServiceError(f"Kept path {list(path)} disagrees after switching")
                lifted.append(tuple(2 * v + (first ^ (position % 2)) for position, v in enumerate(path)))
            lifted_links[pair] = tuple(lifted)

        result = PathSystem(lifted_trunks, lifted_links)
        cover = self.double_cover(g).base
        violations = self.validate_path_system(cover, result)
        if violations:
            raise DoubleCoverServiceError(f"Lifted path system is invalid: {violations[0].message}")
        self.logger.info(f"Lifted {len(system.trunks)} trunks, kept {len(selected)} of {len(pairs)} pairs")
        return LiftedLinkage(result, tuple(pairs), selected)

    def intersection_graph(self, paths: Sequence[Sequence[int]]) -> Graph:
        masks = [mask_of(p) for p in paths]
        edges = [(i, j) for i, j in combinations(range(len(paths)), 2) if masks[i] & masks[j]]
        return Graph.from_edges(len(paths), edges)

    def validate_grid_like_minor(self, g: Graph, glm: GridLikeMinor) -> List[Violation]:
        """Paths valid in g, bipartite intersection graph, and a K_order model inside it."""
        violations = []
        for i, path in enumerate(glm.paths):
            violations.extend(path_violations(g, path, f"Path {i}"))
        if violations:
            return violations
        meets = self.intersection_graph(glm.paths)
        if meets.two_colouring() is None:
            violations.append(Violation("not-bipartite", "Intersection graph of the paths has an odd cycle"))
        violations.extend(validate_model(meets, generate(CompleteSpec(glm.order)), glm.model))
        return violations

    def glm_pipeline(
        self, g: Graph, trunks: Sequence[Sequence[int]], k: int, force: bool = False
    ) -> Tuple[GridLikeMinor, LiftedLinkage]:
        """
        Grid-like minor in G × K_2 from user-supplied disjoint trunks of G.

        Every trunk pair is linked by up to 2k disjoint paths avoiding the other
        trunks; pairs with fewer than 2k paths are left out. The lifted trunks
        plus one lifted linkage path per kept pair, chosen pairwise disjoint,
        form the path set; its order is the Hadwiger number of their
        intersection graph.

        Raises:
            ParameterError: When no trunk is given or k < 1
        """
        if not trunks or k < 1:
            raise ParameterError("glm_pipeline needs at least one trunk and k >= 1")
        linkages = {}
        for i, j in combinations(range(len(trunks)), 2):
            others = [v for c, trunk in enumerate(trunks) if c not in (i, j) for v in trunk]
            linkage = self.find_disjoint_linkage(g, trunks[i], trunks[j], 2 * k, others, force)
            if linkage.found:
                linkages[(i, j)] = linkage.paths
        system = PathSystem(tuple(tuple(t) for t in trunks), linkages)
        lifted = self.lift_linked_paths(g, system)

        paths = list(lifted.system.trunks)
        used = 0
        for pair in lifted.selected:
            for path in lifted.system.linkages[pair]:
                if not used & mask_of(path):
                    used |= mask_of(path)
                    paths.append(path)
                    break

        meets = self.intersection_graph(paths)
        order, model = self.minors.hadwiger_number(meets, force=True)
        glm = GridLikeMinor(tuple(paths), order, model)
        violations = self.validate_grid_like_minor(self.double_cover(g).base, glm)
        if violations:
            raise DoubleCoverServiceError(f"Pipeline produced an invalid grid-like minor: {violations[0].message}")
        self.logger.info(f"Grid-like minor of order {order} from {len(paths)} paths")
        return glm, lifted
