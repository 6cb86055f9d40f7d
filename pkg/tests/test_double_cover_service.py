import random
from itertools import combinations
from typing import List, Tuple

import pytest

from domain.errors import BudgetExceededError, ParameterError
from domain.families import CompleteSpec, CycleSpec, GridSpec, PathSpec
from domain.graph import Graph
from domain.models import ColouredSubgraph, PathSystem
from services.double_cover_service import DoubleCoverService, HypothesisViolationError, path_violations

GRID = GridSpec(3, 3).build()
LEFT, RIGHT = (0, 3, 6), (2, 5, 8)
ROWS = ((0, 1, 2), (3, 4, 5), (6, 7, 8))


@pytest.fixture
def service() -> DoubleCoverService:
    return DoubleCoverService()


def test_double_cover_of_triangle_is_hexagon(service: DoubleCoverService) -> None:
    cover = service.double_cover(CompleteSpec(3).build()).base
    assert (cover.n, cover.m, cover.max_degree) == (6, 6, 2)
    assert cover.is_connected
    assert cover.two_colouring() is not None


def test_double_cover_of_bipartite_graph_splits(service: DoubleCoverService) -> None:
    cover = service.double_cover(PathSpec(3).build()).base
    assert len(cover.components()) == 2


def test_bipartite_subgraph_of_triangle(service: DoubleCoverService) -> None:
    result = service.bipartite_subgraph_lb(CompleteSpec(3).build())
    assert result.sides == (1, 0, 0)
    assert result.subgraph.edges() == [(0, 1), (0, 2)]
    assert result.treewidth == 1


@pytest.mark.parametrize(
    "g", [CompleteSpec(4).build(), CompleteSpec(5).build(), CycleSpec(5).build(), GRID]
)
def test_bipartite_subgraph_keeps_half_the_edges(service: DoubleCoverService, g: Graph) -> None:
    result = service.bipartite_subgraph_lb(g)
    assert 2 * result.subgraph.m >= g.m
    assert result.subgraph.two_colouring() is not None
    assert result.subgraph.is_subgraph_of(g)


def test_path_violations() -> None:
    path = PathSpec(4).build()
    assert path_violations(path, (0, 1, 2), "p") == []
    assert path_violations(path, (), "p")[0].kind == "empty-path"
    assert path_violations(path, (0, 1, 0), "p")[0].kind == "repeated-vertex"
    assert path_violations(path, (0, 2), "p")[0].kind == "missing-edge"
    assert path_violations(path, (3, 4), "p")[0].kind == "vertex-out-of-range"


def switching_instance():
    g = Graph.from_edges(7, [(0, 1), (2, 3), (0, 4), (4, 3), (1, 5), (5, 2), (0, 6), (6, 2)])
    pieces = [ColouredSubgraph.from_path((0, 1)), ColouredSubgraph.from_path((2, 3))]
    paths = [(0, 4, 3), (1, 5, 2), (0, 6, 2)]
    return g, pieces, paths


def test_select_bipartite_paths_switches_a_piece(service: DoubleCoverService) -> None:
    g, pieces, paths = switching_instance()
    selection = service.select_bipartite_paths(g, pieces, paths)

    assert selection.selected == (0, 1)
    assert selection.switched == (0,)
    assert selection.colouring[0] == 1
    assert selection.colouring[4] == 0


def test_select_bipartite_paths_rejects_bad_input(service: DoubleCoverService) -> None:
    g, pieces, paths = switching_instance()
    with pytest.raises(HypothesisViolationError):
        service.select_bipartite_paths(g, pieces, paths + [(0, 1)])
    with pytest.raises(HypothesisViolationError):
        service.select_bipartite_paths(g, pieces + [ColouredSubgraph.from_path((1,))], paths)


def test_find_disjoint_linkage(service: DoubleCoverService) -> None:
    linkage = service.find_disjoint_linkage(GRID, LEFT, RIGHT, 3)

    assert linkage.found
    assert linkage.flow == 3
    assert sorted(linkage.paths) == list(ROWS)


def test_find_disjoint_linkage_reports_cut(service: DoubleCoverService) -> None:
    short = service.find_disjoint_linkage(GRID, LEFT, RIGHT, 4)
    assert not short.found
    assert short.flow == 3
    assert len(short.cut) == 3

    apart = service.find_disjoint_linkage(Graph.empty(2), [0], [1], 1)
    assert not apart.found
    assert apart.flow == 0


def test_find_disjoint_linkage_avoids_vertices(service: DoubleCoverService) -> None:
    linkage = service.find_disjoint_linkage(CycleSpec(4).build(), [0], [2], 1, avoid=[1])
    assert linkage.paths == ((0, 3, 2),)


def test_find_disjoint_linkage_errors(service: DoubleCoverService) -> None:
    with pytest.raises(ParameterError):
        service.find_disjoint_linkage(GRID, [0, 1], [1, 2], 1)
    with pytest.raises(ParameterError):
        service.find_disjoint_linkage(GRID, [0], [2], -1)
    with pytest.raises(BudgetExceededError):
        service.find_disjoint_linkage(PathSpec(33).build(), [0], [32], 1)


def test_validate_path_system(service: DoubleCoverService) -> None:
    valid = PathSystem((LEFT, RIGHT), {(0, 1): ROWS})
    assert service.validate_path_system(GRID, valid) == []

    cases = {
        "bad-endpoints": PathSystem((LEFT, RIGHT), {(1, 0): ROWS[:1]}),
        "touches-trunk": PathSystem((LEFT, RIGHT), {(0, 1): ((0, 3, 4, 5),)}),
        "bad-pair": PathSystem((LEFT, RIGHT), {(0, 0): ROWS[:1]}),
        "overlapping-trunks": PathSystem((LEFT, (0, 1)), {}),
        "shared-vertex": PathSystem((LEFT, RIGHT), {(0, 1): ((0, 1, 2), (3, 4, 1, 2))}),
    }
    for kind, system in cases.items():
        assert kind in [v.kind for v in service.validate_path_system(GRID, system)]


def test_lift_linked_paths(service: DoubleCoverService) -> None:
    lifted = service.lift_linked_paths(GRID, PathSystem((LEFT, RIGHT), {(0, 1): ROWS}))

    assert lifted.selected == ((0, 1),)
    assert lifted.system.trunks == ((0, 7, 12), (4, 11, 16))
    assert lifted.system.linkages[(0, 1)] == ((0, 3, 4), (7, 8, 11), (12, 15, 16))
    cover = service.double_cover(GRID).base
    assert service.validate_path_system(cover, lifted.system) == []


def test_lift_linked_paths_rejects_invalid_system(service: DoubleCoverService) -> None:
    with pytest.raises(HypothesisViolationError):
        service.lift_linked_paths(GRID, PathSystem((LEFT, RIGHT), {(0, 1): ((0, 4),)}))


def test_glm_pipeline(service: DoubleCoverService) -> None:
    glm, lifted = service.glm_pipeline(GRID, [LEFT, RIGHT], 1)

    assert lifted.selected == ((0, 1),)
    assert len(glm.paths) == 3
    assert glm.order == 2
    assert service.validate_grid_like_minor(service.double_cover(GRID).base, glm) == []


def test_glm_pipeline_needs_trunks(service: DoubleCoverService) -> None:
    with pytest.raises(ParameterError):
        service.glm_pipeline(GRID, [], 1)
    with pytest.raises(ParameterError):
        service.glm_pipeline(GRID, [LEFT, RIGHT], 0)


def random_selection_instance(seed: int) -> Tuple[Graph, List[ColouredSubgraph], List[Tuple[int, ...]]]:
    """Coloured path pieces joined by up to eight paths on fresh interiors."""
    rng = random.Random(seed)
    edges, pieces, fresh = [], [], 0
    for _ in range(rng.randint(2, 4)):
        order = rng.randint(1, 3)
        piece = ColouredSubgraph.from_path(tuple(range(fresh, fresh + order)), rng.randint(0, 1))
        pieces.append(piece)
        edges.extend(piece.edges)
        fresh += order
    paths = []
    for _ in range(rng.randint(1, 8)):
        i, j = rng.sample(range(len(pieces)), 2)
        interior = list(range(fresh, fresh + rng.randint(1, 3)))
        fresh += len(interior)
        path = (rng.choice(pieces[i].vertices), *interior, rng.choice(pieces[j].vertices))
        paths.append(path)
        edges.extend(zip(path, path[1:]))
    return Graph.from_edges(fresh, edges), pieces, paths


@pytest.mark.parametrize("seed", range(25))
def test_select_bipartite_paths_on_random_pieces(service: DoubleCoverService, seed: int) -> None:
    g, pieces, paths = random_selection_instance(seed)
    selection = service.select_bipartite_paths(g, pieces, paths)

    assert 2 * len(selection.selected) >= len(paths)
    union = [e for piece in pieces for e in piece.edges]
    union += [e for p in selection.selected for e in zip(paths[p], paths[p][1:])]
    assert Graph.from_edges(g.n, union).two_colouring() is not None
    assert all(selection.colouring[u] != selection.colouring[v] for u, v in union)


def random_path_system(seed: int) -> Tuple[Graph, PathSystem]:
    """Up to three trunks; each linked pair gets one or two disjoint paths on fresh interiors."""
    rng = random.Random(seed)
    edges, trunks, fresh = [], [], 0
    for _ in range(rng.randint(2, 3)):
        trunk = tuple(range(fresh, fresh + rng.randint(2, 4)))
        trunks.append(trunk)
        edges.extend(zip(trunk, trunk[1:]))
        fresh += len(trunk)
    linkages = {}
    for i, j in combinations(range(len(trunks)), 2):
        if rng.random() < 0.25:
            continue
        k = rng.randint(1, 2)
        starts = rng.sample(trunks[i], k)
        ends = rng.sample(trunks[j], k)
        paths = []
        for start, end in zip(starts, ends):
            interior = list(range(fresh, fresh + rng.randint(0, 3)))
            fresh += len(interior)
            path = (start, *interior, end)
            paths.append(path)
            edges.extend(zip(path, path[1:]))
        linkages[(i, j)] = tuple(paths)
    return Graph.from_edges(fresh, edges), PathSystem(tuple(trunks), linkages)


@pytest.mark.parametrize("seed", range(25))
def test_lift_linked_paths_on_random_systems(service: DoubleCoverService, seed: int) -> None:
    g, system = random_path_system(seed)
    assert service.validate_path_system(g, system) == []

    lifted = service.lift_linked_paths(g, system)
    assert service.validate_path_system(service.double_cover(g).base, lifted.system) == []
    assert 2 * len(lifted.selected) >= len(lifted.pairs)
    assert set(lifted.system.linkages) == set(lifted.selected)
    for pair in lifted.selected:
        assert len(lifted.system.linkages[pair]) >= 1
