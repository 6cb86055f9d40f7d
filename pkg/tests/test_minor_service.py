import math

import pytest

from application.sweep import atlas_corpus
from domain.errors import BudgetExceededError, ParameterError
from domain.families import (
    BinaryTreeSpec,
    CompleteMultipartiteSpec,
    CompleteSpec,
    CycleSpec,
    DaddyLonglegsSpec,
    GridSpec,
    PathSpec,
    StarSpec,
)
from domain.graph import Graph, ProductKind, product
from domain.models import MinorModel
from services.minor_service import MinorService, validate_model

GRID = GridSpec(3, 3).build()


def model(*branch_sets) -> MinorModel:
    return MinorModel(tuple(frozenset(b) for b in branch_sets))


@pytest.fixture
def service() -> MinorService:
    return MinorService()


@pytest.mark.parametrize(
    "candidate, kind",
    [
        (model({0}, {1}), "wrong-size"),
        (model({0}, {1}, set()), "empty-branch-set"),
        (model({0}, {1}, {9}), "vertex-out-of-range"),
        (model({0, 2}, {1}, {3}), "disconnected-branch-set"),
        (model({0, 1}, {1, 2}, {3}), "overlapping-branch-sets"),
        (model({0}, {1}, {3}), "edge-unrealised"),
    ],
)
def test_validate_model_reports(candidate: MinorModel, kind: str) -> None:
    violations = validate_model(PathSpec(4).build(), CompleteSpec(3).build(), candidate)
    assert kind in [v.kind for v in violations]


def test_triangle_model_in_cycle() -> None:
    cycle = CycleSpec(5).build()
    assert validate_model(cycle, CompleteSpec(3).build(), model({0}, {1}, {2, 3, 4})) == []


def test_find_minor_by_subgraph(service: MinorService) -> None:
    found = service.find_minor(GRID, CycleSpec(4).build())
    assert found is not None
    assert validate_model(GRID, CycleSpec(4).build(), found) == []


def test_find_minor_by_contraction(service: MinorService) -> None:
    k4 = CompleteSpec(4).build()
    found = service.find_minor(GRID, k4)
    assert found is not None
    assert validate_model(GRID, k4, found) == []


def test_find_minor_absent(service: MinorService) -> None:
    assert service.find_minor(PathSpec(5).build(), CompleteSpec(3).build()) is None
    assert service.find_minor(GRID, CompleteSpec(5).build()) is None
    assert service.find_minor(PathSpec(2).build(), Graph.empty(0)) == MinorModel(())


def test_find_minor_budget(service: MinorService) -> None:
    with pytest.raises(BudgetExceededError):
        service.find_minor(PathSpec(13).build(), PathSpec(2).build())
    with pytest.raises(BudgetExceededError):
        service.find_minor(PathSpec(8).build(), PathSpec(7).build())
    assert service.find_minor(PathSpec(8).build(), PathSpec(7).build(), force=True) is not None


@pytest.mark.parametrize(
    "g, eta",
    [
        (Graph.empty(0), 0),
        (Graph.empty(3), 1),
        (PathSpec(4).build(), 2),
        (CycleSpec(5).build(), 3),
        (CompleteSpec(4).build(), 4),
        (GRID, 4),
    ],
)
def test_hadwiger_number(service: MinorService, g: Graph, eta: int) -> None:
    value, found = service.hadwiger_number(g)
    assert value == eta
    assert validate_model(g, CompleteSpec(eta).build(), found) == []


@pytest.mark.parametrize(
    "g, k",
    [
        (CompleteSpec(1).build(), 0),
        (CompleteSpec(3).build(), 1),
        (StarSpec(3).build(), 1),
        (DaddyLonglegsSpec(3).build(), 3),
    ],
)
def test_daddy_longlegs(service: MinorService, g: Graph, k: int) -> None:
    value, found = service.daddy_longlegs(g)
    assert value == k
    assert validate_model(g, DaddyLonglegsSpec(k).build(), found) == []


def test_daddy_longlegs_of_empty_graph(service: MinorService) -> None:
    assert service.daddy_longlegs(Graph.empty(0)) == (0, None)


def test_minor_parameters(service: MinorService) -> None:
    params = service.minor_parameters(DaddyLonglegsSpec(2).build())
    assert (params.eta, params.dll) == (2, 2)
    assert params.as_dict()["dll_model"] is not None


@pytest.mark.parametrize(
    "g, pn",
    [
        (Graph.empty(0), 0),
        (PathSpec(5).build(), 5),
        (CycleSpec(5).build(), 5),
        (StarSpec(3).build(), 3),
        (BinaryTreeSpec(2).build(), 5),
        (CompleteSpec(3).build().disjoint_union(PathSpec(2).build()), 3),
    ],
)
def test_path_number(service: MinorService, g: Graph, pn: int) -> None:
    path = service.longest_path(g)
    assert len(path) == pn
    assert len(set(path)) == pn
    assert all(g.has_edge(u, v) for u, v in zip(path, path[1:]))


@pytest.mark.parametrize(
    "g, tau",
    [
        (Graph.empty(4), 0),
        (PathSpec(4).build(), 2),
        (CycleSpec(5).build(), 3),
        (CompleteSpec(4).build(), 3),
        (StarSpec(3).build(), 1),
    ],
)
def test_vertex_cover_exact(service: MinorService, g: Graph, tau: int) -> None:
    cover = service.vertex_cover_exact(g)
    assert len(cover) == tau
    assert all(u in cover or v in cover for u, v in g.edges())


def test_dfs_cover(service: MinorService) -> None:
    assert service.dfs_cover(CompleteSpec(1).build()) == ()
    assert service.dfs_cover(PathSpec(4).build()) == (0, 1, 2)
    assert service.dfs_cover(StarSpec(3).build()) == (0,)
    with pytest.raises(ParameterError):
        service.dfs_cover(Graph.empty(2))


def test_path_and_cover(service: MinorService) -> None:
    result = service.path_and_cover(CycleSpec(4).build())
    assert result.path_number == 4
    assert result.vertex_cover_number == 2
    assert result.dfs_cover == (0, 1, 2)
    assert service.path_and_cover(Graph.empty(2)).dfs_cover is None


def test_grid_embedding(service: MinorService) -> None:
    image = service.grid_embedding(3)
    assert len(set(image)) == 9
    assert image[0] == 2

    host = product(PathSpec(5).build(), PathSpec(5).build(), ProductKind.DIRECT).base
    assert validate_model(host, GRID, service.grid_minor_model(3)) == []
    with pytest.raises(ParameterError):
        service.grid_embedding(0)


def test_tree_leaf_bound(service: MinorService) -> None:
    assert service.tree_leaf_bound(PathSpec(4).build()) == (2, 4, 4)
    assert service.tree_leaf_bound(CompleteSpec(1).build()) == (1, 1, 1)
    leaves, pn, bound = service.tree_leaf_bound(BinaryTreeSpec(2).build())
    assert (leaves, pn, bound) == (4, 5, 10)
    with pytest.raises(ParameterError):
        service.tree_leaf_bound(CycleSpec(4).build())


CONNECTED_SMALL = [g for g in atlas_corpus(6) if g.is_connected]


def test_dfs_cover_is_bounded_by_legs_and_paths(service: MinorService) -> None:
    for g in CONNECTED_SMALL:
        cover = service.dfs_cover(g)
        assert all(u in cover or v in cover for u, v in g.edges())
        dll, _ = service.daddy_longlegs(g)
        bound = math.ceil((dll + 1) * service.path_number(g) / 2)
        assert len(service.vertex_cover_exact(g)) <= len(cover) <= bound


@pytest.mark.parametrize(
    "g, k",
    [
        (PathSpec(2).build(), 0),
        (StarSpec(3).build(), 1),
        (CompleteSpec(4).build(), 1),
        (DaddyLonglegsSpec(2).build(), 2),
        (CycleSpec(5).build(), 2),
    ],
)
def test_legs_force_complete_bipartite_minor(service: MinorService, g: Graph, k: int) -> None:
    assert service.daddy_longlegs(g)[0] == k
    for legs in range(1, k + 1):
        host = product(g, PathSpec(2 * legs).build(), ProductKind.DIRECT).base
        pattern = CompleteMultipartiteSpec((legs, legs)).build()
        found = service.find_minor(host, pattern, force=True)
        assert found is not None
        assert validate_model(host, pattern, found) == []


def test_legs_force_complete_bipartite_minor_on_small_graphs(service: MinorService) -> None:
    for g in CONNECTED_SMALL:
        k = min(service.daddy_longlegs(g)[0], 2)
        if k:
            host = product(g, PathSpec(2 * k).build(), ProductKind.DIRECT).base
            assert service.find_minor(host, CompleteMultipartiteSpec((k, k)).build(), force=True) is not None
