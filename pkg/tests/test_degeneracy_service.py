from itertools import combinations_with_replacement

import pytest

from domain.errors import BudgetExceededError, ParameterError
from domain.families import BinaryTreeSpec, CompleteSpec, CycleSpec, PathSpec, StarSpec
from domain.graph import Graph, ProductKind, product
from domain.models import DegeneracyBounds, FactorStats
from services.degeneracy_service import (
    DegeneracyService,
    WitnessUnavailableError,
    bounds_cartesian,
    bounds_direct,
    bounds_strong,
    forced_direct_lower,
    strong_cbg_f,
)


@pytest.fixture
def service() -> DegeneracyService:
    return DegeneracyService()


@pytest.mark.parametrize(
    "g, d",
    [
        (Graph.empty(0), 0),
        (Graph.empty(4), 0),
        (BinaryTreeSpec(3).build(), 1),
        (CycleSpec(5).build(), 2),
        (CompleteSpec(5).build(), 4),
    ],
)
def test_degeneracy_exact(service: DegeneracyService, g: Graph, d: int) -> None:
    assert service.degeneracy_exact(g).degeneracy == d


def test_peeling_order_breaks_ties_by_lowest_id(service: DegeneracyService) -> None:
    profile = service.degeneracy_exact(PathSpec(3).build())
    assert profile.order == (0, 1, 2)
    assert profile.step_degrees == (1, 1, 0)


def test_factor_stats_from_frontier(service: DegeneracyService) -> None:
    assert service.bipartite_frontier(CycleSpec(4).build()) == [(1, 2), (2, 2)]
    assert service.factor_stats(CycleSpec(4).build()) == [FactorStats(2, 2, 1, 2), FactorStats(2, 2, 2, 2)]
    assert service.factor_stats(Graph.empty(3)) == [FactorStats(0, 0, 0, 0)]
    with pytest.raises(BudgetExceededError):
        service.factor_stats(PathSpec(13).build())


def test_cartesian_bounds_are_tight() -> None:
    bounds = bounds_cartesian(FactorStats(2, 3, 1, 2), FactorStats(1, 2, 1, 1))
    assert (bounds.lower, bounds.upper) == (3, 3)


def test_direct_bounds() -> None:
    bounds = bounds_direct(FactorStats(2, 3, 1, 3), FactorStats(1, 2, 1, 2))
    assert (bounds.lower, bounds.upper) == (2, 3)
    assert dict(bounds.terms)["min(Δ1, Δ2)"] == 2


def test_strong_bounds_for_two_edges() -> None:
    bounds = bounds_strong(FactorStats(1, 1, 1, 1), FactorStats(1, 1, 1, 1))
    assert bounds == DegeneracyBounds(3, 3, bounds.terms)


def test_strong_complete_bipartite_function() -> None:
    assert strong_cbg_f(1, 1, 1, 1) == 3
    assert strong_cbg_f(2, 2, 2, 2) == 8
    with pytest.raises(ParameterError):
        strong_cbg_f(2, 1, 1, 1)


@pytest.mark.parametrize("kind", list(ProductKind))
@pytest.mark.parametrize(
    "g1, g2",
    [
        (PathSpec(3).build(), CycleSpec(4).build()),
        (CompleteSpec(3).build(), StarSpec(3).build()),
        (CycleSpec(5).build(), PathSpec(2).build()),
    ],
)
def test_best_bounds_sandwich_exact_value(service: DegeneracyService, kind: ProductKind, g1: Graph, g2: Graph) -> None:
    bounds = service.best_bounds(g1, g2, kind)
    exact = service.degeneracy_exact(product(g1, g2, kind).base).degeneracy
    assert bounds.lower <= exact <= bounds.upper


LOW_STATS = [
    FactorStats(d, delta, s, t)
    for d in range(4)
    for delta in range(d, 4)
    for s in range(d + 1)
    for t in range(s, delta + 1)
    if (d == 0) == (delta == 0)
]


def degeneracy_of(service: DegeneracyService, pair, kind: ProductKind) -> int:
    return service.degeneracy_exact(product(*pair, kind).base).degeneracy


def test_direct_lower_witnesses_over_small_statistics(service: DegeneracyService) -> None:
    unavailable = []
    for f1, f2 in combinations_with_replacement(LOW_STATS, 2):
        lower = bounds_direct(f1, f2).lower
        if forced_direct_lower(f1, f2) > lower:
            with pytest.raises(WitnessUnavailableError):
                service.witness_direct_lower(f1, f2)
            unavailable.append((f1, f2))
            continue
        assert degeneracy_of(service, service.witness_direct_lower(f1, f2), ProductKind.DIRECT) == lower

    assert (FactorStats(1, 2, 1, 1), FactorStats(2, 3, 2, 3)) in unavailable


def test_strong_lower_witnesses_over_small_statistics(service: DegeneracyService) -> None:
    for f1, f2 in combinations_with_replacement(LOW_STATS, 2):
        pair = service.witness_strong_lower(f1, f2)
        assert degeneracy_of(service, pair, ProductKind.STRONG) == bounds_strong(f1, f2).lower


def test_forced_direct_lower() -> None:
    star_side, bipartite_side = FactorStats(1, 2, 1, 1), FactorStats(2, 3, 2, 3)
    assert bounds_direct(star_side, bipartite_side).lower == 2
    assert forced_direct_lower(star_side, bipartite_side) == 3
    assert forced_direct_lower(bipartite_side, star_side) == 3
    assert forced_direct_lower(FactorStats(2, 2, 1, 2), FactorStats(2, 2, 1, 2)) == 4


@pytest.mark.parametrize("k1, k2, expected", [(1, 1, 3), (2, 1, 3), (2, 2, 4)])
def test_strong_upper_witness(service: DegeneracyService, k1: int, k2: int, expected: int) -> None:
    g1, g2 = service.witness_strong_upper(k1, k2, 1, 1)
    assert g1.max_degree == k1 and g2.max_degree == k2
    assert service.degeneracy_exact(product(g1, g2, ProductKind.STRONG).base).degeneracy == expected


def test_strong_upper_witness_rejects_zero(service: DegeneracyService) -> None:
    with pytest.raises(ParameterError):
        service.witness_strong_upper(0, 1, 1, 1)


def test_factor_stats_constraints() -> None:
    with pytest.raises(ParameterError):
        FactorStats(1, 0, 0, 0)
    with pytest.raises(ParameterError):
        FactorStats(1, 2, 2, 2)
