from fractions import Fraction

import pytest

from domain.errors import BudgetExceededError, InvalidCertificateError, ParameterError
from domain.families import CompleteSpec, CycleSpec, GridSpec, PathSpec, StarSpec
from domain.graph import Graph, ProductKind
from domain.models import Bramble, MinorModel
from services.lower_bound_service import (
    InvalidBrambleError,
    LowerBoundService,
    connectivity_lower_bound,
    formula_lower_bounds,
    moore_bound,
    separation_lower_bound,
    validate_bramble,
)
from services.width_service import WidthService


@pytest.fixture
def service() -> LowerBoundService:
    return LowerBoundService()


def bramble(*elements) -> Bramble:
    return Bramble(tuple(frozenset(e) for e in elements))


def test_closed_form_bounds() -> None:
    assert connectivity_lower_bound(1, 3) == 2
    assert connectivity_lower_bound(2, 5) == 5
    assert moore_bound(3, 2) == 10
    assert moore_bound(2, 4) == 9
    assert moore_bound(1, 3) == 2
    assert moore_bound(0, 5) == 1
    assert separation_lower_bound(Fraction(2, 3), Fraction(3, 4), 1, 4) == Fraction(4, 9)


@pytest.mark.parametrize(
    "epsilon, beta, k, n, m",
    [
        (Fraction(1, 2), Fraction(3, 4), 1, 4, None),
        (Fraction(3, 4), Fraction(2, 3), 1, 4, None),
        (Fraction(2, 3), Fraction(3, 4), 0, 4, None),
        (Fraction(2, 3), Fraction(3, 4), 2, 4, 7),
        (Fraction(2, 3), Fraction(3, 4), 1, 3, None),
        ("half", Fraction(3, 4), 1, 4, None),
    ],
)
def test_separation_bound_hypotheses(epsilon, beta, k: int, n: int, m) -> None:
    with pytest.raises(ParameterError):
        separation_lower_bound(epsilon, beta, k, n, m)


def test_formula_lower_bounds_picks_present_parameters() -> None:
    results = formula_lower_bounds({"max_degree": 3, "diameter": 2, "eta": 3, "tw": 1})
    assert results == [{"name": "moore", "value": 10}, {"name": "hadwiger", "value": 5}]

    separation = formula_lower_bounds({"epsilon": "2/3", "beta": "3/4", "k": 1, "n": 4})
    assert separation == [{"name": "separation-order", "value": "4/9"}, {"name": "separation", "value": 0}]


@pytest.mark.parametrize(
    "candidate, kind",
    [
        (bramble({0}, {3}), "elements-apart"),
        (bramble({0, 2}), "disconnected-element"),
        (bramble(set()), "empty-element"),
        (bramble({7}), "vertex-out-of-range"),
    ],
)
def test_validate_bramble_reports(candidate: Bramble, kind: str) -> None:
    violations = validate_bramble(PathSpec(4).build(), candidate)
    assert [v.kind for v in violations] == [kind]


def test_touching_elements_form_a_bramble() -> None:
    assert validate_bramble(PathSpec(4).build(), bramble({0, 1}, {2}, {1, 2, 3})) == []


@pytest.mark.parametrize("side", [1, 3, 4])
def test_grid_bramble_order(service: LowerBoundService, side: int) -> None:
    grid = GridSpec(side, side).build()
    crosses = service.grid_bramble(side)

    assert len(crosses.elements) == side * side
    assert validate_bramble(grid, crosses) == []
    order, hitting = service.bramble_order(grid, crosses)
    assert order == side
    assert len(hitting) == side


def test_grid_bramble_rejects_empty_side(service: LowerBoundService) -> None:
    with pytest.raises(ParameterError):
        service.grid_bramble(0)


def test_bramble_order_of_empty_bramble(service: LowerBoundService) -> None:
    assert service.bramble_order(PathSpec(3).build(), Bramble(())) == (0, frozenset())


def test_bramble_order_budget(service: LowerBoundService) -> None:
    with pytest.raises(BudgetExceededError):
        service.bramble_order(PathSpec(21).build(), bramble({0}))


@pytest.mark.parametrize(
    "g",
    [
        PathSpec(5).build(),
        StarSpec(3).build(),
        CycleSpec(5).build(),
        CycleSpec(6).build(),
        CompleteSpec(4).build(),
        GridSpec(2, 3).build(),
    ],
)
def test_width_bramble_matches_treewidth(service: LowerBoundService, g: Graph) -> None:
    found = service.width_bramble(g)
    assert validate_bramble(g, found) == []
    order, _ = service.bramble_order(g, found)
    assert order == WidthService().treewidth(g) + 1


def test_width_bramble_small_cases(service: LowerBoundService) -> None:
    assert service.width_bramble(Graph.empty(0)) == Bramble(())
    assert service.width_bramble(Graph.empty(3)) == bramble({0})


def test_find_bramble_needs_treewidth(service: LowerBoundService) -> None:
    assert service.find_bramble(PathSpec(4).build(), 2) is None
    assert service.find_bramble(CompleteSpec(4).build(), 4) is None
    singletons = service.find_bramble(CompleteSpec(4).build(), 3)
    assert sorted(sorted(e) for e in singletons.elements) == [[0], [1], [2], [3]]
    with pytest.raises(ParameterError):
        service.find_bramble(PathSpec(3).build(), -1)


def test_clique_minor_bramble(service: LowerBoundService) -> None:
    model = MinorModel((frozenset({0}), frozenset({1, 2}), frozenset({3})))
    cycle = CycleSpec(4).build()
    result = service.clique_minor_bramble(cycle, model)
    assert service.bramble_order(cycle, result)[0] == 3

    with pytest.raises(InvalidCertificateError):
        service.clique_minor_bramble(PathSpec(3).build(), MinorModel((frozenset({0}), frozenset({2}))))


def test_product_bramble_multiplies_order(service: LowerBoundService) -> None:
    edge = PathSpec(2).build()
    triangle = CompleteSpec(3).build()
    factor = service.width_bramble(edge)
    _, model = service.minors.hadwiger_number(triangle)

    result = service.product_bramble(edge, factor, triangle, model)
    strong = CompleteSpec(6).build()
    assert len(result.elements) == 6
    assert service.bramble_order(strong, result)[0] == 6


def test_product_bramble_rejects_non_bramble(service: LowerBoundService) -> None:
    _, model = service.minors.hadwiger_number(CompleteSpec(2).build())
    with pytest.raises(InvalidBrambleError):
        service.product_bramble(Graph.empty(2), bramble({0}, {1}), CompleteSpec(2).build(), model)


def test_min_separation_order_on_path(service: LowerBoundService) -> None:
    path = PathSpec(7).build()
    order, separation = service.min_separation_order(path, Fraction(2, 3))

    assert order == 1
    assert separation.s == frozenset({2})
    assert separation.a == frozenset({0, 1})
    assert separation.is_valid(path)


def test_min_separation_order_cases(service: LowerBoundService) -> None:
    assert service.min_separation_order(CycleSpec(6).build())[0] == 2
    assert service.min_separation_order(Graph.empty(3))[0] == 0
    assert service.min_separation_order(CompleteSpec(4).build()) is None
    assert service.min_separation_order(Graph.empty(1)) is None


def test_min_separation_order_errors(service: LowerBoundService) -> None:
    with pytest.raises(ParameterError):
        service.min_separation_order(PathSpec(4).build(), Fraction(1, 2))
    with pytest.raises(ParameterError):
        service.min_separation_order(PathSpec(4).build(), "x")
    with pytest.raises(BudgetExceededError):
        service.min_separation_order(PathSpec(17).build())


def test_separation_lemma_holds_on_grid(service: LowerBoundService) -> None:
    report = service.verify_separation_lemma(
        PathSpec(4).build(), PathSpec(4).build(), Fraction(2, 3), Fraction(3, 4)
    )
    assert report.status == "holds"
    assert report.k == 1
    assert report.bound == Fraction(4, 9)
    assert report.measured == 3
    assert report.holds is True


def test_separation_lemma_trivial_and_failing(service: LowerBoundService) -> None:
    trivial = service.verify_separation_lemma(PathSpec(2).build(), PathSpec(4).build(), "2/3", "3/4")
    assert trivial.status == "trivial"
    assert trivial.k == 0

    failing = service.verify_separation_lemma(
        PathSpec(4).build(), PathSpec(4).build(), Fraction(1, 2), Fraction(3, 4), k=1
    )
    assert failing.status == "hypotheses-fail"
    assert failing.holds is None
    assert ("2/3 <= epsilon < beta < 1", False) in failing.hypotheses


def test_bound_engine_cartesian(service: LowerBoundService) -> None:
    path = PathSpec(3).build()
    report = service.bound_engine(path, path, ProductKind.CARTESIAN, "always")

    values = {(e.name, e.factor_order): e.value for e in report.entries}
    assert values[("strong-lift", "G1,G2")] == 5
    assert values[("trivial", "G1,G2")] == 8
    assert values[("factor-subgraph", "G2,G1")] == 1
    assert values[("cartesian-connectivity", "G1,G2")] == 2
    assert "separation[G1,G2]" in [name for name, _ in report.omitted]
    assert report.exact == 3
    assert report.is_consistent()


def test_bound_engine_strong_is_tight(service: LowerBoundService) -> None:
    report = service.bound_engine(PathSpec(2).build(), CompleteSpec(3).build(), ProductKind.STRONG)

    hadwiger = [e for e in report.entries if e.name == "hadwiger"]
    assert [e.value for e in hadwiger] == [5, 5]
    assert hadwiger[0].certificate is not None
    assert report.max_lower == report.min_upper == report.exact == 5


def test_bound_engine_direct(service: LowerBoundService) -> None:
    triangle = CompleteSpec(3).build()
    report = service.bound_engine(triangle, triangle, ProductKind.DIRECT, "never")

    values = {(e.name, e.factor_order): e.value for e in report.entries}
    assert values[("vertex-cover-subdivision", "G1,G2")] == 18
    assert values[("factor-minor", "G1,G2")] == 2
    assert values[("bipartite-double-cover", "G2,G1")] == 2
    assert values[("strong-lift", "G2,G1")] == 8
    assert report.exact is None
    assert report.is_consistent()


def test_bound_engine_empty_factor(service: LowerBoundService) -> None:
    report = service.bound_engine(Graph.empty(0), PathSpec(3).build(), ProductKind.STRONG)
    assert report.entries == []
    assert report.omitted == [("all", "empty factor")]
    assert report.exact == -1


def test_bound_engine_rejects_exact_mode(service: LowerBoundService) -> None:
    with pytest.raises(ParameterError):
        service.bound_engine(PathSpec(2).build(), PathSpec(2).build(), ProductKind.DIRECT, "sometimes")
