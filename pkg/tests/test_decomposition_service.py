import pytest

from domain.errors import InvalidCertificateError, ParameterError
from domain.families import CompleteSpec, CycleSpec, GknSpec, PathSpec, StarSpec
from domain.graph import Graph, ProductKind, product, square
from domain.models import HDecomposition
from services.decomposition_service import (
    DecompositionService,
    InvalidDecompositionError,
    validate_decomposition,
)
from services.width_service import WidthService


def path_decomposition(n: int) -> HDecomposition:
    host = PathSpec(max(n - 1, 1)).build()
    bags = tuple(frozenset({i, i + 1}) for i in range(n - 1)) or (frozenset({0}),)
    return HDecomposition(host, bags)


@pytest.fixture
def service() -> DecompositionService:
    return DecompositionService()


def test_validation_reports_each_axiom() -> None:
    g = PathSpec(3).build()
    host = PathSpec(3).build()
    assert validate_decomposition(g, path_decomposition(3)) == []

    uncovered = HDecomposition(host, (frozenset({0, 1}), frozenset({1}), frozenset({1})))
    kinds = {v.kind for v in validate_decomposition(g, uncovered)}
    assert kinds == {"vertex-uncovered", "edge-uncovered"}

    split = HDecomposition(host, (frozenset({0, 1}), frozenset({2}), frozenset({1, 2})))
    assert [v.kind for v in validate_decomposition(g, split)] == ["vertex-disconnected"]

    outside = HDecomposition(Graph.empty(1), (frozenset({0, 7}),))
    assert [v.kind for v in validate_decomposition(g, outside)] == ["vertex-out-of-range"]


def test_bag_count_must_match_host() -> None:
    with pytest.raises(ParameterError):
        HDecomposition(Graph.empty(2), (frozenset({0}),))


def test_lift_product_covers_every_product(service: DecompositionService) -> None:
    g1, g2 = PathSpec(3).build(), CycleSpec(4).build()
    lifted = service.lift_product(g1, path_decomposition(3), g2)
    assert lifted.width == 2 * 4 - 1
    for kind in ProductKind:
        assert validate_decomposition(product(g1, g2, kind).base, lifted) == []


def test_lift_product_rejects_invalid_factor_decomposition(service: DecompositionService) -> None:
    broken = HDecomposition(PathSpec(2).build(), (frozenset({0, 1}), frozenset({1})))
    with pytest.raises(InvalidDecompositionError) as info:
        service.lift_product(PathSpec(3).build(), broken, CompleteSpec(2).build())
    assert info.value.violations


def test_lift_square(service: DecompositionService) -> None:
    g = PathSpec(4).build()
    lifted = service.lift_square(g, path_decomposition(4))
    assert [sorted(bag) for bag in lifted.bags] == [[0, 1, 2], [0, 1, 2, 3], [1, 2, 3]]
    assert validate_decomposition(square(g), lifted) == []


def test_vertex_cover_subdivision(service: DecompositionService) -> None:
    g1, g2 = StarSpec(3).build(), CycleSpec(4).build()
    dec2 = WidthService().exact_width(g2).decomposition
    result = service.vc_subdivision_decomp(g1, [0], g2, dec2)
    assert validate_decomposition(product(g1, g2, ProductKind.DIRECT).base, result) == []
    # cover size 1, tw(C4) = 2, max degree 2
    assert result.width <= 1 * (2 + 1) * (2 + 1)
    assert result.host.is_connected and result.host.m == result.host.n - 1


def test_vertex_cover_subdivision_on_single_node_host(service: DecompositionService) -> None:
    g1, g2 = PathSpec(3).build(), Graph.empty(1)
    dec2 = HDecomposition(Graph.empty(1), (frozenset({0}),))
    result = service.vc_subdivision_decomp(g1, [1], g2, dec2)
    assert result.host.n == 3
    assert validate_decomposition(product(g1, g2, ProductKind.DIRECT).base, result) == []


def test_vertex_cover_subdivision_preconditions(service: DecompositionService) -> None:
    g2 = CompleteSpec(2).build()
    dec2 = HDecomposition(Graph.empty(1), (frozenset({0, 1}),))
    with pytest.raises(InvalidCertificateError):
        service.vc_subdivision_decomp(PathSpec(3).build(), [0], g2, dec2)
    with pytest.raises(InvalidCertificateError):
        service.vc_subdivision_decomp(PathSpec(3).build(), [5], g2, dec2)
    with pytest.raises(ParameterError):
        service.vc_subdivision_decomp(Graph.empty(2), [], g2, dec2)


@pytest.mark.parametrize("k, n", [(0, 1), (1, 4), (3, 4), (2, 8)])
def test_gkn_decomposition(service: DecompositionService, k: int, n: int) -> None:
    g, dec = service.gkn_decomposition(k, n)
    gkn = GknSpec(k, n).build()
    assert g == product(gkn, gkn, ProductKind.STRONG).base
    assert validate_decomposition(g, dec) == []
    assert dec.width <= 4 * n + (k + 1) ** 2
    assert dec.host.is_connected and dec.host.m == dec.host.n - 1


def test_gkn_decomposition_rejects_bad_parameters(service: DecompositionService) -> None:
    with pytest.raises(ParameterError):
        service.gkn_decomposition(3, 2)


@pytest.mark.parametrize("dims, width", [([3, 2], 3), ([2, 3, 2], 7), ([4], 1)])
def test_strong_grid_decomposition(service: DecompositionService, dims, width: int) -> None:
    grid, dec = service.strong_grid_decomposition(dims)
    assert validate_decomposition(grid, dec) == []
    assert dec.width == width
    assert dec.host.max_degree <= 2


@pytest.mark.parametrize("dims", [[], [0, 2]])
def test_strong_grid_rejects_bad_dimensions(service: DecompositionService, dims) -> None:
    with pytest.raises(ParameterError):
        service.strong_grid_decomposition(dims)
