import pytest

from domain.errors import ParameterError
from domain.families import (
    BinaryTreeSpec,
    CirculantSpec,
    CompleteMultipartiteSpec,
    CycleSpec,
    DaddyLonglegsSpec,
    DisjointUnionSpec,
    GknSpec,
    GridSpec,
    PathSpec,
    StarSpec,
    generate,
    regular_circulant,
)


@pytest.mark.parametrize(
    "spec, n, m",
    [
        (PathSpec(0), 0, 0),
        (PathSpec(5), 5, 4),
        (CycleSpec(6), 6, 6),
        (StarSpec(4), 5, 4),
        (DaddyLonglegsSpec(3), 7, 6),
        (BinaryTreeSpec(2), 7, 6),
        (GridSpec(3, 4), 12, 17),
        (CompleteMultipartiteSpec((2, 3), 1), 6, 11),
        (CompleteMultipartiteSpec((0, 2)), 2, 0),
        (GknSpec(2, 5), 5, 5),
        (DisjointUnionSpec((PathSpec(2), PathSpec(2))), 4, 2),
    ],
)
def test_family_sizes(spec, n: int, m: int) -> None:
    g = generate(spec)
    assert (g.n, g.m) == (n, m)


def test_binary_tree_shape() -> None:
    tree = BinaryTreeSpec(3).build()
    assert tree.is_connected
    assert tree.max_degree == 3
    assert tree.neighbors(0) == [1, 2]
    assert sum(1 for v in range(tree.n) if tree.degree(v) == 1) == 8


def test_gkn_clique_and_path() -> None:
    spec = GknSpec(2, 6)
    g = spec.build()
    assert spec.path_length == 4
    assert spec.clique == [0, 4, 5]
    assert g.has_edge(4, 5) and g.has_edge(0, 5)
    assert g.has_edge(2, 3)


@pytest.mark.parametrize(
    "build",
    [
        lambda: CycleSpec(2),
        lambda: PathSpec(-1),
        lambda: CirculantSpec(8, (5,)),
        lambda: GknSpec(3, 3),
        lambda: CompleteMultipartiteSpec((2,), -1),
    ],
)
def test_invalid_parameters(build) -> None:
    with pytest.raises(ParameterError):
        build()


@pytest.mark.parametrize("d, n", [(0, 0), (2, 5), (3, 0), (3, 5), (4, 9)])
def test_regular_circulant_is_regular(d: int, n: int) -> None:
    g = regular_circulant(d, n)
    assert all(g.degree(v) == d for v in range(g.n))
    assert g.n > d
