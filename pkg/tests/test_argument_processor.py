import json
from fractions import Fraction

import pytest

from domain.errors import ParameterError
from domain.families import BinaryTreeSpec, CirculantSpec, CompleteMultipartiteSpec, GknSpec, GridSpec, PathSpec
from domain.models import FactorStats
from processors.argument_processor import ArgumentParseError, ArgumentProcessor


@pytest.fixture
def processor() -> ArgumentProcessor:
    return ArgumentProcessor()


def test_int_lists_and_fractions(processor: ArgumentProcessor) -> None:
    assert processor.parse_int_list(" 3, 4,5 ") == [3, 4, 5]
    assert processor.parse_fraction("2/3") == Fraction(2, 3)
    assert processor.parse_fraction("1") == Fraction(1)
    for bad in ("", "3,", "a,b"):
        with pytest.raises(ArgumentParseError):
            processor.parse_int_list(bad)
    with pytest.raises(ArgumentParseError):
        processor.parse_fraction("1/0")


def test_factor_stats_forms(processor: ArgumentProcessor) -> None:
    assert processor.parse_factor_stats("2,3,1,2") == FactorStats(2, 3, 1, 2)
    assert processor.parse_factor_stats("1,2") == FactorStats(1, 2, 0, 0)
    assert processor.parse_factor_stats("d=2, max_degree=4, s=2, t=3") == FactorStats(2, 4, 2, 3)


@pytest.mark.parametrize("text", ["1,2,3", "d=1", "d=1,max_degree=2,k=3", "x"])
def test_factor_stats_rejects_malformed(processor: ArgumentProcessor, text: str) -> None:
    with pytest.raises(ArgumentParseError):
        processor.parse_factor_stats(text)


def test_factor_stats_constraints_are_checked(processor: ArgumentProcessor) -> None:
    with pytest.raises(ParameterError):
        processor.parse_factor_stats("3,2")


def test_budget_forms(processor: ArgumentProcessor) -> None:
    assert processor.parse_budget("12") == 12
    assert processor.parse_budget("tree_width=18,cover=4") == {"tree_width": 18, "cover": 4}
    with pytest.raises(ArgumentParseError):
        processor.parse_budget("0")


@pytest.mark.parametrize(
    "text, spec",
    [
        ("path:5", PathSpec(5)),
        ("binary-tree:2", BinaryTreeSpec(2)),
        ("grid:3x4", GridSpec(3, 4)),
        ("multipartite:2,3+1", CompleteMultipartiteSpec((2, 3), 1)),
        ("multipartite:2,2", CompleteMultipartiteSpec((2, 2), 0)),
        ("circulant:8;1,2", CirculantSpec(8, (1, 2))),
        ("gkn:2,6", GknSpec(2, 6)),
    ],
)
def test_family_specs(processor: ArgumentProcessor, text: str, spec) -> None:
    assert processor.parse_family(text) == spec


@pytest.mark.parametrize("text", ["path", "path:x", "grid:3", "hexagon:4", "gkn:1", "circulant:8"])
def test_family_specs_rejected(processor: ArgumentProcessor, text: str) -> None:
    with pytest.raises(ArgumentParseError):
        processor.parse_family(text)


def test_class_flags(processor: ArgumentProcessor) -> None:
    document = {
        "name": "paths",
        "monotone": True,
        "contains_k2": True,
        "parameters": {"tw": {"bounded": True, "witness": 1}, "max_degree": True},
    }
    flags = processor.parse_class_flags(json.dumps(document))
    assert flags.name == "paths"
    assert flags.get("tw").witness == 1
    assert flags.get("max_degree").bounded
    assert flags.get("dll") is None


@pytest.mark.parametrize("text", ["{", "[1, 2]", '{"parameters": {"tw": {}}}'])
def test_class_flags_rejected(processor: ArgumentProcessor, text: str) -> None:
    with pytest.raises(ArgumentParseError):
        processor.parse_class_flags(text)


def test_class_flags_unknown_parameter(processor: ArgumentProcessor) -> None:
    with pytest.raises(ParameterError):
        processor.parse_class_flags('{"parameters": {"girth": true}}')
