import logging

import pytest

from application.config import ProdwidthConfig, apply_budget
from domain.errors import BudgetExceededError, ParameterError
from services.search_budget import SearchBudget


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    for name in ("PRODWIDTH_BUDGET", "PRODWIDTH_LOG_LEVEL", "PRODWIDTH_LOG_FILE"):
        monkeypatch.setenv(name, "")
        monkeypatch.delenv(name)
    return monkeypatch


def test_budget_check_and_force() -> None:
    budget = SearchBudget()
    budget.check("treewidth", "tree_width", 16)
    with pytest.raises(BudgetExceededError) as info:
        budget.check("treewidth", "tree_width", 17)
    assert (info.value.size, info.value.limit) == (17, 16)
    budget.check("treewidth", "tree_width", 40, force=True)


def test_budget_overrides() -> None:
    budget = SearchBudget().with_overrides({"cover": 3})
    assert budget.cover == 3
    assert budget.tree_width == SearchBudget().tree_width
    assert set(SearchBudget().scaled_to(5).as_dict().values()) == {5}
    with pytest.raises(ParameterError):
        SearchBudget().with_overrides({"colour": 3})
    with pytest.raises(ParameterError):
        SearchBudget(subgraph=0)


def test_defaults_from_empty_environment(clean_env) -> None:
    config = ProdwidthConfig.from_env()
    assert config.budget == SearchBudget()
    assert config.logging.level == "WARNING"
    assert config.logging.numeric_level == logging.WARNING
    assert config.logging.file is None


def test_environment_overrides(clean_env) -> None:
    clean_env.setenv("PRODWIDTH_BUDGET", "tree_width=9,cover=4")
    clean_env.setenv("PRODWIDTH_LOG_LEVEL", "debug")
    clean_env.setenv("PRODWIDTH_LOG_FILE", "prodwidth.log")
    config = ProdwidthConfig.from_env()
    assert (config.budget.tree_width, config.budget.cover) == (9, 4)
    assert config.logging.numeric_level == logging.DEBUG
    assert config.logging.file == "prodwidth.log"


@pytest.mark.parametrize(
    "name, value",
    [
        ("PRODWIDTH_BUDGET", "lots"),
        ("PRODWIDTH_BUDGET", "colour=3"),
        ("PRODWIDTH_LOG_LEVEL", "LOUD"),
    ],
)
def test_malformed_environment(clean_env, name: str, value: str) -> None:
    clean_env.setenv(name, value)
    with pytest.raises(ValueError):
        ProdwidthConfig.from_env()


def test_apply_budget_scales_single_integer() -> None:
    assert apply_budget(SearchBudget(), "20", "--budget") == SearchBudget().scaled_to(20)
    with pytest.raises(ValueError):
        apply_budget(SearchBudget(), "0", "--budget")
