import logging
import os
from dataclasses import dataclass, field
from typing import Optional

from dotenv import load_dotenv

from domain.errors import ParameterError
from processors.argument_processor import ArgumentParseError, ArgumentProcessor
from services.search_budget import SearchBudget

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class LoggingConfig:
    level: str = "WARNING"
    file: Optional[str] = None

    @property
    def numeric_level(self) -> int:
        return getattr(logging, self.level)


@dataclass
class ProdwidthConfig:
    """
    Configuration for the command line.

    Attributes:
        budget (SearchBudget): Advisory limits for every exhaustive search
        logging (LoggingConfig): Log level and optional log file
    """

    budget: SearchBudget = field(default_factory=SearchBudget)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    @classmethod
    def from_env(cls) -> "ProdwidthConfig":
        """
        Read PRODWIDTH_BUDGET, PRODWIDTH_LOG_LEVEL and PRODWIDTH_LOG_FILE.

        Raises:
            ValueError: When a variable is set to a malformed value
        """
        load_dotenv()

        budget = SearchBudget()
        raw_budget = os.getenv("PRODWIDTH_BUDGET")
        if raw_budget:
            budget = apply_budget(budget, raw_budget, "PRODWIDTH_BUDGET")

        level = os.getenv("PRODWIDTH_LOG_LEVEL", "WARNING").upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"PRODWIDTH_LOG_LEVEL must be one of {LOG_LEVELS}, got {level!r}")

        return cls(budget=budget, logging=LoggingConfig(level, os.getenv("PRODWIDTH_LOG_FILE") or None))


def apply_budget(budget: SearchBudget, text: str, source: str) -> SearchBudget:
    """Apply a budget string (one integer, or name=value pairs) on top of budget."""
    try:
        parsed = ArgumentProcessor().parse_budget(text)
        if isinstance(parsed, int):
            return budget.scaled_to(parsed)
        return budget.with_overrides(parsed)
    except (ArgumentParseError, ParameterError) as e:
        raise ValueError(f"Malformed {source}: {str(e)}")
