"""
Search budgets for the exhaustive algorithms.

Every exponential search checks its input size against one named limit before
starting. Limits are advisory: callers may force a run past them.
"""

import logging
from dataclasses import dataclass, fields, replace
from typing import Dict

from domain.errors import BudgetExceededError, ParameterError


@dataclass(frozen=True)
class SearchBudget:
    """
    Per-operation size limits.

    Attributes:
        subgraph: Host vertices for the multipartite subgraph oracle
        tree_width: Vertices for exact treewidth
        path_width: Vertices for exact pathwidth
        minor_host: Host vertices for minor search
        minor_pattern: Pattern vertices for minor search
        separation: Vertices for minimum ε-separation search
        bramble_elements: Elements for exact bramble order
        bramble_vertices: Vertices for exact bramble order
        cover: Vertices for exact vertex cover and path number
        linkage: Vertices for disjoint-linkage flows
        factor_stats: Vertices for complete-bipartite statistics extraction
    """

    subgraph: int = 14
    tree_width: int = 16
    path_width: int = 18
    minor_host: int = 12
    minor_pattern: int = 6
    separation: int = 16
    bramble_elements: int = 64
    bramble_vertices: int = 20
    cover: int = 16
    linkage: int = 32
    factor_stats: int = 12

    def __post_init__(self):
        for item in fields(self):
            if getattr(self, item.name) < 1:
                raise ParameterError(f"Budget {item.name} must be positive")

    @classmethod
    def names(cls):
        return [item.name for item in fields(cls)]

    def check(self, operation: str, name: str, size: int, force: bool = False) -> None:
        """Raise BudgetExceededError when size is beyond the named limit and not forced."""
        limit = getattr(self, name)
        if size > limit:
            if force:
                logging.getLogger(__name__).debug(
                    f"{operation}: forcing search on size {size} beyond limit {limit}"
                )
                return
            raise BudgetExceededError(operation, size, limit)

    def with_overrides(self, overrides: Dict[str, int]) -> "SearchBudget":
        unknown = [key for key in overrides if key not in self.names()]
        if unknown:
            raise ParameterError(f"Unknown budget names: {unknown}")
        return replace(self, **overrides)

    def scaled_to(self, limit: int) -> "SearchBudget":
        """Every limit set to the same value."""
        return replace(self, **{name: limit for name in self.names()})

    def as_dict(self) -> Dict[str, int]:
        return {name: getattr(self, name) for name in self.names()}
