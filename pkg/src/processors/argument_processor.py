"""
Argument Processor Module

Parses the value strings of command-line flags into domain objects:
- Integer lists ("3,3") and rationals ("2/3")
- Factor statistics ("2,3,1,2" or "d=2,max_degree=3,s=1,t=2")
- Family specs ("path:5", "grid:3x4", "multipartite:2,3+1", "circulant:8;1,2")
- Budget overrides ("20" or "tree_width=18,separation=12")
- Class flag documents (JSON)
"""

import json
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Pattern, Union

from domain.errors import ParameterError, ProdwidthError
from domain.families import (
    BinaryTreeSpec,
    CirculantSpec,
    CompleteMultipartiteSpec,
    CompleteSpec,
    CycleSpec,
    DaddyLonglegsSpec,
    FamilySpec,
    GknSpec,
    GridSpec,
    PathSpec,
    StarSpec,
)
from domain.models import ClassFlags, FactorStats


class ArgumentParseError(ProdwidthError):
    """Raised when a flag value does not match its expected format."""

    pass


@dataclass(frozen=True)
class ArgumentProcessorConfig:
    """
    Patterns for flag values.

    Attributes:
        int_list_pattern (str): Comma separated non-negative integers
        fraction_pattern (str): Integer or p/q rational
        assignment_pattern (str): One name=value pair
        family_pattern (str): family name, a colon, then the family arguments
    """

    int_list_pattern: str = r"^\s*\d+(\s*,\s*\d+)*\s*$"
    fraction_pattern: str = r"^\s*(\d+)(?:\s*/\s*(\d+))?\s*$"
    assignment_pattern: str = r"^\s*([a-z_]+)\s*=\s*(\d+)\s*$"
    family_pattern: str = r"^\s*([a-z-]+)\s*:\s*(.*?)\s*$"


class ArgumentProcessor:
    """Turns flag strings into validated values, raising ArgumentParseError on bad input."""

    def __init__(self, config: ArgumentProcessorConfig = ArgumentProcessorConfig()):
        self.config = config
        self._int_list: Pattern = re.compile(config.int_list_pattern)
        self._fraction: Pattern = re.compile(config.fraction_pattern)
        self._assignment: Pattern = re.compile(config.assignment_pattern)
        self._family: Pattern = re.compile(config.family_pattern)
        self.logger = logging.getLogger(__name__)

    def parse_int_list(self, text: str) -> List[int]:
        if not self._int_list.match(text):
            raise ArgumentParseError(f"Expected comma separated integers, got {text!r}")
        return [int(part) for part in text.split(",")]

    def parse_fraction(self, text: str) -> Fraction:
        match = self._fraction.match(text)
        if not match:
            raise ArgumentParseError(f"Expected an integer or p/q, got {text!r}")
        numerator, denominator = match.group(1), match.group(2)
        if denominator is not None and int(denominator) == 0:
            raise ArgumentParseError(f"Zero denominator in {text!r}")
        return Fraction(int(numerator), int(denominator or 1))

    def parse_assignments(self, text: str) -> Dict[str, int]:
        values = {}
        for item in text.split(","):
            match = self._assignment.match(item)
            if not match:
                raise ArgumentParseError(f"Expected name=value, got {item.strip()!r}")
            values[match.group(1)] = int(match.group(2))
        return values

    def parse_factor_stats(self, text: str) -> FactorStats:
        """Positional d,max_degree[,s,t] or name=value pairs; s and t default to zero."""
        if self._int_list.match(text):
            numbers = self.parse_int_list(text)
            if len(numbers) not in (2, 4):
                raise ArgumentParseError(f"Expected d,max_degree[,s,t], got {text!r}")
            return FactorStats(*(numbers + [0, 0])[:4])
        values = self.parse_assignments(text)
        unknown = sorted(set(values) - {"d", "max_degree", "s", "t"})
        if unknown:
            raise ArgumentParseError(f"Unknown factor statistics: {unknown}")
        missing = [name for name in ("d", "max_degree") if name not in values]
        if missing:
            raise ArgumentParseError(f"Missing factor statistics: {missing}")
        return FactorStats(values["d"], values["max_degree"], values.get("s", 0), values.get("t", 0))

    def parse_budget(self, text: str) -> Union[int, Dict[str, int]]:
        """A single positive integer for every limit, or name=value overrides."""
        stripped = text.strip()
        if stripped.isdigit():
            value = int(stripped)
            if value < 1:
                raise ArgumentParseError(f"Budget must be positive, got {value}")
            return value
        return self.parse_assignments(text)

    def parse_family(self, text: str) -> FamilySpec:
        """
        Family spec from "name:args".

        Recognised names: path, cycle, complete, star, dll, binary-tree (one
        integer each), grid (RxC), multipartite (parts, optional "+overlay"),
        circulant (n;offsets) and gkn (k,n).

        Raises:
            ArgumentParseError: On an unknown name or malformed arguments
            ParameterError: When the arguments violate the family's constraints
        """
        match = self._family.match(text)
        if not match:
            raise ArgumentParseError(f"Expected family:arguments, got {text!r}")
        name, args = match.group(1), match.group(2)

        single = {
            "path": PathSpec,
            "cycle": CycleSpec,
            "complete": CompleteSpec,
            "star": StarSpec,
            "dll": DaddyLonglegsSpec,
            "binary-tree": BinaryTreeSpec,
        }
        if name in single:
            if not args.isdigit():
                raise ArgumentParseError(f"Family {name} takes one integer, got {args!r}")
            return single[name](int(args))
        if name == "grid":
            sides = re.fullmatch(r"(\d+)\s*x\s*(\d+)", args)
            if not sides:
                raise ArgumentParseError(f"Grid takes RxC, got {args!r}")
            return GridSpec(int(sides.group(1)), int(sides.group(2)))
        if name == "multipartite":
            parts, _, overlay = args.partition("+")
            if overlay and not overlay.strip().isdigit():
                raise ArgumentParseError(f"Overlay must be an integer, got {overlay!r}")
            return CompleteMultipartiteSpec(tuple(self.parse_int_list(parts)), int(overlay or 0))
        if name == "circulant":
            n, _, offsets = args.partition(";")
            if not n.strip().isdigit() or not offsets:
                raise ArgumentParseError(f"Circulant takes n;offsets, got {args!r}")
            return CirculantSpec(int(n), tuple(self.parse_int_list(offsets)))
        if name == "gkn":
            values = self.parse_int_list(args)
            if len(values) != 2:
                raise ArgumentParseError(f"gkn takes k,n, got {args!r}")
            return GknSpec(values[0], values[1])
        raise ArgumentParseError(f"Unknown family {name!r}")

    def parse_class_flags(self, text: str) -> ClassFlags:
        """ClassFlags from a JSON document (see ClassFlags.from_dict)."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            self.logger.error(f"Invalid class flag JSON: {str(e)}")
            raise ArgumentParseError(f"Invalid class flag JSON: {str(e)}")
        if not isinstance(data, dict):
            raise ArgumentParseError("Class flags must be a JSON object")
        try:
            return ClassFlags.from_dict(data)
        except ParameterError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise ArgumentParseError(f"Malformed class flags: {str(e)}")
