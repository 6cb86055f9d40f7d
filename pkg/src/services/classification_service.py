"""
Classification Service Module

Decides whether products of declared monotone graph classes have bounded
treewidth or pathwidth:
- A closure engine that completes class declarations with the implications
  between parameters (and their contrapositives), carrying numeric witnesses
- The characterisations for cartesian, strong and direct products
- empirical_probe: exact widths along a size sweep of two family generators
- CANNED_CLASSES: declarations and representative generators for common classes
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from domain.errors import BudgetExceededError, ParameterError, ProdwidthError
from domain.families import (
    BinaryTreeSpec,
    CompleteSpec,
    DisjointUnionSpec,
    FamilySpec,
    GridSpec,
    PathSpec,
    StarSpec,
    generate,
)
from domain.graph import ProductKind, product
from domain.models import ClassFlags, ParameterBound, ProbeReport, ProbeRow, Verdict
from services.lower_bound_service import moore_bound
from services.search_budget import SearchBudget
from services.width_service import WIDTH_KINDS, WidthService

SYMBOLS = {
    "tw": "tw",
    "pw": "pw",
    "max_degree": "Delta",
    "component_order": "v~",
    "component_cover": "tau~",
    "dll": "dll",
    "path_number": "pn",
}


class ClassificationServiceError(ProdwidthError):
    """Base exception for class classification."""

    pass


class TheoremInapplicableError(ClassificationServiceError):
    """Raised when a class is not declared monotone or lacks K_2 where required."""

    pass


class InconsistentFlagsError(ClassificationServiceError):
    """Raised when declarations contradict a closure rule."""

    pass


class UndeterminedVerdictError(ClassificationServiceError):
    """Raised when the declarations leave a needed parameter unknown."""

    def __init__(self, missing: Sequence[str]):
        self.missing = list(missing)
        super().__init__(f"Verdict depends on undeclared parameters: {', '.join(self.missing)}")


@dataclass(frozen=True)
class ClosureRule:
    """premises all bounded implies conclusion bounded, with a witness from premise witnesses."""

    name: str
    premises: Tuple[str, ...]
    conclusion: str
    witness: Callable[..., int]


CLOSURE_RULES = (
    ClosureRule("pathwidth bounds treewidth", ("pw",), "tw", lambda pw: pw),
    ClosureRule("cover number below component order", ("component_order",), "component_cover", lambda v: max(v - 1, 0)),
    ClosureRule("path number below component order", ("component_order",), "path_number", lambda v: v),
    ClosureRule("degree below component order", ("component_order",), "max_degree", lambda v: max(v - 1, 0)),
    ClosureRule(
        "Moore bound with diameter below path number",
        ("max_degree", "path_number"),
        "component_order",
        lambda d, pn: moore_bound(d, max(pn - 1, 0)),
    ),
    ClosureRule(
        "DFS-tree cover: tau <= ceil((dll + 1) pn / 2)",
        ("dll", "path_number"),
        "component_cover",
        lambda dll, pn: math.ceil((dll + 1) * pn / 2),
    ),
    ClosureRule("pathwidth at most cover number", ("component_cover",), "pw", lambda tau: tau),
    ClosureRule("legs of a spider need distinct cover vertices", ("component_cover",), "dll", lambda tau: tau),
    ClosureRule("path alternates cover vertices", ("component_cover",), "path_number", lambda tau: 2 * tau + 1),
)


def _state(facts: Dict[str, ParameterBound], key: str) -> Optional[bool]:
    bound = facts.get(key)
    return None if bound is None else bound.bounded


def close_flags(flags: ClassFlags) -> Tuple[Dict[str, ParameterBound], List[str]]:
    """
    Complete declared parameters under CLOSURE_RULES and their contrapositives.

    Returns:
        (facts, derivation) where derivation lists each derived fact with its rule

    Raises:
        InconsistentFlagsError: When a derived fact contradicts a declaration
    """
    facts = dict(flags.parameters)
    derivation = []
    changed = True
    while changed:
        changed = False
        for rule in CLOSURE_RULES:
            premises = [_state(facts, p) for p in rule.premises]
            conclusion = _state(facts, rule.conclusion)
            if all(premises):
                witnesses = [facts[p].witness for p in rule.premises]
                witness = rule.witness(*witnesses) if None not in witnesses else None
                if conclusion is False:
                    raise InconsistentFlagsError(
                        f"{flags.name}: {SYMBOLS[rule.conclusion]} declared unbounded but {rule.name} bounds it"
                    )
                current = facts.get(rule.conclusion)
                if conclusion is None or (
                    witness is not None and (current.witness is None or witness < current.witness)
                ):
                    facts[rule.conclusion] = ParameterBound(True, witness)
                    derivation.append(
                        f"{flags.name}: {SYMBOLS[rule.conclusion]} bounded"
                        + (f" (<= {witness})" if witness is not None else "")
                        + f" by {rule.name}"
                    )
                    changed = True
            elif conclusion is False:
                unknown = [p for p, s in zip(rule.premises, premises) if s is not True]
                if len(unknown) == 1 and _state(facts, unknown[0]) is None:
                    facts[unknown[0]] = ParameterBound(False)
                    derivation.append(
                        f"{flags.name}: {SYMBOLS[unknown[0]]} unbounded since {SYMBOLS[rule.conclusion]} "
                        f"is unbounded ({rule.name})"
                    )
                    changed = True
    return facts, derivation


@dataclass(frozen=True)
class CannedClass:
    flags: ClassFlags
    family: Callable[[int], FamilySpec]


def _declared(name: str, **parameters: Tuple[bool, Optional[int]]) -> ClassFlags:
    return ClassFlags(
        name=name,
        parameters={key: ParameterBound(*value) for key, value in parameters.items()},
        monotone=True,
        contains_k2=True,
    )


UNBOUNDED = (False, None)

CANNED_CLASSES: Dict[str, CannedClass] = {
    "paths": CannedClass(
        _declared(
            "paths", tw=(True, 1), pw=(True, 1), max_degree=(True, 2), component_order=UNBOUNDED,
            component_cover=UNBOUNDED, dll=(True, 2), path_number=UNBOUNDED,
        ),
        lambda s: PathSpec(s),
    ),
    "stars": CannedClass(
        _declared(
            "stars", tw=(True, 1), pw=(True, 1), max_degree=UNBOUNDED, component_order=UNBOUNDED,
            component_cover=(True, 1), dll=(True, 1), path_number=(True, 3),
        ),
        lambda s: StarSpec(s),
    ),
    "trees": CannedClass(
        _declared(
            "trees", tw=(True, 1), pw=UNBOUNDED, max_degree=UNBOUNDED, component_order=UNBOUNDED,
            component_cover=UNBOUNDED, dll=UNBOUNDED, path_number=UNBOUNDED,
        ),
        lambda s: BinaryTreeSpec(s),
    ),
    "bounded-degree-trees": CannedClass(
        _declared(
            "bounded-degree-trees", tw=(True, 1), pw=UNBOUNDED, max_degree=(True, 3), component_order=UNBOUNDED,
            component_cover=UNBOUNDED, dll=UNBOUNDED, path_number=UNBOUNDED,
        ),
        lambda s: BinaryTreeSpec(s),
    ),
    "cliques": CannedClass(
        _declared(
            "cliques", tw=UNBOUNDED, pw=UNBOUNDED, max_degree=UNBOUNDED, component_order=UNBOUNDED,
            component_cover=UNBOUNDED, dll=UNBOUNDED, path_number=UNBOUNDED,
        ),
        lambda s: CompleteSpec(s),
    ),
    "grids": CannedClass(
        _declared(
            "grids", tw=UNBOUNDED, pw=UNBOUNDED, max_degree=(True, 4), component_order=UNBOUNDED,
            component_cover=UNBOUNDED, dll=UNBOUNDED, path_number=UNBOUNDED,
        ),
        lambda s: GridSpec(s, s),
    ),
    "matchings": CannedClass(
        _declared(
            "matchings", tw=(True, 1), pw=(True, 1), max_degree=(True, 1), component_order=(True, 2),
            component_cover=(True, 1), dll=(True, 0), path_number=(True, 2),
        ),
        lambda s: DisjointUnionSpec(tuple(PathSpec(2) for _ in range(s))),
    ),
}


class ClassificationService:
    """
    Verdicts on bounded width of class products, plus an empirical probe.

    Attributes:
        width (WidthService): Exact widths for the probe
    """

    def __init__(self, budget: Optional[SearchBudget] = None, width: Optional[WidthService] = None):
        self.budget = budget or SearchBudget()
        self.width = width or WidthService(self.budget)
        self.logger = logging.getLogger(__name__)

    def close(self, flags: ClassFlags) -> Tuple[Dict[str, ParameterBound], List[str]]:
        return close_flags(flags)

    def classify(self, kind: ProductKind, width: str, c1: ClassFlags, c2: ClassFlags) -> Verdict:
        """
        Whether the product class has bounded treewidth or pathwidth.

        Cartesian and strong products: both classes have bounded width and one
        has bounded component order. Direct products: both have bounded width
        and either one has bounded component order, or one has bounded
        component cover number while the other has bounded maximum degree.

        Raises:
            ParameterError: On an unknown width kind
            TheoremInapplicableError: When a class is not monotone, or lacks K_2
                for a direct product
            UndeterminedVerdictError: When an undeclared parameter decides the verdict
        """
        if width not in WIDTH_KINDS:
            raise ParameterError(f"Width kind must be one of {WIDTH_KINDS}, got {width!r}")
        for flags in (c1, c2):
            if not flags.monotone:
                raise TheoremInapplicableError(f"Class {flags.name} is not declared monotone")
            if kind == ProductKind.DIRECT and not flags.contains_k2:
                raise TheoremInapplicableError(f"Class {flags.name} is not declared to contain K_2")

        facts1, steps1 = close_flags(c1)
        facts2, steps2 = close_flags(c2)
        derivation = tuple(steps1 + steps2)
        key = "tw" if width == "tree" else "pw"
        widths = (_state(facts1, key), _state(facts2, key))

        if False in widths:
            side = "G1" if widths[0] is False else "G2"
            return self._verdict(False, f"{key}({side}) unbounded", derivation)

        disjuncts = [
            ("v~(G1) or v~(G2) bounded", [
                (_state(facts1, "component_order"),),
                (_state(facts2, "component_order"),),
            ]),
        ]
        if kind == ProductKind.DIRECT:
            disjuncts.append(("tau~(G1) and Delta(G2) bounded", [
                (_state(facts1, "component_cover"), _state(facts2, "max_degree")),
            ]))
            disjuncts.append(("tau~(G2) and Delta(G1) bounded", [
                (_state(facts2, "component_cover"), _state(facts1, "max_degree")),
            ]))

        holding = [
            rule for rule, options in disjuncts if any(all(s is True for s in option) for option in options)
        ]
        undecided = any(
            any(all(s is not False for s in option) and None in option for option in options)
            for _, options in disjuncts
        )
        if None in widths:
            missing = [f"{key}({side})" for side, s in zip(("G1", "G2"), widths) if s is None]
            raise UndeterminedVerdictError(missing)
        if holding:
            bound = self._width_bound(kind, key, holding[0], facts1, facts2)
            prefix = f"{key}(G1), {key}(G2) bounded and "
            return self._verdict(True, prefix + holding[0], derivation, bound)
        if undecided:
            raise UndeterminedVerdictError(
                [rule for rule, options in disjuncts if any(None in option for option in options)]
            )
        return self._verdict(False, "no condition holds: " + "; ".join(rule for rule, _ in disjuncts) + " all fail", derivation)

    def _verdict(self, bounded: bool, rule: str, derivation: Tuple[str, ...], bound: Optional[int] = None) -> Verdict:
        self.logger.info(f"Verdict {'bounded' if bounded else 'unbounded'}: {rule}")
        return Verdict(bounded, rule, derivation, bound)

    @staticmethod
    def _width_bound(
        kind: ProductKind, key: str, rule: str, facts1: Dict[str, ParameterBound], facts2: Dict[str, ParameterBound]
    ) -> Optional[int]:
        def witness(facts: Dict[str, ParameterBound], name: str) -> Optional[int]:
            bound = facts.get(name)
            return bound.witness if bound is not None and bound.bounded else None

        w1, w2 = witness(facts1, key), witness(facts2, key)
        candidates = []
        if rule.startswith("v~"):
            v1, v2 = witness(facts1, "component_order"), witness(facts2, "component_order")
            if v1 is not None and w2 is not None:
                candidates.append((w2 + 1) * v1 - 1)
            if v2 is not None and w1 is not None:
                candidates.append((w1 + 1) * v2 - 1)
        elif kind == ProductKind.DIRECT:
            cover_facts, other = (facts1, facts2) if rule.startswith("tau~(G1)") else (facts2, facts1)
            tau, delta, w_other = witness(cover_facts, "component_cover"), witness(other, "max_degree"), witness(other, key)
            if None not in (tau, delta, w_other):
                candidates.append(tau * (w_other + 1) * (delta + 1))
        return min(candidates) if candidates else None

    def empirical_probe(
        self,
        kind: ProductKind,
        width: str,
        family1: Callable[[int], FamilySpec],
        family2: Callable[[int], FamilySpec],
        sizes: Iterable[int],
        force: bool = False,
    ) -> ProbeReport:
        """
        Exact widths of generate(family1(s)) ∗ generate(family2(s)) for each size.

        Sizes beyond the width budget are skipped and listed. The probe can
        only falsify a bounded verdict, never confirm one.
        """
        if width not in WIDTH_KINDS:
            raise ParameterError(f"Width kind must be one of {WIDTH_KINDS}, got {width!r}")
        rows, skipped = [], []
        for size in sizes:
            g = product(generate(family1(size)), generate(family2(size)), kind).base
            try:
                value = self.width.exact_width(g, width, force).value
            except BudgetExceededError as e:
                self.logger.warning(f"Probe skips size {size}: {str(e)}")
                skipped.append(size)
                continue
            rows.append(ProbeRow(size, g.n, value))
        report = ProbeReport(kind.value, width, tuple(rows), tuple(skipped))
        self.logger.info(f"Probe over {len(rows)} sizes, growth={report.growth}")
        return report
