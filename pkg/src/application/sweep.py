"""
Property sweep over a corpus of small graphs.

Properties are plain callables in a registry keyed by name:
- single-graph checks take (app, g)
- pair checks take (app, g1, g2)

A check returns None when the property holds and a message otherwise. The
corpus is ordered by (order, size), so the first failing input of a property
is reported as its minimal counterexample, in graph6.
"""

import logging
import math
from fractions import Fraction
from typing import TYPE_CHECKING, Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from domain.errors import BudgetExceededError, ProdwidthError
from domain.families import CompleteMultipartiteSpec, CompleteSpec, PathSpec
from domain.graph import Graph, ProductKind, product
from domain.models import PropertyResult, SweepReport
from services.lower_bound_service import moore_bound
from storage.codecs import encode

if TYPE_CHECKING:
    from application.prodwidth import ProdwidthApp

SingleCheck = Callable[["ProdwidthApp", Graph], Optional[str]]
PairCheck = Callable[["ProdwidthApp", Graph, Graph], Optional[str]]

ATLAS_MAX_ORDER = 7

logger = logging.getLogger(__name__)


def atlas_corpus(max_order: int) -> List[Graph]:
    """Every graph of the networkx atlas with 1 to max_order vertices, in atlas order."""
    if max_order > ATLAS_MAX_ORDER:
        logger.warning(f"The graph atlas stops at {ATLAS_MAX_ORDER} vertices; capping max order {max_order}")
    return [Graph.from_networkx(g) for g in nx.graph_atlas_g() if 1 <= g.number_of_nodes() <= max_order]


def graph6(g: Graph) -> str:
    return encode(g, "graph6").decode("ascii").strip()


# --- single-graph properties -----------------------------------------------------


def check_tw_le_pw(app: "ProdwidthApp", g: Graph) -> Optional[str]:
    tw, pw = app.width.treewidth(g), app.width.pathwidth(g)
    return None if tw <= pw else f"tw {tw} > pw {pw}"


def check_separation(app: "ProdwidthApp", g: Graph) -> Optional[str]:
    found = app.lower_bounds.min_separation_order(g, Fraction(2, 3))
    if found is None:
        return None
    tw = app.width.treewidth(g)
    return None if found[0] <= tw + 1 else f"minimum 2/3-separation order {found[0]} > tw + 1 = {tw + 1}"


def check_dfs_cover(app: "ProdwidthApp", g: Graph) -> Optional[str]:
    if not g.is_connected:
        return None
    cover = app.minors.dfs_cover(g)
    chosen = set(cover)
    if any(u not in chosen and v not in chosen for u, v in g.edges()):
        return f"DFS cover {list(cover)} misses an edge"
    tau = len(app.minors.vertex_cover_exact(g))
    dll, _ = app.minors.daddy_longlegs(g)
    pn = app.minors.path_number(g)
    bound = math.ceil((dll + 1) * pn / 2)
    if not tau <= len(cover) <= bound:
        return f"DFS cover size {len(cover)} outside [tau {tau}, ceil((dll + 1) pn / 2) = {bound}]"
    return None


def check_claw_path_minor(app: "ProdwidthApp", g: Graph) -> Optional[str]:
    if not g.is_connected:
        return None
    k = min(app.minors.daddy_longlegs(g)[0], 2)
    if k == 0:
        return None
    host = product(g, PathSpec(2 * k).build(), ProductKind.DIRECT).base
    # the pattern has at most four vertices
    found = app.minors.find_minor(host, CompleteMultipartiteSpec((k, k)).build(), force=True)
    return None if found is not None else f"no K_{{{k},{k}}} minor in G x P_{2 * k}"


def check_moore(app: "ProdwidthApp", g: Graph) -> Optional[str]:
    if not g.is_connected:
        return None
    diameter = nx.diameter(g.to_networkx())
    bound = moore_bound(g.max_degree, diameter)
    return None if g.n <= bound else f"order {g.n} exceeds Moore bound {bound}"


def check_width_bramble(app: "ProdwidthApp", g: Graph) -> Optional[str]:
    bramble = app.lower_bounds.width_bramble(g)
    order, _ = app.lower_bounds.bramble_order(g, bramble)
    tw = app.width.treewidth(g)
    return None if order == tw + 1 else f"bramble order {order} != tw + 1 = {tw + 1}"


def check_strong_clique_blowup(app: "ProdwidthApp", g: Graph) -> Optional[str]:
    tw = app.width.treewidth(g)
    for m in range(1, 4):
        if g.n * m > 12:
            break
        blown = app.width.treewidth(product(g, CompleteSpec(m).build(), ProductKind.STRONG).base)
        expected = (tw + 1) * m - 1
        if blown != expected:
            return f"tw(G strong K_{m}) = {blown}, expected {expected}"
    return None


# --- pair properties --------------------------------------------------------------


def check_clique_law(app: "ProdwidthApp", g1: Graph, g2: Graph) -> Optional[str]:
    w1, w2 = app.multipartite.clique_number(g1), app.multipartite.clique_number(g2)
    expected = {
        ProductKind.CARTESIAN: max(w1, w2) if g1.n and g2.n else 0,
        ProductKind.DIRECT: min(w1, w2),
        ProductKind.STRONG: w1 * w2,
    }
    for kind, value in expected.items():
        omega = app.multipartite.clique_number(product(g1, g2, kind).base)
        if omega != value:
            return f"{kind.value}: clique number {omega}, expected {value}"
    return None


def check_cartesian_degeneracy(app: "ProdwidthApp", g1: Graph, g2: Graph) -> Optional[str]:
    d1 = app.degeneracy.degeneracy_exact(g1).degeneracy
    d2 = app.degeneracy.degeneracy_exact(g2).degeneracy
    d = app.degeneracy.degeneracy_exact(product(g1, g2, ProductKind.CARTESIAN).base).degeneracy
    return None if d == d1 + d2 else f"degeneracy {d} != {d1} + {d2}"


def check_degeneracy_sandwich(app: "ProdwidthApp", g1: Graph, g2: Graph) -> Optional[str]:
    for kind in ProductKind:
        bounds = app.degeneracy.best_bounds(g1, g2, kind)
        d = app.degeneracy.degeneracy_exact(product(g1, g2, kind).base).degeneracy
        if not bounds.lower <= d <= bounds.upper:
            return f"{kind.value}: degeneracy {d} outside [{bounds.lower}, {bounds.upper}]"
    return None


def check_lift_product(app: "ProdwidthApp", g1: Graph, g2: Graph) -> Optional[str]:
    result = app.width.exact_width(g1, "tree")
    lifted = app.decompositions.lift_product(g1, result.decomposition, g2)
    expected = (result.value + 1) * g2.n - 1
    return None if lifted.width <= expected else f"lifted width {lifted.width} > {expected}"


def check_bound_report(app: "ProdwidthApp", g1: Graph, g2: Graph) -> Optional[str]:
    for kind in ProductKind:
        report = app.lower_bounds.bound_engine(g1, g2, kind, "always")
        if not report.is_consistent():
            return f"{kind.value}: inconsistent bound report"
    return None


SINGLE_PROPERTIES: Dict[str, SingleCheck] = {
    "tw-le-pw": check_tw_le_pw,
    "separation-le-tw": check_separation,
    "dfs-cover": check_dfs_cover,
    "moore": check_moore,
    "width-bramble": check_width_bramble,
    "claw-path-minor": check_claw_path_minor,
    "strong-clique-blowup": check_strong_clique_blowup,
}

PAIR_PROPERTIES: Dict[str, PairCheck] = {
    "clique-law": check_clique_law,
    "cartesian-degeneracy": check_cartesian_degeneracy,
    "degeneracy-sandwich": check_degeneracy_sandwich,
    "lift-product": check_lift_product,
    "bound-report": check_bound_report,
}


class SweepRunner:
    """
    Runs every registered property over a corpus and collects the first failure of each.

    Attributes:
        app (ProdwidthApp): Supplies the services the checks call
        single (Dict[str, SingleCheck]): Single-graph properties
        pairs (Dict[str, PairCheck]): Pair properties
    """

    def __init__(
        self,
        app: "ProdwidthApp",
        single: Optional[Dict[str, SingleCheck]] = None,
        pairs: Optional[Dict[str, PairCheck]] = None,
    ):
        self.app = app
        self.single = SINGLE_PROPERTIES if single is None else single
        self.pairs = PAIR_PROPERTIES if pairs is None else pairs
        self.logger = logging.getLogger(__name__)

    def run(self, graphs: Sequence[Graph], pair_order: int = 3) -> SweepReport:
        corpus = sorted(graphs, key=lambda g: (g.n, g.m))
        if not corpus:
            self.logger.warning("Empty sweep corpus; every property passes vacuously")
        factors = [g for g in corpus if g.n <= pair_order]
        pairs = [(g1, g2) for g1 in factors for g2 in factors]

        results = []
        for name, check in sorted(self.single.items()):
            results.append(self._run_property(name, 1, [(g,) for g in corpus], check))
        for name, check in sorted(self.pairs.items()):
            results.append(self._run_property(name, 2, pairs, check))

        report = SweepReport(len(corpus), len(pairs), tuple(results))
        if report.passed:
            self.logger.info(f"Sweep passed: {len(results)} properties over {len(corpus)} graphs")
        else:
            self.logger.warning(f"Sweep failed: {', '.join(report.failures)}")
        return report

    def _run_property(
        self, name: str, arity: int, inputs: Sequence[Tuple[Graph, ...]], check: Callable
    ) -> PropertyResult:
        checked = skipped = 0
        for graphs in inputs:
            try:
                message = check(self.app, *graphs)
            except BudgetExceededError as e:
                self.logger.debug(f"{name}: skipping {[graph6(g) for g in graphs]}: {str(e)}")
                skipped += 1
                continue
            except ProdwidthError as e:
                message = f"raised {type(e).__name__}: {str(e)}"
            checked += 1
            if message is not None:
                counterexample = tuple(graph6(g) for g in graphs)
                self.logger.error(f"Property {name} failed on {list(counterexample)}: {message}")
                return PropertyResult(name, arity, checked, skipped, counterexample, message)
        return PropertyResult(name, arity, checked, skipped)
