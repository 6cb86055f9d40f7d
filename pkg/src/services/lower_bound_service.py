"""
Lower Bound Service Module

Treewidth lower-bound certificates and the bound engine:
- Brambles: validation, exact order by hitting-set branch and bound, grid
  crosses, strong-product and clique-minor constructions, and a search for a
  bramble matching the treewidth of a small graph
- Minimum ε-separations and the separation lemma for cartesian products
- Closed-form bounds (connectivity, separation, Moore, Hadwiger, strong lift,
  vertex cover)
- bound_engine: every applicable upper and lower bound for one product, in
  both factor orders, checked against the exact width when it is affordable
"""

import logging
import math
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from domain.errors import BudgetExceededError, InvalidCertificateError, ParameterError, ProdwidthError
from domain.families import CompleteSpec, generate
from domain.graph import Graph, ProductKind, iter_bits, mask_of, popcount, product
from domain.models import (
    Bramble,
    BoundEntry,
    BoundReport,
    MinorModel,
    Separation,
    SeparationLemmaReport,
    Violation,
)
from services.decomposition_service import DecompositionService
from services.minor_service import MinorService, validate_model
from services.search_budget import SearchBudget
from services.width_service import WidthService

TWO_THIRDS = Fraction(2, 3)
EXACT_MODES = ("auto", "always", "never")
AUTO_EXACT_LIMIT = 14


class LowerBoundServiceError(ProdwidthError):
    """Base exception for lower-bound computations."""

    pass


class InvalidBrambleError(LowerBoundServiceError, InvalidCertificateError):
    """Raised when a bramble handed to a construction fails validation."""

    pass


class BoundInapplicableError(LowerBoundServiceError):
    """Raised inside the bound engine when a bound's hypotheses do not hold for a factor pair."""

    pass


def _as_fraction(value: Any, name: str) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParameterError(f"{name} must be a rational number, got {value!r}")


def validate_bramble(g: Graph, bramble: Bramble) -> List[Violation]:
    """Elements must be non-empty connected vertex sets of g that pairwise touch."""
    violations = []
    masks = []
    for i, element in enumerate(bramble.elements):
        if not element:
            violations.append(Violation("empty-element", f"Element {i} is empty", (i,)))
            continue
        outside = sorted(v for v in element if not 0 <= v < g.n)
        if outside:
            violations.append(Violation("vertex-out-of-range", f"Element {i} holds {outside}", (i,)))
            continue
        mask = mask_of(element)
        if not g.is_connected_set(mask):
            violations.append(Violation("disconnected-element", f"Element {i} is not connected", (i,)))
        masks.append((i, mask))

    for (i, a), (j, b) in combinations(masks, 2):
        if not a & (b | g.neighborhood_of(b)):
            violations.append(Violation("elements-apart", f"Elements {i} and {j} do not touch", (i, j)))
    return violations


def connectivity_lower_bound(k: int, n: int) -> int:
    """tw(G1 □ G2) ≥ k(n − 2k + 2) − 1 for k-connected factors with at least n vertices each."""
    if k < 1 or n < 1:
        raise ParameterError(f"Connectivity bound needs k, n >= 1, got k={k}, n={n}")
    return k * (n - 2 * k + 2) - 1


def separation_lower_bound(
    epsilon: Any, beta: Any, k: int, n: int, m: Optional[int] = None
) -> Fraction:
    """
    (1 − ε/β)·k·n, the least order of an ε-separation of G □ H.

    Args:
        epsilon: Balance of the product separation, in [2/3, 1)
        beta: Balance of the factor separations, in (ε, 1)
        k: Least order of a β-separation of G
        n: Order of H
        m: Order of G; when given, m ≥ kn is checked

    Raises:
        ParameterError: Naming the first failed hypothesis
    """
    epsilon = _as_fraction(epsilon, "epsilon")
    beta = _as_fraction(beta, "beta")
    if not TWO_THIRDS <= epsilon < 1:
        raise ParameterError(f"Hypothesis 2/3 <= epsilon < 1 fails for epsilon={epsilon}")
    if not epsilon < beta < 1:
        raise ParameterError(f"Hypothesis epsilon < beta < 1 fails for beta={beta}")
    if k < 1 or n < 1:
        raise ParameterError(f"Hypothesis k, n >= 1 fails for k={k}, n={n}")
    if m is not None and m < k * n:
        raise ParameterError(f"Hypothesis m >= kn fails for m={m}, k={k}, n={n}")
    if n * (1 - beta) < 1:
        raise ParameterError(f"Hypothesis n >= 1/(1-beta) fails for n={n}, beta={beta}")
    return (1 - epsilon / beta) * k * n


def moore_bound(max_degree: int, diameter: int) -> int:
    """Largest order of a connected graph with the given maximum degree and diameter."""
    if max_degree < 0 or diameter < 0:
        raise ParameterError("Moore bound needs non-negative degree and diameter")
    if max_degree == 0:
        return 1
    if max_degree == 1:
        return min(2, diameter + 1)
    if max_degree == 2:
        return 2 * diameter + 1
    return 1 + max_degree * ((max_degree - 1) ** diameter - 1) // (max_degree - 2)


def hadwiger_bound(eta: int, tw: int) -> int:
    return eta * (tw + 1) - 1


def strong_lift_bound(tw: int, n: int) -> int:
    return (tw + 1) * n - 1


def vertex_cover_bound(cover_number: int, tw: int, max_degree: int) -> int:
    return cover_number * (tw + 1) * (max_degree + 1)


def formula_lower_bounds(params: Dict[str, Any]) -> List[Dict[str, Any]]:
    """
    Evaluate every closed-form bound whose parameters are present.

    Recognised keys: k, n (connectivity); epsilon, beta, k, n, m (separation);
    max_degree, diameter (moore); eta, tw (hadwiger).

    Raises:
        ParameterError: When present parameters violate a hypothesis
    """
    results = []
    if "k" in params and "n" in params and "epsilon" not in params:
        results.append({"name": "connectivity", "value": connectivity_lower_bound(params["k"], params["n"])})
    if all(key in params for key in ("epsilon", "beta", "k", "n")):
        bound = separation_lower_bound(params["epsilon"], params["beta"], params["k"], params["n"], params.get("m"))
        results.append({"name": "separation-order", "value": str(bound)})
        results.append({"name": "separation", "value": math.ceil(bound - 1)})
    if "max_degree" in params and "diameter" in params:
        results.append({"name": "moore", "value": moore_bound(params["max_degree"], params["diameter"])})
    if "eta" in params and "tw" in params:
        results.append({"name": "hadwiger", "value": hadwiger_bound(params["eta"], params["tw"])})
    return results


class LowerBoundService:
    """
    Bramble, separation and bound-engine computations.

    Attributes:
        budget (SearchBudget): Limits for the exhaustive searches
        width (WidthService): Exact widths of factors and products
        minors (MinorService): Hadwiger numbers and vertex covers
        decompositions (DecompositionService): Upper-bound certificates
    """

    def __init__(
        self,
        budget: Optional[SearchBudget] = None,
        width: Optional[WidthService] = None,
        minors: Optional[MinorService] = None,
        decompositions: Optional[DecompositionService] = None,
    ):
        self.budget = budget or SearchBudget()
        self.width = width or WidthService(self.budget)
        self.minors = minors or MinorService(self.budget)
        self.decompositions = decompositions or DecompositionService()
        self.logger = logging.getLogger(__name__)

    def validate_bramble(self, g: Graph, bramble: Bramble) -> List[Violation]:
        return validate_bramble(g, bramble)

    def _require_bramble(self, g: Graph, bramble: Bramble, role: str) -> None:
        violations = validate_bramble(g, bramble)
        if violations:
            raise InvalidBrambleError(f"{role} is not a bramble: {violations[0].message}", violations)

    def bramble_order(self, g: Graph, bramble: Bramble, force: bool = False) -> Tuple[int, frozenset]:
        """
        Exact order of a bramble with one minimum hitting set.

        Branches on the unhit element with the fewest allowed hitters; a vertex
        is forbidden in later siblings once its branch is done. Greedy disjoint
        packings give the lower bound used for pruning.

        Raises:
            BudgetExceededError: When the element or vertex count is beyond budget
        """
        self.budget.check("bramble_order", "bramble_elements", len(bramble.elements), force)
        self.budget.check("bramble_order", "bramble_vertices", g.n, force)
        masks = sorted(set(bramble.masks()), key=lambda m: (popcount(m), m))
        if not masks:
            return 0, frozenset()
        if not all(masks):
            raise InvalidBrambleError("Bramble has an empty element and cannot be hit")

        chosen, unhit = 0, list(masks)
        while unhit:
            v = max(range(g.n), key=lambda x: (sum((m >> x) & 1 for m in unhit), -x))
            chosen |= 1 << v
            unhit = [m for m in unhit if not (m >> v) & 1]
        best = [popcount(chosen), chosen]

        def packing(unhit: List[int], forbidden: int) -> int:
            used, count = 0, 0
            for m in unhit:
                if not m & ~forbidden & used:
                    used |= m & ~forbidden
                    count += 1
            return count

        def search(hitting: int, size: int, unhit: List[int], forbidden: int) -> None:
            if not unhit:
                if size < best[0]:
                    best[0], best[1] = size, hitting
                return
            if size + packing(unhit, forbidden) >= best[0]:
                return
            element = min(unhit, key=lambda m: popcount(m & ~forbidden))
            for v in iter_bits(element & ~forbidden):
                search(hitting | (1 << v), size + 1, [m for m in unhit if not (m >> v) & 1], forbidden)
                forbidden |= 1 << v

        search(0, 0, masks, 0)
        self.logger.debug(f"Bramble of {len(masks)} elements has order {best[0]}")
        return best[0], frozenset(iter_bits(best[1]))

    def grid_bramble(self, l: int) -> Bramble:
        """The l² crosses (row i plus column j) of the l × l grid, vertex (i, j) = i·l + j."""
        if l < 1:
            raise ParameterError(f"Grid side must be positive, got {l}")
        elements = []
        for i in range(l):
            for j in range(l):
                row = {i * l + c for c in range(l)}
                column = {r * l + j for r in range(l)}
                elements.append(frozenset(row | column))
        return Bramble(tuple(elements))

    def product_bramble(self, g: Graph, g_bramble: Bramble, h: Graph, h_model: MinorModel) -> Bramble:
        """
        Bramble {X × B_i} of G ⊠ H from a bramble of G and a K_t model in H.

        Its order is at least t times the order of the input bramble.

        Raises:
            InvalidBrambleError: When g_bramble is not a bramble of g
            InvalidCertificateError: When h_model is not a clique-minor model in h
        """
        self._require_bramble(g, g_bramble, "Factor bramble")
        t = len(h_model.branch_sets)
        violations = validate_model(h, generate(CompleteSpec(t)), h_model)
        if violations:
            raise InvalidCertificateError(f"K_{t} model is invalid: {violations[0].message}", violations)

        elements = tuple(
            frozenset(x * h.n + u for x in element for u in branch)
            for element in g_bramble.elements
            for branch in h_model.branch_sets
        )
        result = Bramble(elements)
        strong = product(g, h, ProductKind.STRONG).base
        violations = validate_bramble(strong, result)
        if violations:
            raise LowerBoundServiceError(f"product_bramble produced an invalid bramble: {violations[0].message}")
        return result

    def clique_minor_bramble(self, h: Graph, model: MinorModel) -> Bramble:
        """Branch sets of a K_t model form a bramble of order t."""
        t = len(model.branch_sets)
        violations = validate_model(h, generate(CompleteSpec(t)), model)
        if violations:
            raise InvalidCertificateError(f"K_{t} model is invalid: {violations[0].message}", violations)
        return Bramble(tuple(model.branch_sets))

    def find_bramble(self, g: Graph, k: int) -> Optional[Bramble]:
        """
        Bramble of order at least k + 1, or None when tw(g) < k.

        For every k-set S one component of G − S is chosen so that all chosen
        components pairwise touch; no k-set can hit them all.
        """
        if k < 0:
            raise ParameterError(f"Bramble order target must be non-negative, got {k}")
        if k >= g.n:
            return None

        closed = {}

        def touches(a: int, b: int) -> bool:
            if b not in closed:
                closed[b] = b | g.neighborhood_of(b)
            return bool(a & closed[b])

        domains = [g.component_masks(g.vertex_mask & ~mask_of(s)) for s in combinations(range(g.n), k)]

        def search(domains: List[List[int]], assigned: Dict[int, int]) -> Optional[Dict[int, int]]:
            open_vars = [i for i in range(len(domains)) if i not in assigned]
            if not open_vars:
                return assigned
            var = min(open_vars, key=lambda i: (len(domains[i]), i))
            for value in domains[var]:
                narrowed = list(domains)
                dead = False
                for other in open_vars:
                    if other == var:
                        continue
                    narrowed[other] = [c for c in domains[other] if touches(c, value)]
                    if not narrowed[other]:
                        dead = True
                        break
                if dead:
                    continue
                found = search(narrowed, {**assigned, var: value})
                if found is not None:
                    return found
            return None

        found = search(domains, {})
        if found is None:
            self.logger.debug(f"No bramble of order {k + 1} on {g.n} vertices")
            return None
        elements = sorted(set(found.values()), key=lambda m: (popcount(m), m))
        return Bramble(tuple(frozenset(iter_bits(m)) for m in elements))

    def width_bramble(self, g: Graph, force: bool = False) -> Bramble:
        """Bramble of order tw(g) + 1."""
        if g.n == 0:
            return Bramble(())
        tw = self.width.treewidth(g, force)
        if tw == 0:
            return Bramble((frozenset({0}),))
        bramble = self.find_bramble(g, tw)
        if bramble is None:
            raise LowerBoundServiceError(f"No bramble of order {tw + 1} found for treewidth {tw}")
        return bramble

    def min_separation_order(
        self, g: Graph, epsilon: Any = TWO_THIRDS, force: bool = False
    ) -> Optional[Tuple[int, Separation]]:
        """
        Minimum-order ε-separation (A, S, B) of g.

        Separators are tried by increasing size; for each, the components of
        G − S are split into two sides by a subset-sum over their sizes.

        Returns:
            (order, separation), or None when g has no ε-separation at all
            (complete graphs and graphs on at most one vertex)

        Raises:
            ParameterError: When ε is outside [2/3, 1)
            BudgetExceededError: When g is beyond the separation budget
        """
        epsilon = _as_fraction(epsilon, "epsilon")
        if not TWO_THIRDS <= epsilon < 1:
            raise ParameterError(f"epsilon must lie in [2/3, 1), got {epsilon}")
        self.budget.check("min_separation_order", "separation", g.n, force)

        n = g.n
        limit = math.floor(epsilon * n)
        for s in range(max(n - 1, 0)):
            low = max(1, math.ceil(n - s - epsilon * n))
            high = min(limit, n - s - 1)
            if low > high:
                continue
            for separator in combinations(range(n), s):
                s_mask = mask_of(separator)
                parts = g.component_masks(g.vertex_mask & ~s_mask)
                if len(parts) < 2:
                    continue
                sums = {0: 0}
                for i, part in enumerate(parts):
                    size = popcount(part)
                    for total, chosen in list(sums.items()):
                        sums.setdefault(total + size, chosen | (1 << i))
                sizes = [total for total in sums if low <= total <= high]
                if not sizes:
                    continue
                a_mask = 0
                for i in iter_bits(sums[min(sizes)]):
                    a_mask |= parts[i]
                b_mask = g.vertex_mask & ~s_mask & ~a_mask
                separation = Separation(
                    frozenset(iter_bits(a_mask)), frozenset(separator), frozenset(iter_bits(b_mask)), epsilon
                )
                self.logger.debug(f"Minimum {epsilon}-separation of order {s} on {n} vertices")
                return s, separation
        return None

    def verify_separation_lemma(
        self, g: Graph, h: Graph, epsilon: Any, beta: Any, k: Optional[int] = None, force: bool = False
    ) -> SeparationLemmaReport:
        """
        Compare the minimum ε-separation order of G □ H with (1 − ε/β)·k·n.

        When k is omitted it is the largest value the hypotheses allow: the
        minimum β-separation order of G, capped at m // n. A k of zero makes
        the bound trivially zero.
        """
        epsilon = _as_fraction(epsilon, "epsilon")
        beta = _as_fraction(beta, "beta")
        m, n = g.n, h.n
        ranges_ok = TWO_THIRDS <= epsilon < beta < 1
        factor_order = None
        if ranges_ok and m > 0:
            found = self.min_separation_order(g, beta, force)
            factor_order = found[0] if found is not None else None
        if k is None:
            cap = m // n if n else 0
            k = cap if factor_order is None else min(factor_order, cap)
        if k == 0:
            return SeparationLemmaReport("trivial", 0, Fraction(0), None)

        hypotheses = (
            ("2/3 <= epsilon < beta < 1", ranges_ok),
            ("k >= 1", k >= 1),
            ("G and H connected", m > 0 and n > 0 and g.is_connected and h.is_connected),
            ("m >= kn", m >= k * n),
            ("n >= 1/(1-beta)", n * (1 - beta) >= 1),
            ("beta-separations of G have order >= k", factor_order is None or factor_order >= k),
        )
        bound = (1 - epsilon / beta) * k * n if ranges_ok else Fraction(0)
        if not all(ok for _, ok in hypotheses):
            failed = [name for name, ok in hypotheses if not ok]
            self.logger.info(f"Separation lemma hypotheses fail: {failed}")
            return SeparationLemmaReport("hypotheses-fail", k, bound, None, hypotheses)

        cartesian = product(g, h, ProductKind.CARTESIAN).base
        found = self.min_separation_order(cartesian, epsilon, force)
        measured = found[0] if found is not None else None
        status = "holds" if measured is None or measured >= bound else "violated"
        if status == "violated":
            self.logger.error(f"Separation of order {measured} beats the bound {bound}")
        return SeparationLemmaReport(status, k, bound, measured, hypotheses)

    def bound_engine(
        self, g1: Graph, g2: Graph, kind: ProductKind, exact: str = "auto", force: bool = False
    ) -> BoundReport:
        """
        Every applicable treewidth bound for G1 ∗ G2 in both factor orders.

        Upper bounds: strong lift (all kinds), vertex-cover subdivision (direct,
        connected first factor) and the trivial n − 1. Lower bounds: Hadwiger
        brambles (strong), factor subgraphs and connectivity and separations
        (cartesian and strong), the factor minor and the double cover (direct).
        Entries that need a search beyond budget are listed as omitted.

        Args:
            g1, g2: Factors
            kind: Product kind
            exact: "auto" computes the exact width for products on at most 14
                vertices, "always" tries regardless, "never" skips it
            force: Run sub-searches past their budgets

        Raises:
            ParameterError: On an unknown exact mode
            LowerBoundServiceError: When a lower entry exceeds an upper entry
        """
        if exact not in EXACT_MODES:
            raise ParameterError(f"exact must be one of {EXACT_MODES}, got {exact!r}")
        report = BoundReport(kind.value)
        prod = product(g1, g2, kind).base

        def attempt(name: str, build: Callable[[], Sequence[BoundEntry]]) -> None:
            try:
                report.entries.extend(build())
            except BudgetExceededError as e:
                report.omitted.append((name, str(e)))
            except BoundInapplicableError as e:
                report.omitted.append((name, str(e)))

        orders = (("G1,G2", g1, g2), ("G2,G1", g2, g1))
        if g1.n == 0 or g2.n == 0:
            report.omitted.append(("all", "empty factor"))
        else:
            for label, a, b in orders:
                attempt(f"strong-lift[{label}]", lambda a=a, b=b, label=label: [self._strong_lift(a, b, label, force)])
            if kind == ProductKind.DIRECT:
                for label, a, b in orders:
                    attempt(f"vertex-cover-subdivision[{label}]", lambda a=a, b=b, label=label: [self._vc_entry(a, b, label, force)])
            report.entries.append(BoundEntry("trivial", "upper", prod.n - 1, "v(G1 * G2) - 1"))

            if kind == ProductKind.STRONG:
                for label, a, b in orders:
                    attempt(f"hadwiger[{label}]", lambda a=a, b=b, label=label: [self._hadwiger_entry(a, b, label, force)])
            if kind in (ProductKind.CARTESIAN, ProductKind.STRONG):
                for label, a, b in orders:
                    attempt(f"factor-subgraph[{label}]", lambda a=a, label=label: [
                        BoundEntry("factor-subgraph", "lower", self.width.treewidth(a, force), "tw(G) for a copy of G", label)
                    ])
                attempt("cartesian-connectivity", lambda: [self._connectivity_entry(g1, g2)])
                for label, a, b in orders:
                    attempt(f"separation[{label}]", lambda a=a, b=b, label=label: [self._separation_entry(a, b, label, force)])
            if kind == ProductKind.DIRECT:
                for label, a, b in orders:
                    attempt(f"factor-minor[{label}]", lambda a=a, b=b, label=label: [self._factor_minor_entry(a, b, label, force)])
                for label, a, b in orders:
                    attempt(f"bipartite-double-cover[{label}]", lambda a=a, b=b, label=label: [self._double_cover_entry(a, b, label, force)])

        if exact == "always" or (exact == "auto" and prod.n <= AUTO_EXACT_LIMIT):
            try:
                report.exact = self.width.treewidth(prod, force)
            except BudgetExceededError as e:
                report.omitted.append(("exact", str(e)))

        if not report.is_consistent():
            self.logger.error(
                f"Inconsistent bounds for {kind.value} product: lower {report.max_lower}, "
                f"upper {report.min_upper}, exact {report.exact}"
            )
            raise LowerBoundServiceError(
                f"Bound report is inconsistent: max lower {report.max_lower}, min upper {report.min_upper}"
            )
        self.logger.info(
            f"Bounds for {kind.value} product on {prod.n} vertices: [{report.max_lower}, {report.min_upper}]"
        )
        return report

    def _strong_lift(self, a: Graph, b: Graph, label: str, force: bool) -> BoundEntry:
        result = self.width.exact_width(a, "tree", force)
        lifted = self.decompositions.lift_product(a, result.decomposition, b)
        value = strong_lift_bound(result.value, b.n)
        return BoundEntry("strong-lift", "upper", value, "(tw(G1)+1) v(G2) - 1", label, lifted.as_dict())

    def _vc_entry(self, a: Graph, b: Graph, label: str, force: bool) -> BoundEntry:
        if not a.is_connected:
            raise BoundInapplicableError("first factor is disconnected")
        cover = self.minors.vertex_cover_exact(a, force)
        result = self.width.exact_width(b, "tree", force)
        dec = self.decompositions.vc_subdivision_decomp(a, cover, b, result.decomposition)
        value = vertex_cover_bound(len(cover), result.value, b.max_degree)
        return BoundEntry(
            "vertex-cover-subdivision", "upper", value, "tau(G1) (tw(G2)+1) (Delta(G2)+1)", label, dec.as_dict()
        )

    def _hadwiger_entry(self, a: Graph, b: Graph, label: str, force: bool) -> BoundEntry:
        tw = self.width.treewidth(a, force)
        eta, model = self.minors.hadwiger_number(b, force)
        bramble = self.product_bramble(a, self.width_bramble(a, force), b, model)
        return BoundEntry("hadwiger", "lower", hadwiger_bound(eta, tw), "eta(G2) (tw(G1)+1) - 1", label, bramble.as_dict())

    def _connectivity_entry(self, g1: Graph, g2: Graph) -> BoundEntry:
        if not (g1.is_connected and g2.is_connected) or min(g1.n, g2.n) < 2:
            raise BoundInapplicableError("needs two connected factors with at least two vertices")
        k = min(nx.node_connectivity(g1.to_networkx()), nx.node_connectivity(g2.to_networkx()))
        n = min(g1.n, g2.n)
        value = max(connectivity_lower_bound(j, n) for j in range(1, k + 1))
        return BoundEntry("cartesian-connectivity", "lower", value, f"k(n-2k+2)-1 with k<={k}, n={n}")

    def _separation_entry(self, a: Graph, b: Graph, label: str, force: bool) -> BoundEntry:
        m, n = a.n, b.n
        if n < 4 or not (a.is_connected and b.is_connected):
            raise BoundInapplicableError("needs connected factors and v(G2) >= 4")
        beta = 1 - Fraction(1, n)
        found = self.min_separation_order(a, beta, force)
        k = m // n if found is None else min(found[0], m // n)
        if k < 1:
            raise BoundInapplicableError(f"no k >= 1 with m >= kn for m={m}, n={n}")
        bound = separation_lower_bound(TWO_THIRDS, beta, k, n, m)
        return BoundEntry(
            "separation", "lower", math.ceil(bound - 1), f"(1-eps/beta)kn-1 with eps=2/3, beta={beta}, k={k}", label
        )

    def _factor_minor_entry(self, a: Graph, b: Graph, label: str, force: bool) -> BoundEntry:
        if b.two_colouring() is not None:
            raise BoundInapplicableError("other factor is bipartite")
        tw = self.width.treewidth(a, force)
        certificate = None
        try:
            model = self.minors.find_minor(product(a, b, ProductKind.DIRECT).base, a, force)
        except BudgetExceededError as e:
            self.logger.debug(f"Factor minor witness skipped: {str(e)}")
            model = None
        else:
            if model is None:
                raise BoundInapplicableError("no factor minor model found")
        if model is not None:
            certificate = model.as_dict()
        return BoundEntry("factor-minor", "lower", tw, "G1 is a minor of G1 x G2 for non-bipartite G2", label, certificate)

    def _double_cover_entry(self, a: Graph, b: Graph, label: str, force: bool) -> BoundEntry:
        if b.m == 0:
            raise BoundInapplicableError("other factor has no edge")
        cover = product(a, generate(CompleteSpec(2)), ProductKind.DIRECT).base
        return BoundEntry("bipartite-double-cover", "lower", self.width.treewidth(cover, force), "tw(G1 x K2)", label)
