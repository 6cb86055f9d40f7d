"""
Certificate and report models.

Every result the services return is one of these dataclasses. Each carries an
``as_dict`` view for JSON output; the ones that are read back from files also
provide ``from_dict``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from domain.errors import ParameterError
from domain.graph import Graph, iter_bits


@dataclass(frozen=True)
class Violation:
    """A single failed axiom reported by a validator.

    Attributes:
        kind: Short machine-readable tag, e.g. "edge-uncovered"
        message: Human readable description naming the offending object
        subject: The vertex, edge or index the violation is about
    """

    kind: str
    message: str
    subject: Tuple[int, ...] = ()

    def as_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "message": self.message, "subject": list(self.subject)}


# --- multipartite -----------------------------------------------------------


@dataclass(frozen=True)
class MultipartitePattern:
    """The complete multipartite graph K_{n1,...,nd} plus an overlay clique of size x."""

    parts: Tuple[int, ...]
    overlay: int = 0

    def __post_init__(self):
        if not self.parts:
            raise ParameterError("A multipartite pattern needs at least one part")
        if any(size < 1 for size in self.parts):
            raise ParameterError(f"Part sizes must be positive, got {list(self.parts)}")
        if self.overlay < 0:
            raise ParameterError(f"Overlay must be non-negative, got {self.overlay}")

    @property
    def d(self) -> int:
        return len(self.parts)

    @property
    def order(self) -> int:
        return sum(self.parts) + self.overlay

    def sizes(self) -> Tuple[int, ...]:
        """Part sizes with the overlay expanded into singleton parts."""
        return tuple(self.parts) + (1,) * self.overlay

    def as_dict(self) -> Dict[str, Any]:
        return {"parts": list(self.parts), "overlay": self.overlay}


@dataclass(frozen=True)
class MultipartiteEmbedding:
    """Vertex sets realising a multipartite pattern, parts in caller order."""

    parts: Tuple[Tuple[int, ...], ...]
    overlay: Tuple[int, ...] = ()

    def groups(self) -> List[Tuple[int, ...]]:
        return list(self.parts) + [(v,) for v in self.overlay]

    def vertices(self) -> List[int]:
        return [v for group in self.groups() for v in group]

    def realises(self, g: Graph, sizes: Sequence[int]) -> bool:
        """True when the embedding has the given part sizes and is a subgraph of g."""
        groups = self.groups()
        if [len(group) for group in groups] != list(sizes):
            return False
        used = self.vertices()
        if len(set(used)) != len(used) or any(not 0 <= v < g.n for v in used):
            return False
        for i, first in enumerate(groups):
            for second in groups[i + 1 :]:
                for u in first:
                    for v in second:
                        if not g.has_edge(u, v):
                            return False
        return True

    def as_dict(self) -> Dict[str, Any]:
        return {"parts": [list(p) for p in self.parts], "overlay": list(self.overlay)}


@dataclass(frozen=True)
class InFactorCertificate:
    """The pattern already lives inside one factor (which = 0 or 1)."""

    which: int
    embedding: MultipartiteEmbedding
    tag: str = "in-factor"

    def as_dict(self) -> Dict[str, Any]:
        return {"tag": self.tag, "which": self.which, "embedding": self.embedding.as_dict()}


@dataclass(frozen=True)
class K22Certificate:
    edge1: Tuple[int, int]
    edge2: Tuple[int, int]
    tag: str = "k22"

    def as_dict(self) -> Dict[str, Any]:
        return {"tag": self.tag, "edge1": list(self.edge1), "edge2": list(self.edge2)}


@dataclass(frozen=True)
class StarCertificate:
    """K_{1,s} centred at (centre1, centre2) using Δ1 + Δ2 >= s."""

    s: int
    centre1: int
    centre2: int
    tag: str = "star"

    def as_dict(self) -> Dict[str, Any]:
        return {
            "tag": self.tag,
            "s": self.s,
            "centre1": self.centre1,
            "centre2": self.centre2,
        }


CartesianCertificate = Union[InFactorCertificate, K22Certificate, StarCertificate]


@dataclass(frozen=True)
class DirectCertificate:
    a: Tuple[int, ...]
    b: Tuple[int, ...]
    embedding1: MultipartiteEmbedding
    embedding2: MultipartiteEmbedding

    def satisfies(self, parts: Sequence[int]) -> bool:
        return all(
            ai >= 1 and bi >= 1 and n <= ai * bi for n, ai, bi in zip(parts, self.a, self.b)
        )

    def as_dict(self) -> Dict[str, Any]:
        return {
            "a": list(self.a),
            "b": list(self.b),
            "embedding1": self.embedding1.as_dict(),
            "embedding2": self.embedding2.as_dict(),
        }


@dataclass(frozen=True)
class StrongCertificate:
    a: Tuple[int, ...]
    b: Tuple[int, ...]
    z: Tuple[int, ...]
    x: int
    y: int
    embedding1: MultipartiteEmbedding
    embedding2: MultipartiteEmbedding

    def satisfies(self, parts: Sequence[int]) -> bool:
        if sum(self.z) > self.x * self.y or min(self.z, default=0) < 0:
            return False
        return all(
            n <= aj * bj + aj * self.y + bj * self.x + zj
            for n, aj, bj, zj in zip(parts, self.a, self.b, self.z)
        )

    def as_dict(self) -> Dict[str, Any]:
        return {
            "a": list(self.a),
            "b": list(self.b),
            "z": list(self.z),
            "x": self.x,
            "y": self.y,
            "embedding1": self.embedding1.as_dict(),
            "embedding2": self.embedding2.as_dict(),
        }


@dataclass(frozen=True)
class KstBound:
    """Forbidden pattern for G ⊠ H when G is K_{s,t}-free and Δ(H) <= Δ."""

    forbidden: MultipartitePattern
    witness: Optional[Tuple[Graph, Graph]] = None
    witness_pattern: Optional[MultipartitePattern] = None
    witness_reason: str = ""

    def as_dict(self) -> Dict[str, Any]:
        return {
            "forbidden": self.forbidden.as_dict(),
            "witness_available": self.witness is not None,
            "witness_pattern": self.witness_pattern.as_dict() if self.witness_pattern else None,
            "witness_reason": self.witness_reason,
        }


# --- degeneracy ---------------------------------------------------------------


@dataclass(frozen=True)
class DegenProfile:
    degeneracy: int
    order: Tuple[int, ...]
    step_degrees: Tuple[int, ...]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "degeneracy": self.degeneracy,
            "order": list(self.order),
            "step_degrees": list(self.step_degrees),
        }


@dataclass(frozen=True)
class FactorStats:
    """Degeneracy d, maximum degree, and a K_{s,t} subgraph with s <= t.

    s = t = 0 stands for "no complete bipartite subgraph claimed" and is only
    meaningful for edgeless factors or as a weak claim.
    """

    d: int
    max_degree: int
    s: int
    t: int

    def __post_init__(self):
        if min(self.d, self.max_degree, self.s, self.t) < 0:
            raise ParameterError(f"Factor statistics must be non-negative: {self}")
        if not (self.s <= self.d <= self.max_degree and self.s <= self.t <= self.max_degree):
            raise ParameterError(
                f"Factor statistics need s <= d <= Δ and s <= t <= Δ, got "
                f"d={self.d}, Δ={self.max_degree}, s={self.s}, t={self.t}"
            )
        if (self.d == 0) != (self.max_degree == 0):
            raise ParameterError("Degeneracy is zero exactly when the maximum degree is zero")

    def as_dict(self) -> Dict[str, int]:
        return {"d": self.d, "max_degree": self.max_degree, "s": self.s, "t": self.t}


@dataclass(frozen=True)
class DegeneracyBounds:
    lower: int
    upper: int
    terms: Tuple[Tuple[str, int], ...] = ()

    def as_dict(self) -> Dict[str, Any]:
        return {"lower": self.lower, "upper": self.upper, "terms": dict(self.terms)}


# --- decompositions -------------------------------------------------------------


@dataclass(frozen=True)
class HDecomposition:
    """Bags indexed by the vertices of a host graph.

    Attributes:
        host: Host graph H (a tree or path for tree/path decompositions)
        bags: One vertex set of the decomposed graph per host vertex
    """

    host: Graph
    bags: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        if len(self.bags) != self.host.n:
            raise ParameterError(
                f"Decomposition has {len(self.bags)} bags for {self.host.n} host nodes"
            )

    @property
    def width(self) -> int:
        return max((len(bag) for bag in self.bags), default=0) - 1

    def as_dict(self) -> Dict[str, Any]:
        return {
            "host": {"n": self.host.n, "edges": [list(e) for e in self.host.edges()]},
            "bags": [sorted(bag) for bag in self.bags],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HDecomposition":
        missing_fields = [name for name in ("host", "bags") if name not in data]
        if missing_fields:
            raise ValueError(f"Missing required fields: {missing_fields}")
        host = Graph.from_edges(int(data["host"]["n"]), [tuple(e) for e in data["host"]["edges"]])
        return cls(host, tuple(frozenset(int(v) for v in bag) for bag in data["bags"]))


@dataclass(frozen=True)
class Bramble:
    elements: Tuple[FrozenSet[int], ...]

    def masks(self) -> List[int]:
        out = []
        for element in self.elements:
            mask = 0
            for v in element:
                mask |= 1 << v
            out.append(mask)
        return out

    def as_dict(self) -> Dict[str, Any]:
        return {"elements": [sorted(e) for e in self.elements]}


@dataclass(frozen=True)
class WidthResult:
    value: int
    kind: str
    decomposition: HDecomposition
    bramble: Optional[Bramble] = None

    def as_dict(self) -> Dict[str, Any]:
        data = {"value": self.value, "kind": self.kind, "decomposition": self.decomposition.as_dict()}
        if self.bramble is not None:
            data["bramble"] = self.bramble.as_dict()
        return data


@dataclass(frozen=True)
class Separation:
    a: FrozenSet[int]
    s: FrozenSet[int]
    b: FrozenSet[int]
    epsilon: Fraction

    @property
    def order(self) -> int:
        return len(self.s)

    def is_valid(self, g: Graph) -> bool:
        n = g.n
        if self.a & self.s or self.a & self.b or self.s & self.b:
            return False
        if len(self.a) + len(self.s) + len(self.b) != n:
            return False
        limit = self.epsilon * n
        if not (1 <= len(self.a) <= limit and 1 <= len(self.b) <= limit):
            return False
        return not any(g.has_edge(u, v) for u in self.a for v in self.b)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "A": sorted(self.a),
            "S": sorted(self.s),
            "B": sorted(self.b),
            "epsilon": str(self.epsilon),
            "order": self.order,
        }


@dataclass(frozen=True)
class MinorModel:
    """Branch set of every vertex of the minor, indexed by minor vertex id."""

    branch_sets: Tuple[FrozenSet[int], ...]

    def as_dict(self) -> Dict[str, Any]:
        return {"branch_sets": [sorted(b) for b in self.branch_sets]}

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "MinorModel":
        return cls(tuple(frozenset(iter_bits(mask)) for mask in masks))


@dataclass(frozen=True)
class GridLikeMinor:
    paths: Tuple[Tuple[int, ...], ...]
    order: int
    model: MinorModel

    @property
    def width_lower_bound(self) -> int:
        return self.order // 2 - 1

    def as_dict(self) -> Dict[str, Any]:
        return {
            "paths": [list(p) for p in self.paths],
            "order": self.order,
            "model": self.model.as_dict(),
            "width_lower_bound": self.width_lower_bound,
        }


@dataclass(frozen=True)
class PathSystem:
    """Disjoint trunk paths plus, per selected trunk pair, disjoint linking paths."""

    trunks: Tuple[Tuple[int, ...], ...]
    linkages: Dict[Tuple[int, int], Tuple[Tuple[int, ...], ...]] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "trunks": [list(t) for t in self.trunks],
            "linkages": [
                {"pair": list(pair), "paths": [list(p) for p in paths]}
                for pair, paths in sorted(self.linkages.items())
            ],
        }


@dataclass(frozen=True)
class ColouredSubgraph:
    """A subgraph given by its vertices and edges, with a proper 2-colouring aligned to vertices."""

    vertices: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...]
    colours: Tuple[int, ...]

    def colour_of(self) -> Dict[int, int]:
        return dict(zip(self.vertices, self.colours))

    @classmethod
    def from_path(cls, path: Sequence[int], first_colour: int = 0) -> "ColouredSubgraph":
        return cls(
            tuple(path),
            tuple(zip(path, path[1:])),
            tuple((first_colour + i) % 2 for i in range(len(path))),
        )


@dataclass(frozen=True)
class BipartiteSelection:
    """Selected joining paths and a proper 2-colouring of the pieces plus those paths."""

    selected: Tuple[int, ...]
    switched: Tuple[int, ...]
    colouring: Dict[int, int]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "selected": list(self.selected),
            "switched": list(self.switched),
            "colouring": {str(v): c for v, c in sorted(self.colouring.items())},
        }


@dataclass(frozen=True)
class BipartiteSubgraph:
    """A bipartite spanning subgraph with at least half the edges, and its treewidth."""

    subgraph: Graph
    sides: Tuple[int, ...]
    treewidth: Optional[int]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "edges": [list(e) for e in self.subgraph.edges()],
            "sides": list(self.sides),
            "treewidth": self.treewidth,
        }


@dataclass(frozen=True)
class Linkage:
    """Vertex-disjoint paths between two vertex sets, or a separating cut when too few exist."""

    paths: Tuple[Tuple[int, ...], ...]
    flow: int
    cut: Tuple[int, ...] = ()
    found: bool = True

    def as_dict(self) -> Dict[str, Any]:
        return {
            "found": self.found,
            "flow": self.flow,
            "paths": [list(p) for p in self.paths],
            "cut": list(self.cut),
        }


@dataclass(frozen=True)
class LiftedLinkage:
    """Path system lifted into G × K_2 together with the kept pair set X."""

    system: PathSystem
    pairs: Tuple[Tuple[int, int], ...]
    selected: Tuple[Tuple[int, int], ...]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "system": self.system.as_dict(),
            "pairs": [list(p) for p in self.pairs],
            "selected": [list(p) for p in self.selected],
        }


@dataclass(frozen=True)
class MinorParameters:
    """Hadwiger and daddy-longlegs numbers with their witness models."""

    eta: int
    eta_model: MinorModel
    dll: int
    dll_model: Optional[MinorModel]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "eta": self.eta,
            "eta_model": self.eta_model.as_dict(),
            "dll": self.dll,
            "dll_model": self.dll_model.as_dict() if self.dll_model else None,
        }


@dataclass(frozen=True)
class PathAndCover:
    """
    Path number, vertex cover number and the DFS-tree cover.

    Attributes:
        path_number: Order of a longest path
        longest_path: One longest path as a vertex sequence
        vertex_cover_number: Size of a minimum vertex cover
        vertex_cover: One minimum vertex cover
        dfs_cover: Non-leaf vertices of a DFS tree, None for disconnected graphs
    """

    path_number: int
    longest_path: Tuple[int, ...]
    vertex_cover_number: int
    vertex_cover: Tuple[int, ...]
    dfs_cover: Optional[Tuple[int, ...]]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "path_number": self.path_number,
            "longest_path": list(self.longest_path),
            "vertex_cover_number": self.vertex_cover_number,
            "vertex_cover": list(self.vertex_cover),
            "dfs_cover": list(self.dfs_cover) if self.dfs_cover is not None else None,
        }


@dataclass(frozen=True)
class SeparationLemmaReport:
    """Measured minimum ε-separation order of G □ H against (1 - ε/β)kn.

    status is one of "holds", "violated", "trivial" and "hypotheses-fail".
    """

    status: str
    k: int
    bound: Fraction
    measured: Optional[int]
    hypotheses: Tuple[Tuple[str, bool], ...] = ()

    @property
    def holds(self) -> Optional[bool]:
        if self.status == "hypotheses-fail":
            return None
        return self.status != "violated"

    def as_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "k": self.k,
            "bound": str(self.bound),
            "measured": self.measured,
            "hypotheses": [{"name": n, "ok": ok} for n, ok in self.hypotheses],
        }


# --- bound reports ---------------------------------------------------------------


@dataclass(frozen=True)
class BoundEntry:
    name: str
    kind: str
    value: int
    basis: str
    factor_order: str = "G1,G2"
    certificate: Optional[Dict[str, Any]] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind,
            "value": self.value,
            "basis": self.basis,
            "factor_order": self.factor_order,
            "certificate": self.certificate,
        }


@dataclass
class BoundReport:
    kind: str
    entries: List[BoundEntry] = field(default_factory=list)
    omitted: List[Tuple[str, str]] = field(default_factory=list)
    exact: Optional[int] = None

    @property
    def max_lower(self) -> Optional[int]:
        values = [e.value for e in self.entries if e.kind == "lower"]
        return max(values) if values else None

    @property
    def min_upper(self) -> Optional[int]:
        values = [e.value for e in self.entries if e.kind == "upper"]
        return min(values) if values else None

    def is_consistent(self) -> bool:
        low, high = self.max_lower, self.min_upper
        if low is not None and high is not None and low > high:
            return False
        if self.exact is not None:
            if low is not None and self.exact < low:
                return False
            if high is not None and self.exact > high:
                return False
        return True

    def as_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "entries": [e.as_dict() for e in self.entries],
            "omitted": [{"name": n, "reason": r} for n, r in self.omitted],
            "exact": self.exact,
            "max_lower": self.max_lower,
            "min_upper": self.min_upper,
        }


# --- classification ---------------------------------------------------------------

CLASS_PARAMETERS = ("tw", "pw", "max_degree", "component_order", "component_cover", "dll", "path_number")


@dataclass(frozen=True)
class ParameterBound:
    """Whether a class parameter is bounded, with an optional numeric witness."""

    bounded: bool
    witness: Optional[int] = None

    def as_dict(self) -> Dict[str, Any]:
        return {"bounded": self.bounded, "witness": self.witness}


@dataclass(frozen=True)
class ClassFlags:
    """Declared facts about a graph class. A missing parameter is unknown."""

    name: str = "class"
    parameters: Dict[str, ParameterBound] = field(default_factory=dict)
    monotone: bool = False
    contains_k2: bool = False

    def __post_init__(self):
        unknown = [key for key in self.parameters if key not in CLASS_PARAMETERS]
        if unknown:
            raise ParameterError(f"Unknown class parameters: {unknown}")

    def get(self, key: str) -> Optional[ParameterBound]:
        return self.parameters.get(key)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "parameters": {k: v.as_dict() for k, v in sorted(self.parameters.items())},
            "monotone": self.monotone,
            "contains_k2": self.contains_k2,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ClassFlags":
        parameters = {}
        for key, value in data.get("parameters", {}).items():
            if isinstance(value, bool):
                parameters[key] = ParameterBound(value)
            else:
                parameters[key] = ParameterBound(bool(value["bounded"]), value.get("witness"))
        return cls(
            name=data.get("name", "class"),
            parameters=parameters,
            monotone=bool(data.get("monotone", False)),
            contains_k2=bool(data.get("contains_k2", False)),
        )


@dataclass(frozen=True)
class Verdict:
    bounded: bool
    rule: str
    derivation: Tuple[str, ...] = ()
    width_bound: Optional[int] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "bounded": self.bounded,
            "rule": self.rule,
            "derivation": list(self.derivation),
            "width_bound": self.width_bound,
        }


@dataclass(frozen=True)
class ProbeRow:
    size: int
    order: int
    width: int

    def as_dict(self) -> Dict[str, int]:
        return {"size": self.size, "order": self.order, "width": self.width}


@dataclass(frozen=True)
class ProbeReport:
    """Exact widths of a product family along a size sweep."""

    kind: str
    width_kind: str
    rows: Tuple[ProbeRow, ...]
    skipped: Tuple[int, ...] = ()

    @property
    def growth(self) -> bool:
        """Widths strictly increase across at least three measured sizes."""
        widths = [row.width for row in self.rows]
        return len(widths) >= 3 and all(a < b for a, b in zip(widths, widths[1:]))

    def agrees_with(self, verdict: Verdict) -> bool:
        """False only when a bounded verdict's width bound is exceeded by a measured width."""
        if not verdict.bounded or verdict.width_bound is None:
            return True
        return all(row.width <= verdict.width_bound for row in self.rows)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "width": self.width_kind,
            "rows": [row.as_dict() for row in self.rows],
            "skipped": list(self.skipped),
            "growth": self.growth,
        }


# --- sweep ------------------------------------------------------------------------


@dataclass(frozen=True)
class PropertyResult:
    """
    Outcome of one sweep property.

    Attributes:
        name: Registry name of the property
        arity: 1 for single graphs, 2 for factor pairs
        checked: Number of inputs the property ran on
        skipped: Inputs skipped because a search went over budget
        counterexample: graph6 strings of the first failing input, in corpus order
        message: What the failing check reported
    """

    name: str
    arity: int
    checked: int
    skipped: int = 0
    counterexample: Optional[Tuple[str, ...]] = None
    message: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "arity": self.arity,
            "checked": self.checked,
            "skipped": self.skipped,
            "passed": self.passed,
            "counterexample": list(self.counterexample) if self.counterexample is not None else None,
            "message": self.message,
        }


@dataclass(frozen=True)
class SweepReport:
    corpus_size: int
    pair_count: int
    results: Tuple[PropertyResult, ...]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> List[str]:
        return [result.name for result in self.results if not result.passed]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "corpus_size": self.corpus_size,
            "pair_count": self.pair_count,
            "results": [result.as_dict() for result in self.results],
        }
