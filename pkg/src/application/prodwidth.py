"""
prodwidth command line.

Every subcommand loads its graphs through GraphRepository, calls one service
and prints either a bare value or a deterministic JSON document on stdout.
Exit codes: 0 success, 1 negative decision, 2 usage or input error,
3 search budget exceeded.
"""

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, TextIO, Tuple

from application.config import ProdwidthConfig, apply_budget
from application.sweep import SweepRunner, atlas_corpus
from domain.errors import BudgetExceededError, ProdwidthError
from domain.graph import Graph, ProductKind, product
from domain.models import MultipartitePattern
from processors.argument_processor import ArgumentProcessor
from services.classification_service import CANNED_CLASSES, ClassificationService
from services.decomposition_service import DecompositionService
from services.degeneracy_service import BOUNDS, DegeneracyService
from services.double_cover_service import DoubleCoverService
from services.lower_bound_service import LowerBoundService
from services.minor_service import MinorService
from services.multipartite_service import MultipartiteService
from services.search_budget import SearchBudget
from services.width_service import WidthService
from storage.codecs import encode
from storage.graph_repository import GraphRepository, dumps_report

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

PRODUCT_KINDS = [kind.value for kind in ProductKind]

# (exit code, JSON payload, optional plain rendering)
Outcome = Tuple[int, Any, Optional[str]]


def configure_logging(config: ProdwidthConfig) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.logging.file:
        handlers.append(logging.FileHandler(config.logging.file))
    logging.basicConfig(
        level=config.logging.numeric_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", help="One limit for every search, or name=value overrides")
    common.add_argument("--force", action="store_true", help="Run searches past their budgets")
    common.add_argument("--format", choices=["graph6", "edgelist"], help="Input format (default: by extension)")
    common.add_argument("--json", action="store_true", help="JSON output for commands that print a bare value")

    parser = argparse.ArgumentParser(prog="prodwidth", description="Treewidth and friends for graph products")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    def factor_pair(p: argparse.ArgumentParser) -> None:
        p.add_argument("--g1")
        p.add_argument("--g2")
        p.add_argument("graphs", nargs="*")

    p = command("product", "Build G1 * G2")
    p.add_argument("--kind", choices=PRODUCT_KINDS, required=True)
    p.add_argument("--out", help="Write the product to this file")
    factor_pair(p)

    p = command("degen", "Degeneracy by peeling")
    p.add_argument("--g")
    p.add_argument("graphs", nargs="*")

    p = command("degen-bounds", "Degeneracy bounds for a product")
    p.add_argument("--kind", choices=PRODUCT_KINDS, required=True)
    p.add_argument("--stats1", help="d,max_degree,s,t of the first factor")
    p.add_argument("--stats2", help="d,max_degree,s,t of the second factor")
    factor_pair(p)

    p = command("multipartite", "Decide K_{n1,...,nd} in a product")
    p.add_argument("--kind", choices=PRODUCT_KINDS, required=True)
    p.add_argument("--parts", required=True)
    p.add_argument("--overlay", type=int, default=0)
    factor_pair(p)

    p = command("decompose", "Build a decomposition")
    p.add_argument("--op", choices=["lift", "square", "vcsub", "gkn", "grid"], required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--dims")
    factor_pair(p)

    p = command("width", "Exact treewidth or pathwidth")
    p.add_argument("--kind", choices=["tree", "path"], default="tree")
    p.add_argument("--g")
    p.add_argument("graphs", nargs="*")

    p = command("bounds", "Bound report for a product")
    p.add_argument("--kind", choices=PRODUCT_KINDS, required=True)
    p.add_argument("--exact", choices=["auto", "always", "never"], default="auto")
    factor_pair(p)

    p = command("minor", "Find H as a minor of G")
    p.add_argument("--h", required=True)
    p.add_argument("--g")
    p.add_argument("graphs", nargs="*")

    for name, help_text in (("dll", "Daddy-longlegs number"), ("pn", "Path number"), ("vc", "Vertex cover number")):
        p = command(name, help_text)
        p.add_argument("--g")
        p.add_argument("graphs", nargs="*")

    p = command("doublecover", "Double cover G x K2 and its bipartite-subgraph bound")
    p.add_argument("--g")
    p.add_argument("--trunks", help="Trunk paths as 0,1,2;3,4,5 for the grid-like minor pipeline")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("graphs", nargs="*")

    p = command("classify", "Bounded-width verdict for a product of classes")
    p.add_argument("--kind", choices=PRODUCT_KINDS, required=True)
    p.add_argument("--width", choices=["tree", "path"], default="tree")
    p.add_argument("--c1", required=True, help="Class flag JSON file or a canned class name")
    p.add_argument("--c2", required=True, help="Class flag JSON file or a canned class name")

    p = command("sweep", "Run the property suite over a graph corpus")
    p.add_argument("--max-order", type=int, default=5)
    p.add_argument("--pair-order", type=int, default=3)
    p.add_argument("--corpus", help="graph6 file replacing the atlas corpus")
    p.add_argument("--out", help="Also write the report to this file")
    return parser


class ProdwidthApp:
    """
    Wires configuration, storage and services for one command-line run.

    Attributes:
        config (ProdwidthConfig): Budgets and logging settings
        repository (GraphRepository): Graph file access
    """

    def __init__(self, config: ProdwidthConfig, fmt: Optional[str] = None):
        self.config = config
        self.repository = GraphRepository(fmt)
        self.arguments = ArgumentProcessor()
        self.logger = logging.getLogger(__name__)
        self._initialize_services(config.budget)

    def _initialize_services(self, budget: SearchBudget) -> None:
        try:
            self.width = WidthService(budget)
            self.minors = MinorService(budget)
            self.decompositions = DecompositionService()
            self.multipartite = MultipartiteService(budget)
            self.degeneracy = DegeneracyService(budget, self.multipartite)
            self.lower_bounds = LowerBoundService(budget, self.width, self.minors, self.decompositions)
            self.double_cover = DoubleCoverService(budget, self.width, self.minors)
            self.classification = ClassificationService(budget, self.width)
            self.logger.debug("Services initialised")
        except Exception as e:
            self.logger.error(f"Service initialisation failed: {str(e)}")
            raise e

    # --- input helpers -------------------------------------------------------------

    def _graphs(self, args: argparse.Namespace, names: Tuple[str, ...]) -> List[Graph]:
        """Graphs named by --flags first, then positionals, in the order of names."""
        positional = list(getattr(args, "graphs", []))
        paths = []
        for name in names:
            value = getattr(args, name, None)
            if value is None:
                if not positional:
                    raise ArgumentError(f"Missing graph argument {name}")
                value = positional.pop(0)
            paths.append(value)
        if positional:
            raise ArgumentError(f"Unexpected arguments: {positional}")
        return [self.repository.load(path) for path in paths]

    def _class_flags(self, value: str):
        if value in CANNED_CLASSES:
            return CANNED_CLASSES[value].flags
        with open(value, "r", encoding="utf-8") as handle:
            return self.arguments.parse_class_flags(handle.read())

    # --- commands ------------------------------------------------------------------

    def cmd_product(self, args: argparse.Namespace) -> Outcome:
        g1, g2 = self._graphs(args, ("g1", "g2"))
        prod = product(g1, g2, ProductKind(args.kind)).base
        if args.out:
            self.repository.save(prod, args.out)
        text = encode(prod, "graph6").decode("ascii").strip()
        return EXIT_OK, {"kind": args.kind, "n": prod.n, "m": prod.m, "graph6": text}, text

    def cmd_degen(self, args: argparse.Namespace) -> Outcome:
        (g,) = self._graphs(args, ("g",))
        profile = self.degeneracy.degeneracy_exact(g)
        return EXIT_OK, profile.as_dict(), str(profile.degeneracy)

    def cmd_degen_bounds(self, args: argparse.Namespace) -> Outcome:
        kind = ProductKind(args.kind)
        if args.stats1 and args.stats2:
            f1 = self.arguments.parse_factor_stats(args.stats1)
            f2 = self.arguments.parse_factor_stats(args.stats2)
            bounds = BOUNDS[kind](f1, f2)
            payload = {"kind": args.kind, "stats1": f1.as_dict(), "stats2": f2.as_dict(), **bounds.as_dict()}
            return EXIT_OK, payload, None
        g1, g2 = self._graphs(args, ("g1", "g2"))
        bounds = self.degeneracy.best_bounds(g1, g2, kind, args.force)
        exact = self.degeneracy.degeneracy_exact(product(g1, g2, kind).base).degeneracy
        return EXIT_OK, {"kind": args.kind, "exact": exact, **bounds.as_dict()}, None

    def cmd_multipartite(self, args: argparse.Namespace) -> Outcome:
        g1, g2 = self._graphs(args, ("g1", "g2"))
        pattern = MultipartitePattern(tuple(self.arguments.parse_int_list(args.parts)), args.overlay)
        kind = ProductKind(args.kind)
        if pattern.overlay:
            embedding = self.multipartite.oracle_subgraph(product(g1, g2, kind).base, pattern, args.force)
            certificate = embedding.as_dict() if embedding is not None else None
        else:
            decide: Dict[ProductKind, Callable] = {
                ProductKind.CARTESIAN: self.multipartite.decide_cartesian,
                ProductKind.DIRECT: self.multipartite.decide_direct,
                ProductKind.STRONG: self.multipartite.decide_strong,
            }
            found = decide[kind](g1, g2, pattern)
            certificate = found.as_dict() if found is not None else None
        present = certificate is not None
        payload = {"present": present, "pattern": pattern.as_dict(), "certificate": certificate}
        return (EXIT_OK if present else EXIT_NEGATIVE), payload, None

    def cmd_decompose(self, args: argparse.Namespace) -> Outcome:
        if args.op == "gkn":
            if args.k is None or args.n is None:
                raise ArgumentError("decompose --op gkn needs --k and --n")
            g, dec = self.decompositions.gkn_decomposition(args.k, args.n)
        elif args.op == "grid":
            if not args.dims:
                raise ArgumentError("decompose --op grid needs --dims")
            g, dec = self.decompositions.strong_grid_decomposition(self.arguments.parse_int_list(args.dims))
        elif args.op == "square":
            (g1,) = self._graphs(args, ("g1",))
            base = self.width.exact_width(g1, "tree", args.force).decomposition
            dec = self.decompositions.lift_square(g1, base)
        else:
            g1, g2 = self._graphs(args, ("g1", "g2"))
            if args.op == "lift":
                base = self.width.exact_width(g1, "tree", args.force).decomposition
                dec = self.decompositions.lift_product(g1, base, g2)
            else:
                cover = self.minors.vertex_cover_exact(g1, args.force)
                base = self.width.exact_width(g2, "tree", args.force).decomposition
                dec = self.decompositions.vc_subdivision_decomp(g1, cover, g2, base)
        return EXIT_OK, {"op": args.op, "width": dec.width, "decomposition": dec.as_dict()}, None

    def cmd_width(self, args: argparse.Namespace) -> Outcome:
        (g,) = self._graphs(args, ("g",))
        result = self.width.exact_width(g, args.kind, args.force)
        return EXIT_OK, result.as_dict(), str(result.value)

    def cmd_bounds(self, args: argparse.Namespace) -> Outcome:
        g1, g2 = self._graphs(args, ("g1", "g2"))
        report = self.lower_bounds.bound_engine(g1, g2, ProductKind(args.kind), args.exact, args.force)
        return EXIT_OK, report.as_dict(), None

    def cmd_minor(self, args: argparse.Namespace) -> Outcome:
        (g,) = self._graphs(args, ("g",))
        h = self.repository.load(args.h)
        model = self.minors.find_minor(g, h, args.force)
        payload = {"present": model is not None, "model": model.as_dict() if model is not None else None}
        return (EXIT_OK if model is not None else EXIT_NEGATIVE), payload, None

    def cmd_dll(self, args: argparse.Namespace) -> Outcome:
        (g,) = self._graphs(args, ("g",))
        k, model = self.minors.daddy_longlegs(g, args.force)
        return EXIT_OK, {"dll": k, "model": model.as_dict() if model is not None else None}, str(k)

    def cmd_pn(self, args: argparse.Namespace) -> Outcome:
        (g,) = self._graphs(args, ("g",))
        path = self.minors.longest_path(g, args.force)
        return EXIT_OK, {"path_number": len(path), "path": list(path)}, str(len(path))

    def cmd_vc(self, args: argparse.Namespace) -> Outcome:
        (g,) = self._graphs(args, ("g",))
        summary = self.minors.path_and_cover(g, args.force)
        return EXIT_OK, summary.as_dict(), str(summary.vertex_cover_number)

    def cmd_doublecover(self, args: argparse.Namespace) -> Outcome:
        (g,) = self._graphs(args, ("g",))
        cover = self.double_cover.double_cover(g).base
        payload: Dict[str, Any] = {
            "graph6": encode(cover, "graph6").decode("ascii").strip(),
            "bipartite_subgraph": self.double_cover.bipartite_subgraph_lb(g, args.force).as_dict(),
        }
        try:
            payload["treewidth"] = self.width.treewidth(cover, args.force)
        except BudgetExceededError as e:
            self.logger.warning(f"Skipping treewidth of the double cover: {str(e)}")
            payload["treewidth"] = None
        if args.trunks:
            trunks = [self.arguments.parse_int_list(part) for part in args.trunks.split(";")]
            glm, lifted = self.double_cover.glm_pipeline(g, trunks, args.k, args.force)
            payload["grid_like_minor"] = glm.as_dict()
            payload["lifted"] = lifted.as_dict()
        return EXIT_OK, payload, None

    def cmd_classify(self, args: argparse.Namespace) -> Outcome:
        c1, c2 = self._class_flags(args.c1), self._class_flags(args.c2)
        verdict = self.classification.classify(ProductKind(args.kind), args.width, c1, c2)
        return EXIT_OK, verdict.as_dict(), None

    def cmd_sweep(self, args: argparse.Namespace) -> Outcome:
        if args.corpus:
            graphs = self.repository.load_all(args.corpus)
        else:
            graphs = atlas_corpus(args.max_order)
        runner = SweepRunner(self)
        report = runner.run(graphs, pair_order=args.pair_order)
        if args.out:
            self.repository.write_report(report.as_dict(), args.out)
        return (EXIT_OK if report.passed else EXIT_NEGATIVE), report.as_dict(), None

    def run(self, args: argparse.Namespace) -> Outcome:
        handler = getattr(self, "cmd_" + args.command.replace("-", "_"))
        return handler(args)


class ArgumentError(ProdwidthError):
    """Raised when a subcommand is missing or given extra arguments."""

    pass


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """Parse argv, run one subcommand and write its output. Returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = ProdwidthConfig.from_env()
        if args.budget:
            config.budget = apply_budget(config.budget, args.budget, "--budget")
    except ValueError as e:
        err.write(f"prodwidth: {str(e)}\n")
        return EXIT_USAGE

    try:
        code, payload, plain = ProdwidthApp(config, args.format).run(args)
    except BudgetExceededError as e:
        err.write(f"prodwidth: {str(e)}\n")
        return EXIT_BUDGET
    except (ProdwidthError, OSError) as e:
        err.write(f"prodwidth: {str(e)}\n")
        return EXIT_USAGE

    out.write(dumps_report(payload) if args.json or plain is None else plain + "\n")
    return code


def main():
    try:
        configure_logging(ProdwidthConfig.from_env())
    except ValueError as e:
        sys.stderr.write(f"prodwidth: {str(e)}\n")
        sys.exit(EXIT_USAGE)
    sys.exit(run())


if __name__ == "__main__":
    main()
