"""
Graph Codecs Module

Text formats for exchanging graphs with other tools:
- graph6, the standard McKay byte encoding, delegated to networkx
- edgelist, ASCII "u v" lines with '#' comments and an optional vertex-count header

Both codecs satisfy the GraphCodec protocol and raise GraphParseError with the
offending line number on malformed input.
"""

import logging
from typing import Dict, List, Optional, Tuple

import networkx as nx

from domain.errors import ParameterError, ProdwidthError
from domain.graph import Graph
from domain.interfaces import GraphCodec


class CodecError(ProdwidthError):
    """Base exception for codec failures."""

    pass


class GraphParseError(CodecError):
    """Raised when a payload cannot be parsed; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class Graph6Codec:
    """graph6 codec. Payloads may hold one graph per line and an optional >>graph6<< header."""

    name = "graph6"
    extensions = (".g6", ".graph6")

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def encode(self, graph: Graph) -> bytes:
        return nx.to_graph6_bytes(graph.to_networkx(), header=False)

    def decode(self, data: bytes) -> Graph:
        graphs = self.decode_all(data)
        if len(graphs) != 1:
            raise GraphParseError(1, f"expected one graph, found {len(graphs)}")
        return graphs[0]

    def decode_all(self, data: bytes) -> List[Graph]:
        graphs = []
        for number, raw in enumerate(data.splitlines(), start=1):
            line = raw.strip()
            if line.startswith(b">>graph6<<"):
                line = line[len(b">>graph6<<"):]
            if not line:
                continue
            try:
                graphs.append(Graph.from_networkx(nx.from_graph6_bytes(line)))
            except (nx.NetworkXError, ValueError, IndexError) as e:
                self.logger.error(f"Failed to decode graph6 line {number}: {str(e)}")
                raise GraphParseError(number, f"malformed graph6 data: {str(e)}")
        return graphs


class EdgeListCodec:
    """Edge-list codec.

    A line holding a single integer declares the vertex count; otherwise the
    count is one more than the largest endpoint.
    """

    name = "edgelist"
    extensions = (".el", ".edges", ".txt")

    def encode(self, graph: Graph) -> bytes:
        lines = [str(graph.n)] + [f"{u} {v}" for u, v in graph.edges()]
        return ("\n".join(lines) + "\n").encode("ascii")

    def decode(self, data: bytes) -> Graph:
        try:
            text = data.decode("ascii")
        except UnicodeDecodeError as e:
            raise GraphParseError(1, f"non-ASCII input: {str(e)}")

        declared: Optional[int] = None
        edges: List[Tuple[int, int]] = []
        edge_lines: Dict[Tuple[int, int], int] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            try:
                values = [int(token) for token in tokens]
            except ValueError:
                raise GraphParseError(number, f"non-integer token in {raw!r}")
            if len(values) == 1:
                if declared is not None or edges:
                    raise GraphParseError(number, "vertex-count header must come first")
                if values[0] < 0:
                    raise GraphParseError(number, "negative vertex count")
                declared = values[0]
                continue
            if len(values) != 2:
                raise GraphParseError(number, f"expected 'u v', got {raw!r}")
            u, v = values
            if u < 0 or v < 0:
                raise GraphParseError(number, f"negative vertex id in {raw!r}")
            if u == v:
                raise GraphParseError(number, f"loop at vertex {u}")
            if declared is not None and max(u, v) >= declared:
                raise GraphParseError(number, f"vertex id beyond declared count {declared}")
            edges.append((u, v))
            edge_lines.setdefault((min(u, v), max(u, v)), number)

        n = declared if declared is not None else 1 + max((max(e) for e in edges), default=-1)
        try:
            return Graph.from_edges(n, edges)
        except ParameterError as e:
            raise GraphParseError(min(edge_lines.values(), default=1), str(e))

    def decode_all(self, data: bytes) -> List[Graph]:
        return [self.decode(data)]


CODECS: Dict[str, GraphCodec] = {codec.name: codec for codec in (Graph6Codec(), EdgeListCodec())}


def codec_for(path_or_format: str) -> GraphCodec:
    """Pick a codec by format name or by file extension (graph6 by default)."""
    if path_or_format in CODECS:
        return CODECS[path_or_format]
    lowered = path_or_format.lower()
    for codec in CODECS.values():
        if any(lowered.endswith(ext) for ext in codec.extensions):
            return codec
    return CODECS["graph6"]


def encode(graph: Graph, fmt: str = "graph6") -> bytes:
    return codec_for(fmt).encode(graph)


def decode(data: bytes, fmt: str = "graph6") -> Graph:
    return codec_for(fmt).decode(data)
