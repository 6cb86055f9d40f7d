"""
Interface Definitions Module

This module defines the contracts shared between the storage layer, the
services and the command line.

Two protocols are defined:
1. GraphCodec - For reading and writing graphs in a text format
2. Certificate - For any result that can be emitted as JSON
"""

from typing import Any, Dict, List, Protocol, Tuple

from domain.graph import Graph


class GraphCodec(Protocol):
    """
    Protocol for graph serialisation formats.

    Implementations must provide:
    - A format name and the file extensions it claims
    - Encoding of a single graph to bytes
    - Decoding of a byte payload holding one or more graphs
    """

    name: str
    extensions: Tuple[str, ...]

    def encode(self, graph: Graph) -> bytes:
        """
        Serialise a graph in canonical form.

        Args:
            graph: The graph to encode

        Returns:
            The encoded bytes, newline terminated

        Decoding the result must give back an equal graph.
        """
        ...

    def decode(self, data: bytes) -> Graph:
        """
        Parse exactly one graph.

        Args:
            data: Encoded payload

        Returns:
            The decoded graph

        Raises:
            GraphParseError: With the offending line number when the payload is malformed
        """
        ...

    def decode_all(self, data: bytes) -> List[Graph]:
        """
        Parse every graph in a payload (one per line for line-oriented formats).
        """
        ...


class Certificate(Protocol):
    """
    Protocol for results that serialise to JSON.
    """

    def as_dict(self) -> Dict[str, Any]:
        """
        Return a JSON-compatible view with deterministic ordering.
        """
        ...
