"""
Graph Repository Module

File-backed access to graphs and reports:
- Loading graphs by path with format picked from the extension
- An LRU cache keyed on path and modification time
- Writing graphs and deterministic JSON reports
"""

import json
import logging
import os
from typing import Any, List, Optional

import cachetools

from domain.graph import Graph
from domain.interfaces import GraphCodec
from storage.codecs import CodecError, GraphParseError, codec_for


def dumps_report(payload: Any) -> str:
    """Deterministic JSON: sorted keys, fixed indent, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


class GraphRepository:
    """
    Loads and stores graphs on disk.

    Reads go through an LRU cache so sweeps and repeated CLI calls on the same
    file decode it once.
    """

    def __init__(self, fmt: Optional[str] = None, cache_size: int = 1024):
        """
        Args:
            fmt: Force a format name ("graph6" / "edgelist"); None picks by extension
            cache_size: Number of decoded files kept in memory
        """
        self.logger = logging.getLogger(__name__)
        self.fmt = fmt
        self.cache = cachetools.LRUCache(maxsize=cache_size)

    def _codec(self, path: str) -> GraphCodec:
        return codec_for(self.fmt or path)

    def load_all(self, path: str) -> List[Graph]:
        """
        Decode every graph stored in a file.

        Raises:
            CodecError: When the file cannot be read or parsed
        """
        try:
            key = (path, os.path.getmtime(path), self.fmt)
        except OSError as e:
            self.logger.error(f"Cannot stat graph file {path}: {str(e)}")
            raise CodecError(f"Cannot read {path}: {str(e)}")

        if key in self.cache:
            return self.cache[key]

        try:
            with open(path, "rb") as handle:
                graphs = self._codec(path).decode_all(handle.read())
        except GraphParseError as e:
            self.logger.error(f"Failed to parse {path}: {str(e)}")
            raise
        except OSError as e:
            self.logger.error(f"Failed to read {path}: {str(e)}")
            raise CodecError(f"Cannot read {path}: {str(e)}")

        self.cache[key] = graphs
        self.logger.debug(f"Loaded {len(graphs)} graph(s) from {path}")
        return graphs

    def load(self, path: str) -> Graph:
        graphs = self.load_all(path)
        if len(graphs) != 1:
            raise CodecError(f"{path} holds {len(graphs)} graphs, expected one")
        return graphs[0]

    def save(self, graph: Graph, path: str) -> None:
        with open(path, "wb") as handle:
            handle.write(self._codec(path).encode(graph))
        self.logger.info(f"Wrote graph on {graph.n} vertices to {path}")

    def write_report(self, payload: Any, path: str) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(dumps_report(payload))
