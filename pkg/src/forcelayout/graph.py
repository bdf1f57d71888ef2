"""Simple undirected graphs, ingestion, and hop-distance computations."""

from __future__ import annotations

import json
import warnings
from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels

UNREACHABLE = -1


class GraphParseError(ValueError):
    """Malformed graph input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphWarning(UserWarning):
    """Input was simplified (self-loop or duplicate edge dropped)."""


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    Edges are stored as sorted ``(u, v)`` pairs with ``u < v``; ``adjacency[v]``
    lists neighbours in ascending order.
    """

    __slots__ = ("_n", "_edges", "_adj", "_labels", "__dict__")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels: Sequence[str] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        pairs = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            pairs.add((u, v) if u < v else (v, u))
        self._n = n
        self._edges = tuple(sorted(pairs))
        adj = [[] for _ in range(n)]
        for u, v in self._edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise ValueError("need exactly one label per vertex")
        self._labels = tuple(str(s) for s in labels)

    @property
    def n(self) -> int:
        return self._n

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def m(self) -> int:
        return len(self._edges)

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) int64 arrays of the adjacency structure."""
        indptr = np.zeros(self._n + 1, dtype=np.int64)
        for v, a in enumerate(self._adj):
            indptr[v + 1] = indptr[v] + len(a)
        indices = np.fromiter((u for a in self._adj for u in a), dtype=np.int64, count=int(indptr[-1]))
        return indptr, indices

    @cached_property
    def edge_array(self) -> np.ndarray:
        return np.array(self._edges, dtype=np.int64).reshape(-1, 2)

    def subgraph(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, vertices renumbered in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u, v in self._edges if u in index and v in index]
        return Graph(len(vertices), edges, [self._labels[v] for v in vertices])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges and self._labels == other._labels

    def __hash__(self):
        return hash((self._n, self._edges, self._labels))

    def __repr__(self):
        return f"Graph(n={self._n}, m={len(self._edges)})"


class DistanceMatrix:
    """Hop distances from an ordered list of sources to every vertex.

    ``distances[r, u]`` is the distance from ``sources[r]`` to ``u`` or
    ``UNREACHABLE``.  A matrix whose sources are ``0..n-1`` in order is full.
    """

    def __init__(self, sources: Sequence[int], distances: np.ndarray):
        self.sources = tuple(int(s) for s in sources)
        self.distances = np.asarray(distances)
        self.distances.setflags(write=False)
        if self.distances.shape[0] != len(self.sources):
            raise ValueError("one distance row per source required")
        self._row_of = {s: r for r, s in enumerate(self.sources)}

    @property
    def n(self) -> int:
        return self.distances.shape[1]

    @property
    def is_full(self) -> bool:
        return self.sources == tuple(range(self.n))

    def row(self, source: int) -> np.ndarray:
        return self.distances[self._row_of[source]]

    def __call__(self, u: int, v: int) -> int:
        return int(self.distances[self._row_of[u], v])

    def connected(self) -> bool:
        return not np.any(self.distances == UNREACHABLE)

    def as_float(self) -> np.ndarray:
        """Float copy with ``inf`` for unreachable pairs."""
        d = self.distances.astype(float)
        d[self.distances == UNREACHABLE] = np.inf
        return d

    def diameter(self) -> int:
        reach = self.distances[self.distances != UNREACHABLE]
        return int(reach.max()) if reach.size else 0


# ---------------------------------------------------------------------------
# ingestion and serialisation
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated vertex-token pairs, one per line.

    Blank lines and lines starting with ``#`` are skipped.  Tokens become
    dense ids in order of first appearance.  Self-loops and duplicate edges
    are dropped with a ``GraphWarning``.
    """
    ids: dict[str, int] = {}
    edges = set()
    seen_any = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"expected two vertex tokens, got {len(parts)}", lineno)
        seen_any = True
        a, b = (ids.setdefault(tok, len(ids)) for tok in parts)
        if a == b:
            warnings.warn(f"line {lineno}: self-loop on {parts[0]!r} dropped", GraphWarning, stacklevel=2)
            continue
        key = (a, b) if a < b else (b, a)
        if key in edges:
            warnings.warn(f"line {lineno}: duplicate edge {parts[0]} {parts[1]} dropped", GraphWarning, stacklevel=2)
            continue
        edges.add(key)
    if not seen_any:
        raise GraphParseError("empty input")
    labels = [None] * len(ids)
    for tok, i in ids.items():
        labels[i] = tok
    return Graph(len(ids), edges, labels)


def to_edge_list(g: Graph) -> str:
    """Edge-list text that ``parse_edge_list`` maps back to ``g``.

    Lines are ordered so that vertices first appear in id order; a vertex
    with no earlier neighbour is declared with a self-loop line, which the
    parser drops (with a warning) after registering the vertex.
    """
    lab = g.labels
    for s in lab:
        if not s or any(c.isspace() for c in s) or s.startswith("#"):
            raise ValueError(f"label {s!r} cannot be written as an edge-list token")
    lines = []
    emitted = set()
    for v in range(g.n):
        earlier = [u for u in g.neighbors(v) if u < v]
        if earlier:
            u = earlier[0]
            lines.append(f"{lab[v]} {lab[u]}")
            emitted.add((u, v))
        else:
            lines.append(f"{lab[v]} {lab[v]}")
    for u, v in g.edges:
        if (u, v) not in emitted:
            lines.append(f"{lab[u]} {lab[v]}")
    return "\n".join(lines) + "\n"


def parse_json_graph(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise GraphParseError('JSON graph needs "n" and "edges"')
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise GraphParseError('"n" must be a non-negative integer')
    if n == 0:
        raise GraphParseError("empty graph")
    edges = set()
    for e in data["edges"]:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
            raise GraphParseError(f"bad edge entry {e!r}")
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"edge {e!r} out of range")
        if u == v:
            warnings.warn(f"self-loop on {u} dropped", GraphWarning, stacklevel=2)
            continue
        key = (min(u, v), max(u, v))
        if key in edges:
            warnings.warn(f"duplicate edge {e!r} dropped", GraphWarning, stacklevel=2)
            continue
        edges.add(key)
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise GraphParseError('"labels" must list one entry per vertex')
    return Graph(n, edges, labels)


def dump_json_graph(g: Graph) -> str:
    """Canonical JSON: keys n, edges, labels in that order, LF-terminated."""
    doc = {"n": g.n, "edges": [list(e) for e in g.edges], "labels": list(g.labels)}
    return json.dumps(doc, ensure_ascii=False) + "\n"


def load_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return parse_json_graph(text)
    return parse_edge_list(text)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def _check_vertex(g: Graph, v: int) -> int:
    if not (0 <= int(v) < g.n):
        raise ValueError(f"invalid vertex id {v}")
    return int(v)


def bfs_apsp(g: Graph, sources: Sequence[int] | None = None) -> DistanceMatrix:
    """Hop distances by one BFS per source (all vertices by default)."""
    if sources is None:
        sources = range(g.n)
    src = [_check_vertex(g, s) for s in sources]
    indptr, indices = g.csr
    rows = kernels.bfs_rows(indptr, indices, np.array(src, dtype=np.int64), -1)
    return DistanceMatrix(src, rows)


def k_neighborhood(g: Graph, v: int, radius: int) -> set[int]:
    """All vertices within ``radius`` hops of ``v`` via truncated BFS."""
    v = _check_vertex(g, v)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    indptr, indices = g.csr
    return set(kernels.ball(indptr, indices, v, radius).tolist())


def connected_components(g: Graph) -> list[list[int]]:
    """Components as ascending vertex lists, ordered by smallest member."""
    seen = [False] * g.n
    parts = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    queue.append(u)
        parts.append(sorted(comp))
    return parts


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1
