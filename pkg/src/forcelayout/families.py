"""Built-in graph families used by the test suite and the CLI."""

from __future__ import annotations

import itertools

import numpy as np

from .graph import Graph


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def empty(n: int) -> Graph:
    return Graph(n, [])


def grid(rows: int, cols: int) -> Graph:
    """rows x cols lattice; vertex ``r * cols + c``."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def hypercube(d: int) -> Graph:
    n = 1 << d
    return Graph(n, [(v, v ^ (1 << b)) for v in range(n) for b in range(d) if v < v ^ (1 << b)])


def wheel(rim: int) -> Graph:
    """Rim cycle ``0..rim-1`` plus hub ``rim``."""
    edges = [(i, (i + 1) % rim) for i in range(rim)] + [(i, rim) for i in range(rim)]
    return Graph(rim + 1, edges)


def nested_triangles(k: int) -> Graph:
    """k concentric triangles; vertex j of triangle i joins vertex j of triangle i+1.

    Triangle 0 (vertices 0, 1, 2) is the outer face.
    """
    edges = []
    for i in range(k):
        a = 3 * i
        edges += [(a, a + 1), (a + 1, a + 2), (a, a + 2)]
        if i + 1 < k:
            edges += [(a + j, a + 3 + j) for j in range(3)]
    return Graph(3 * k, edges)


def dodecahedron() -> Graph:
    """Outer pentagon 0-4, middle 10-cycle 5-14, inner pentagon 15-19."""
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((i, 5 + 2 * i))
        edges.append((15 + i, 15 + (i + 1) % 5))
        edges.append((5 + 2 * i + 1, 15 + i))
    for j in range(10):
        edges.append((5 + j, 5 + (j + 1) % 10))
    return Graph(20, edges)


def icosahedron() -> Graph:
    """Apex 0, upper ring 1-5, lower ring 6-10, apex 11; face (0, 1, 2) is a triangle."""
    edges = []
    for i in range(5):
        u, nu = 1 + i, 1 + (i + 1) % 5
        lo, nlo = 6 + i, 6 + (i + 1) % 5
        edges += [(0, u), (u, nu), (lo, nlo), (11, lo), (u, lo), (u, nlo)]
    return Graph(12, edges)


# outer faces suitable for barycentric drawing, in cyclic order
OUTER_FACES = {
    "k4": (0, 1, 2),
    "cube": (0, 1, 3, 2),
    "dodecahedron": (0, 1, 2, 3, 4),
    "icosahedron": (0, 1, 2),
}


def random_connected(n: int, extra_edges: int, rng: np.random.Generator) -> Graph:
    """Random spanning tree plus ``extra_edges`` extra random pairs."""
    edges = set()
    order = rng.permutation(n)
    for i in range(1, n):
        u = int(order[i])
        v = int(order[rng.integers(0, i)])
        edges.add((min(u, v), max(u, v)))
    tries = 0
    while extra_edges > 0 and tries < 50 * (extra_edges + 1):
        tries += 1
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v and (min(u, v), max(u, v)) not in edges:
            edges.add((min(u, v), max(u, v)))
            extra_edges -= 1
    return Graph(n, edges)


def from_spec(spec: str) -> Graph:
    """Build a family member from text like ``grid:10x12``, ``cycle:16`` or ``dodecahedron``."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    nums = [int(t) for t in arg.replace("x", ",").split(",") if t.strip()] if arg else []
    builders = {
        "path": (path, 1),
        "cycle": (cycle, 1),
        "complete": (complete, 1),
        "empty": (empty, 1),
        "grid": (grid, 2),
        "hypercube": (hypercube, 1),
        "wheel": (wheel, 1),
        "nested-triangles": (nested_triangles, 1),
        "dodecahedron": (dodecahedron, 0),
        "icosahedron": (icosahedron, 0),
    }
    if name not in builders:
        raise ValueError(f"unknown family {name!r}; choose from {', '.join(sorted(builders))}")
    fn, arity = builders[name]
    if len(nums) != arity:
        raise ValueError(f"family {name!r} takes {arity} integer argument(s)")
    return fn(*nums)
