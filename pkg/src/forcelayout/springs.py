"""Spring embedders: Eades' logarithmic springs and Fruchterman-Reingold.

Fruchterman-Reingold comes in three flavours that differ only in how the
repulsive term is evaluated: exact all-pairs, a cell grid that ignores pairs
beyond a cutoff radius, and a Barnes-Hut quadtree.  Every iteration computes
forces against a frozen snapshot of the positions and then moves all
vertices at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .graph import Graph
from .layout import EUCLIDEAN, Layout, Temperature, cool, init_random, make_rng, separate_coincident

# per-run jitter stream is derived from the layout seed with this offset so it
# never overlaps the initial-placement stream
_JITTER_STREAM = 0x5EED_0001


def _jitter_rng(seed: int) -> np.random.Generator:
    return make_rng(int(seed) ^ _JITTER_STREAM)


# ---------------------------------------------------------------------------
# Eades
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EadesParams:
    c1: float = 2.0
    c2: float = 1.0
    c3: float = 1.0
    c4: float = 0.1
    M: int = 100
    # "sqrt" is c3/sqrt(d); "inverse-square" is c3/d^2
    repulsion: str = "sqrt"

    def __post_init__(self):
        if self.c2 <= 0:
            raise ValueError("c2 must be positive")
        if self.M < 1:
            raise ValueError("M must be at least 1")
        if self.repulsion not in ("sqrt", "inverse-square"):
            raise ValueError(f"unknown repulsion law {self.repulsion!r}")


def eades_spring_force(d: float, p: EadesParams = EadesParams()) -> float:
    """Attractive magnitude c1*log(d/c2); negative values push apart."""
    if d <= 0:
        raise ValueError("spring length must be positive")
    return p.c1 * math.log(d / p.c2)


def eades_repulsion(d: float, p: EadesParams = EadesParams()) -> float:
    if d <= 0:
        raise ValueError("distance must be positive")
    if p.repulsion == "sqrt":
        return p.c3 / math.sqrt(d)
    return p.c3 / (d * d)


def eades_forces(pos: np.ndarray, g: Graph, p: EadesParams) -> np.ndarray:
    """Net force per vertex: springs along edges, repulsion between non-adjacent pairs."""
    n = g.n
    force = np.zeros((n, 2))
    if n < 2:
        return force
    delta = pos[None, :, :] - pos[:, None, :]  # delta[i, j] = p_j - p_i
    dist = np.sqrt(np.sum(delta * delta, axis=2))
    adj = np.zeros((n, n), dtype=bool)
    if g.m:
        e = g.edge_array
        adj[e[:, 0], e[:, 1]] = True
        adj[e[:, 1], e[:, 0]] = True
    ok = dist > 0
    safe = np.where(ok, dist, 1.0)
    spring = np.where(adj & ok, p.c1 * np.log(safe / p.c2), 0.0)
    if p.repulsion == "sqrt":
        rep = p.c3 / np.sqrt(safe)
    else:
        rep = p.c3 / (safe * safe)
    rep = np.where(~adj & ok, rep, 0.0)
    np.fill_diagonal(rep, 0.0)
    # positive magnitude pulls i toward j, repulsion pushes i away
    mag = (spring - rep) / safe
    force[:, 0] = np.sum(mag * delta[:, :, 0], axis=1)
    force[:, 1] = np.sum(mag * delta[:, :, 1], axis=1)
    return force


def eades_layout(
    g: Graph,
    p: EadesParams = EadesParams(),
    seed: int = 0,
    init: Layout | None = None,
    frame: tuple[float, float] = (1.0, 1.0),
) -> Layout:
    """SPRING: M rounds of moving every vertex by c4 times its net force."""
    start = init if init is not None else init_random(g, seed, frame)
    pos = start.copy_positions()
    rng = _jitter_rng(seed)
    scale = 1e-6 * max(frame)
    for _ in range(p.M):
        separate_coincident(pos, rng, scale)
        pos += p.c4 * eades_forces(pos, g, p)
    return Layout(EUCLIDEAN, pos, start.frame)


# ---------------------------------------------------------------------------
# Fruchterman-Reingold
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrParams:
    W: float = 1.0
    L: float = 1.0
    C: float = 1.0
    iterations: int = 50
    t0: float | None = None  # defaults to W / 10
    schedule: str = "inverse-linear"
    factor: float = 0.95

    def __post_init__(self):
        if self.W <= 0 or self.L <= 0:
            raise ValueError("frame dimensions must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")

    def k(self, n: int) -> float:
        """Optimal pairwise distance C*sqrt(area / n)."""
        return self.C * math.sqrt(self.W * self.L / max(n, 1))

    def temperature(self) -> Temperature:
        t0 = self.W / 10.0 if self.t0 is None else self.t0
        return Temperature.start(t0, self.iterations, self.schedule, self.factor)


def fr_forces(d: float, k: float) -> tuple[float, float]:
    """(attractive d^2/k, repulsive -k^2/d)."""
    if d <= 0 or k <= 0:
        raise ValueError("distance and k must be positive")
    return d * d / k, -k * k / d


def fr_attraction(pos: np.ndarray, edges: np.ndarray, k: float) -> np.ndarray:
    """Displacement from d^2/k springs; each edge pulls both endpoints together."""
    disp = np.zeros_like(pos)
    if edges.shape[0] == 0:
        return disp
    u, v = edges[:, 0], edges[:, 1]
    delta = pos[v] - pos[u]
    d = np.sqrt(np.sum(delta * delta, axis=1))
    # (delta/|delta|) * d^2/k == delta * d / k, and vanishes at d = 0
    step = delta * (d / k)[:, None]
    np.add.at(disp, v, -step)
    np.add.at(disp, u, step)
    return disp


Repulsion = Callable[[np.ndarray, float], np.ndarray]


def _all_pairs(pos: np.ndarray, k: float) -> np.ndarray:
    return kernels.repulsion_all(np.ascontiguousarray(pos), np.full(pos.shape[0], k * k))


def fr_displacement(pos: np.ndarray, edges: np.ndarray, k: float, repulsion: Repulsion = _all_pairs) -> np.ndarray:
    return repulsion(pos, k) + fr_attraction(pos, edges, k)


def _fr_run(g, p, seed, repulsion, init, on_iteration):
    start = init if init is not None else init_random(g, seed, (p.W, p.L))
    pos = start.copy_positions()
    k = p.k(g.n)
    t = p.temperature()
    edges = g.edge_array
    rng = _jitter_rng(seed)
    hw, hl = p.W / 2.0, p.L / 2.0
    for i in range(p.iterations):
        separate_coincident(pos, rng, 1e-9 * max(p.W, p.L))
        disp = fr_displacement(pos, edges, k, repulsion)
        if on_iteration is not None:
            on_iteration(i, pos.copy(), disp.copy())
        length = np.sqrt(np.sum(disp * disp, axis=1))
        moving = length > 0
        scale = np.zeros_like(length)
        scale[moving] = np.minimum(length[moving], t.value) / length[moving]
        pos += disp * scale[:, None]
        np.clip(pos[:, 0], -hw, hw, out=pos[:, 0])
        np.clip(pos[:, 1], -hl, hl, out=pos[:, 1])
        t = cool(t)
    return Layout(EUCLIDEAN, pos, (float(p.W), float(p.L)))


def fr_layout(g: Graph, p: FrParams = FrParams(), seed: int = 0, init: Layout | None = None, on_iteration=None) -> Layout:
    """Fruchterman-Reingold with exact all-pairs repulsion.

    ``on_iteration(i, positions, displacement)`` is called before each move
    with copies of the snapshot and the raw (uncapped) displacement.
    """
    return _fr_run(g, p, seed, _all_pairs, init, on_iteration)


def grid_neighbor_pairs(pos: np.ndarray, cutoff: float) -> set[tuple[int, int]]:
    """Pairs within ``cutoff`` discovered through the 3x3 cell neighbourhood."""
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    pos = np.ascontiguousarray(pos, dtype=float)
    out = set()
    c2 = cutoff * cutoff
    for v, cand in enumerate(kernels.grid_candidates(pos, cutoff)):
        for u in cand.tolist():
            if u > v:
                dx, dy = pos[v] - pos[u]
                if dx * dx + dy * dy <= c2:
                    out.add((v, u))
    return out


def fr_grid_layout(
    g: Graph,
    p: FrParams = FrParams(),
    cutoff_radius: float | None = None,
    seed: int = 0,
    init: Layout | None = None,
    on_iteration=None,
) -> Layout:
    """Grid variant: repulsion only from vertices within ``cutoff_radius`` (default 2k)."""
    cutoff = 2.0 * p.k(g.n) if cutoff_radius is None else cutoff_radius
    if cutoff <= 0:
        raise ValueError("cutoff radius must be positive")

    def repulsion(pos, k):
        return kernels.repulsion_grid(np.ascontiguousarray(pos), np.full(pos.shape[0], k * k), cutoff)

    return _fr_run(g, p, seed, repulsion, init, on_iteration)


# ---------------------------------------------------------------------------
# Barnes-Hut
# ---------------------------------------------------------------------------

MAX_DEPTH = 40


class QuadTree:
    """Quadtree over a point set with per-node counts and centroids.

    Internal nodes always have four children; leaves hold at most one point
    except at ``MAX_DEPTH`` where coincident points share a bucket.
    """

    def __init__(self, arrays, region):
        self._arrays = arrays
        (self.child, self.count, self.cx, self.cy, self.ox, self.oy,
         self.side, self.start, self.length, self.perm, self.points) = arrays
        self.region = region

    @property
    def size(self) -> int:
        return self.count.shape[0]

    def is_leaf(self, node: int) -> bool:
        return self.child[node, 0] < 0

    def centroid(self, node: int) -> tuple[float, float]:
        return float(self.cx[node]), float(self.cy[node])

    def subtree_points(self, node: int) -> list[int]:
        out, stack = [], [node]
        while stack:
            v = stack.pop()
            if self.is_leaf(v):
                s = self.start[v]
                out.extend(self.perm[s:s + self.length[v]].tolist())
            else:
                stack.extend(self.child[v].tolist())
        return sorted(out)

    def depth(self) -> int:
        best, stack = 0, [(0, 0)]
        while stack:
            v, d = stack.pop()
            best = max(best, d)
            if not self.is_leaf(v):
                stack.extend((int(c), d + 1) for c in self.child[v])
        return best


def bounding_square(points: np.ndarray, pad: float = 1e-9) -> tuple[float, float, float]:
    """(x0, y0, side) of a square containing every point strictly inside its upper edges."""
    if points.shape[0] == 0:
        return (0.0, 0.0, 1.0)
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    side = float(max(hi - lo)) or 1.0
    side *= 1.0 + pad
    side += pad
    return float(lo[0]), float(lo[1]), side


def bh_build(points: np.ndarray, region: tuple[float, float, float] | None = None) -> QuadTree:
    """Quadtree over ``points``; ``region`` is (x0, y0, side), default the bounding square."""
    pts = np.ascontiguousarray(points, dtype=float).reshape(-1, 2)
    if region is None:
        region = bounding_square(pts)
    x0, y0, side = region
    if side <= 0:
        raise ValueError("region side must be positive")
    if pts.shape[0] and (
        np.any(pts[:, 0] < x0) or np.any(pts[:, 1] < y0)
        or np.any(pts[:, 0] > x0 + side) or np.any(pts[:, 1] > y0 + side)
    ):
        raise ValueError("all points must lie inside the region")
    return QuadTree(kernels.quadtree_build(pts, float(x0), float(y0), float(side), MAX_DEPTH), (x0, y0, side))


def bh_repulsion(v: np.ndarray, tree: QuadTree, theta: float, k: float) -> np.ndarray:
    """Repulsive force on a point at ``v`` (pointing away from the others).

    A node whose side / distance-to-centroid is below ``theta`` acts as one
    body of ``count`` points at its centroid; points coincident with ``v``
    contribute nothing.
    """
    if theta < 0:
        raise ValueError("theta must be non-negative")
    q = np.asarray(v, dtype=float).reshape(1, 2)
    return kernels.quadtree_force(tree._arrays, q, float(theta), k * k)[0]


def bh_repulsion_all(pos: np.ndarray, theta: float, k: float) -> np.ndarray:
    tree = bh_build(pos)
    return kernels.quadtree_force(tree._arrays, np.ascontiguousarray(pos), float(theta), k * k)


def fr_bh_layout(
    g: Graph,
    p: FrParams = FrParams(),
    theta: float = 0.5,
    seed: int = 0,
    init: Layout | None = None,
    on_iteration=None,
) -> Layout:
    """Fruchterman-Reingold with Barnes-Hut approximated repulsion."""

    def repulsion(pos, k):
        return bh_repulsion_all(pos, theta, k)

    return _fr_run(g, p, seed, repulsion, init, on_iteration)


# single-vertex placement rules used by the tangent-plane (Riemannian) driver;
# positions are given relative to the vertex, which sits at the origin

def fr_place(rel: np.ndarray, neighbors: np.ndarray, k: float, t: float) -> np.ndarray:
    """FR move for a vertex at the origin given others' relative positions."""
    d2 = np.sum(rel * rel, axis=1)
    ok = d2 > 0
    disp = -np.sum(rel[ok] * (k * k / d2[ok])[:, None], axis=0)
    if neighbors.size:
        nb = rel[neighbors]
        d = np.sqrt(np.sum(nb * nb, axis=1))
        disp += np.sum(nb * (d / k)[:, None], axis=0)
    length = math.hypot(disp[0], disp[1])
    if length == 0.0:
        return np.zeros(2)
    return disp * (min(length, t) / length)
