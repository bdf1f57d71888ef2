"""Walshaw's multilevel layout: matching-based coarsening with grid-accelerated forces."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..graph import Graph, is_connected
from ..layout import EUCLIDEAN, Layout, make_rng

# refinement multiplies the natural length by this factor per level
LEVEL_SCALE = math.sqrt(4.0 / 7.0)
# below this many vertices global repulsion is summed exactly
EXACT_LIMIT = 2000
# otherwise pairs farther apart than CUTOFF_FACTOR * k are ignored
CUTOFF_FACTOR = 4.0


@dataclass
class CoarseHierarchy:
    """Graphs G_0 (input) .. G_L (coarsest) with vertex weights and projections.

    ``projection[i][v]`` is the vertex of G_{i+1} that v of G_i collapsed into.
    """

    graphs: list[Graph] = field(default_factory=list)
    vertex_weight: list[np.ndarray] = field(default_factory=list)
    projection: list[np.ndarray] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.graphs)

    def to_json(self) -> str:
        levels = []
        for i, (gr, w) in enumerate(zip(self.graphs, self.vertex_weight)):
            entry = {"level": i, "n": gr.n, "edges": [list(e) for e in gr.edges], "weights": w.tolist()}
            if i < len(self.projection):
                entry["projection"] = self.projection[i].tolist()
            levels.append(entry)
        return json.dumps({"kind": "matching", "levels": levels}) + "\n"


def match_coarsen(g: Graph, weight: np.ndarray | None = None, seed: int = 0) -> tuple[Graph, np.ndarray, np.ndarray]:
    """Collapse a seeded random maximal matching.

    Vertices are visited in a seeded random order; an unmatched vertex pairs
    with its unmatched neighbour of least weight (lowest id on ties).  Coarse
    ids follow visit order.  Returns (coarse graph, coarse weights, projection).
    """
    n = g.n
    if n < 2:
        raise ValueError("need at least two vertices to coarsen")
    w = np.ones(n, dtype=np.int64) if weight is None else np.asarray(weight, dtype=np.int64)
    proj = -np.ones(n, dtype=np.int64)
    cw = []
    for v in make_rng(seed).permutation(n).tolist():
        if proj[v] >= 0:
            continue
        best = -1
        for u in g.neighbors(v):
            if proj[u] < 0 and (best < 0 or w[u] < w[best]):
                best = u
        proj[v] = len(cw)
        total = int(w[v])
        if best >= 0:
            proj[best] = len(cw)
            total += int(w[best])
        cw.append(total)
    edges = {(min(a, b), max(a, b)) for a, b in zip(proj[g.edge_array[:, 0]].tolist(), proj[g.edge_array[:, 1]].tolist()) if a != b}
    return Graph(len(cw), edges), np.array(cw, dtype=np.int64), proj


def build_hierarchy(g: Graph, seed: int = 0, min_size: int = 2, min_shrink: float = 0.95) -> CoarseHierarchy:
    """Coarsen until at most ``min_size`` vertices or a level stops shrinking."""
    h = CoarseHierarchy([g], [np.ones(g.n, dtype=np.int64)], [])
    rng = make_rng(seed)
    while h.graphs[-1].n > min_size:
        cur = h.graphs[-1]
        coarse, w, proj = match_coarsen(cur, h.vertex_weight[-1], int(rng.integers(2**63)))
        if coarse.n > min_shrink * cur.n:
            break
        h.graphs.append(coarse)
        h.vertex_weight.append(w)
        h.projection.append(proj)
    return h


def walshaw_forces(x: float, d: int, w: float, k: float, C: float) -> tuple[float, float]:
    """(global f_g = -C w k^2 / x, local f_l = (x - k)/d - f_g)."""
    if x <= 0 or d < 1:
        raise ValueError("need x > 0 and degree >= 1")
    fg = -C * w * k * k / x
    return fg, (x - k) / d - fg


def _displacement(pos, edges, deg, weight, k, C, cutoff):
    coef = C * weight.astype(float) * k * k
    if cutoff is None:
        disp = kernels.repulsion_all(pos, coef)
    else:
        disp = kernels.repulsion_grid(pos, coef, cutoff)
    if edges.shape[0]:
        u, v = edges[:, 0], edges[:, 1]
        delta = pos[v] - pos[u]
        x = np.sqrt(np.sum(delta * delta, axis=1))
        ok = x > 0
        xs = np.where(ok, x, 1.0)
        # local force on u along delta (towards v), and on v towards u
        fu = np.where(ok, (x - k) / deg[u] + C * weight[v] * k * k / xs, 0.0) / xs
        fv = np.where(ok, (x - k) / deg[v] + C * weight[u] * k * k / xs, 0.0) / xs
        np.add.at(disp, u, delta * fu[:, None])
        np.add.at(disp, v, -delta * fv[:, None])
    return disp


def walshaw_level(
    g: Graph,
    pos: np.ndarray,
    weight: np.ndarray,
    k: float,
    C: float = 0.2,
    t0: float | None = None,
    tol: float = 0.01,
    cooling: float = 0.9,
    max_iters: int = 200,
    exact_limit: int = EXACT_LIMIT,
) -> tuple[np.ndarray, int]:
    """Single-level force loop; stops once no vertex moves more than k * tol.

    Moves are capped by a temperature starting at ``t0`` (default 2k) and
    decaying geometrically.  Returns (positions, sweeps).
    """
    pos = np.ascontiguousarray(pos, dtype=float).copy()
    edges = g.edge_array
    deg = np.maximum(np.array([g.degree(v) for v in range(g.n)], dtype=float), 1.0)
    cutoff = None if g.n <= exact_limit else CUTOFF_FACTOR * k
    t = 2.0 * k if t0 is None else t0
    sweeps = 0
    while sweeps < max_iters:
        sweeps += 1
        disp = _displacement(pos, edges, deg, weight, k, C, cutoff)
        length = np.sqrt(np.sum(disp * disp, axis=1))
        scale = np.divide(np.minimum(length, t), length, out=np.zeros_like(length), where=length > 0)
        step = disp * scale[:, None]
        pos += step
        t *= cooling
        if np.max(length * scale, initial=0.0) <= k * tol:
            break
    return pos, sweeps


def walshaw_layout(
    g: Graph,
    C: float = 0.2,
    t0: float | None = None,
    tol: float = 0.01,
    seed: int = 0,
    min_size: int = 2,
    cooling: float = 0.9,
    max_iters: int = 200,
    hierarchy: CoarseHierarchy | None = None,
) -> Layout:
    """Multilevel layout: solve the coarsest graph, then refine level by level.

    The natural length is 1 on the input graph and grows by sqrt(7/4) per
    coarser level.  A child starts at its parent's position plus a small
    seeded offset.  ``t0`` is relative to k (default 2k at every level).
    """
    if not is_connected(g):
        raise ValueError("graph is disconnected; lay out components separately")
    h = hierarchy if hierarchy is not None else build_hierarchy(g, seed, min_size)
    rng = make_rng(int(seed) ^ 0x5EED_0005)
    top = h.depth - 1
    k = LEVEL_SCALE ** -top
    pos = (rng.random((h.graphs[top].n, 2)) - 0.5) * k
    for lvl in range(top, -1, -1):
        if lvl < top:
            k *= LEVEL_SCALE
            parent = h.projection[lvl]
            pos = pos[parent] + rng.normal(scale=0.01 * k, size=(h.graphs[lvl].n, 2))
        start_t = None if t0 is None else t0 * k
        pos, _ = walshaw_level(h.graphs[lvl], pos, h.vertex_weight[lvl], k, C, start_t, tol, cooling, max_iters)
    return Layout(EUCLIDEAN, pos)
