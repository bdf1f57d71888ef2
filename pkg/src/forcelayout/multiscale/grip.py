"""GRIP: maximal-independent-set filtration with neighbourhood-local refinement."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..graph import Graph, is_connected
from ..layout import EUCLIDEAN, Layout, make_rng

HEAT_GROW = 1.3
HEAT_SHRINK = 0.7
HEAT_BOUNDS = (0.01, 4.0)


@dataclass(frozen=True, eq=False)
class Filtration:
    """Nested vertex sets V_0 = V, V_1, ..., V_k (each sorted ascending)."""

    levels: tuple[np.ndarray, ...]
    level_of: np.ndarray

    @property
    def depth(self) -> int:
        return len(self.levels)

    def to_json(self) -> str:
        doc = {
            "kind": "filtration",
            "levels": [{"level": i, "min_distance": 1 << i, "vertices": lv.tolist()}
                       for i, lv in enumerate(self.levels)],
        }
        return json.dumps(doc) + "\n"


def mis_filtration(g: Graph, seed: int = 0) -> Filtration:
    """Greedy MIS filtration: V_i keeps members of V_{i-1} pairwise >= 2^i apart.

    Each level scans V_{i-1} in one seeded order and accepts a vertex unless
    an accepted vertex lies within 2^i - 1 hops.  Construction stops once a
    level has at most three vertices or stops shrinking.
    """
    if not is_connected(g):
        raise ValueError("graph is disconnected; lay out components separately")
    n = g.n
    indptr, indices = g.csr
    scan = make_rng(seed).permutation(n)
    levels = [np.arange(n, dtype=np.int64)]
    level_of = np.zeros(n, dtype=np.int64)
    i = 0
    while levels[-1].size > 3:
        i += 1
        inside = np.zeros(n, dtype=bool)
        inside[levels[-1]] = True
        blocked = np.zeros(n, dtype=bool)
        chosen = []
        reach = (1 << i) - 1
        for v in scan.tolist():
            if inside[v] and not blocked[v]:
                chosen.append(v)
                blocked[kernels.ball(indptr, indices, v, reach)] = True
        if len(chosen) >= levels[-1].size:
            break
        lv = np.array(sorted(chosen), dtype=np.int64)
        levels.append(lv)
        level_of[lv] = i
    return Filtration(tuple(levels), level_of)


def neighborhoods(g: Graph, members: np.ndarray, sources: np.ndarray, size: int):
    """Up to ``size`` nearest ``members`` of each source (BFS order), with hop distances."""
    mask = np.zeros(g.n, dtype=np.uint8)
    mask[members] = 1
    indptr, indices = g.csr
    return kernels.nearest_members(indptr, indices, mask, np.ascontiguousarray(sources, dtype=np.int64), size)


def _place(anchors: np.ndarray, dist: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Position whose distances to ``anchors`` best match ``dist``.

    Three or more anchors: linearised trilateration least squares.  Fewer,
    or a degenerate configuration: anchor barycentre plus random offset.
    """
    m = anchors.shape[0]
    if m >= 3:
        a0, d0 = anchors[0], dist[0]
        a = 2.0 * (anchors[1:] - a0)
        b = (np.sum(anchors[1:] ** 2, axis=1) - a0 @ a0) - dist[1:] ** 2 + d0 * d0
        sol, _, rank, sv = np.linalg.lstsq(a, b, rcond=None)
        if rank == 2 and sv[-1] > 1e-6 * sv[0]:
            return sol + rng.normal(scale=1e-3 * max(d0, 1.0), size=2)
    if m == 0:
        return rng.normal(scale=0.5, size=2)
    spread = 0.5 * float(np.mean(dist))
    return anchors.mean(axis=0) + rng.normal(scale=max(spread, 1e-3), size=2)


def _refine(pos, nb_idx, nb_dist, rounds, h0):
    """Jitter-free Jacobi rounds of heat-scaled local KK moves on local indices."""
    valid = nb_idx >= 0
    idx = np.where(valid, nb_idx, 0)
    dist = np.where(valid, nb_dist, 1).astype(float)
    k = np.where(valid, 1.0 / (dist * dist), 0.0)
    ksum = k.sum(axis=1)
    ksum[ksum == 0] = 1.0
    heat = np.full(pos.shape[0], h0)
    prev = np.zeros_like(pos)
    lo, hi = HEAT_BOUNDS[0] * h0, HEAT_BOUNDS[1] * h0
    for _ in range(rounds):
        delta = pos[:, None, :] - pos[idx]
        r = np.sqrt(np.sum(delta * delta, axis=2))
        ok = valid & (r > 0)
        coef = np.where(ok, k * (1.0 - dist / np.where(ok, r, 1.0)), 0.0)
        # -gradient / sum k: the point that best satisfies all local ideals
        disp = -np.einsum("vj,vjc->vc", coef, delta) / ksum[:, None]
        norm = np.sqrt(np.sum(disp * disp, axis=1)) * np.sqrt(np.sum(prev * prev, axis=1))
        cos = np.divide(np.sum(disp * prev, axis=1), norm, out=np.zeros_like(norm), where=norm > 0)
        heat = np.where(cos > 0.5, heat * HEAT_GROW, np.where(cos < -0.5, heat * HEAT_SHRINK, heat))
        np.clip(heat, lo, hi, out=heat)
        step = disp * heat[:, None]
        pos += step
        prev = disp
    return pos


def grip_layout(
    g: Graph,
    rounds: int = 30,
    seed: int = 0,
    neighborhood_size: int = 50,
    h0: float = 0.5,
    filtration: Filtration | None = None,
) -> Layout:
    """Coarse-to-fine placement along the MIS filtration.

    Vertices entering at level i are placed from hop distances to their
    three nearest already-placed vertices, then all of V_i take ``rounds``
    heat-scaled KK moves towards their up to ``neighborhood_size`` nearest
    V_i members.  Unit graph distance maps to unit length.
    """
    f = filtration if filtration is not None else mis_filtration(g, seed)
    rng = make_rng(int(seed) ^ 0x5EED_0004)
    pos = np.zeros((g.n, 2))
    placed = np.zeros(g.n, dtype=bool)
    for i in range(f.depth - 1, -1, -1):
        lv = f.levels[i]
        new = lv[~placed[lv]]
        if i == f.depth - 1:
            for v in new.tolist():
                anchors = np.flatnonzero(placed)
                if anchors.size:
                    nb, nd = neighborhoods(g, anchors, np.array([v]), 3)
                    ok = nb[0] >= 0
                    pos[v] = _place(pos[nb[0][ok]], nd[0][ok].astype(float), rng)
                else:
                    pos[v] = 0.0
                placed[v] = True
        elif new.size:
            nb, nd = neighborhoods(g, np.flatnonzero(placed), new, 3)
            for row, v in enumerate(new.tolist()):
                ok = nb[row] >= 0
                pos[v] = _place(pos[nb[row][ok]], nd[row][ok].astype(float), rng)
            placed[new] = True
        size = min(neighborhood_size, lv.size - 1)
        if size < 1:
            continue
        nb, nd = neighborhoods(g, lv, lv, size)
        local = -np.ones(g.n, dtype=np.int64)
        local[lv] = np.arange(lv.size)
        nb_local = np.where(nb >= 0, local[np.maximum(nb, 0)], -1)
        pos[lv] = _refine(pos[lv].copy(), nb_local, nd, rounds, h0)
    return Layout(EUCLIDEAN, pos)


def level_count_bound(diameter: int) -> int:
    """ceil(log2(diameter)) + 1: no level past this can hold two vertices."""
    return (math.ceil(math.log2(diameter)) if diameter > 1 else 0) + 1
