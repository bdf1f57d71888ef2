"""Distance-driven layouts: Kamada-Kawai, stress majorization, pivot MDS."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import UNREACHABLE, DistanceMatrix, Graph, bfs_apsp
from .layout import EUCLIDEAN, Layout, init_random, make_rng, separate_coincident, stress

_JITTER_STREAM = 0x5EED_0002
INNER_CAP = 50


def _require_connected(d: DistanceMatrix):
    if not d.is_full:
        raise ValueError("a full distance matrix is required")
    if not d.connected():
        raise ValueError("graph is disconnected; lay out components separately")


# ---------------------------------------------------------------------------
# Kamada-Kawai
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KkModel:
    """Ideal lengths l_ij = L*d_ij and strengths k_ij = K/d_ij^2 (zero on the diagonal)."""

    d: np.ndarray
    l: np.ndarray
    k: np.ndarray
    L: float
    K: float
    epsilon: float

    @property
    def n(self) -> int:
        return self.d.shape[0]


def kk_build(d: DistanceMatrix, L0: float = 1.0, K: float = 1.0, epsilon: float = 1e-4) -> KkModel:
    _require_connected(d)
    if L0 <= 0 or K <= 0:
        raise ValueError("L0 and K must be positive")
    dist = d.distances.astype(float)
    diam = dist.max() if dist.size else 0.0
    L = L0 / diam if diam > 0 else L0
    l = L * dist
    with np.errstate(divide="ignore"):
        k = np.where(dist > 0, K / (dist * dist), 0.0)
    for a in (dist, l, k):
        a.setflags(write=False)
    return KkModel(dist, l, k, L, float(K), float(epsilon))


def _pair_geometry(pos):
    delta = pos[:, None, :] - pos[None, :, :]  # delta[m, j] = p_m - p_j
    r = np.sqrt(np.sum(delta * delta, axis=2))
    return delta, r


def kk_energy(layout: Layout, m: KkModel) -> float:
    """Sum over i < j of 1/2 k_ij (|p_i - p_j| - l_ij)^2."""
    _, r = _pair_geometry(layout.positions)
    t = r - m.l
    iu = np.triu_indices(m.n, 1)
    return float(0.5 * np.sum(m.k[iu] * t[iu] ** 2))


def kk_gradient(layout: Layout, m: KkModel) -> np.ndarray:
    """(dE/dx_m, dE/dy_m) per vertex; coincident pairs contribute nothing."""
    delta, r = _pair_geometry(layout.positions)
    ok = r > 0
    coef = np.where(ok, m.k * (1.0 - m.l / np.where(ok, r, 1.0)), 0.0)
    return np.einsum("mj,mjc->mc", coef, delta)


def kk_delta(layout: Layout, m: KkModel, v: int) -> float:
    gx, gy = kk_gradient(layout, m)[v]
    return math.hypot(gx, gy)


def kk_hessian(layout: Layout, m: KkModel, v: int) -> np.ndarray:
    """2x2 matrix of second partials of E with respect to (x_v, y_v)."""
    pos = layout.positions
    delta = pos[v] - pos
    r = np.sqrt(np.sum(delta * delta, axis=1))
    ok = r > 0
    dx, dy, r = delta[ok, 0], delta[ok, 1], r[ok]
    k, l = m.k[v][ok], m.l[v][ok]
    r3 = r ** 3
    hxx = np.sum(k * (1 - l * dy * dy / r3))
    hyy = np.sum(k * (1 - l * dx * dx / r3))
    hxy = np.sum(k * l * dx * dy / r3)
    return np.array([[hxx, hxy], [hxy, hyy]])


def kk_pairs(m: KkModel, radius: float | None = None):
    """CSR pair lists (indptr, indices, l, k) of the interacting pairs.

    With ``radius`` only pairs at graph distance <= radius interact.
    """
    n = m.n
    mask = ~np.eye(n, dtype=bool)
    if radius is not None:
        mask &= m.d <= radius
    counts = mask.sum(axis=1)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    rows, cols = np.nonzero(mask)
    return indptr, cols.astype(np.int64), np.ascontiguousarray(m.l[rows, cols]), np.ascontiguousarray(m.k[rows, cols])


@dataclass
class KkLog:
    """Every applied single-vertex move: vertex id and its new position."""

    vertex: np.ndarray
    x: np.ndarray
    y: np.ndarray
    selections: int = 0

    @classmethod
    def empty(cls, capacity: int) -> "KkLog":
        return cls(np.zeros(capacity, dtype=np.int64), np.zeros(capacity), np.zeros(capacity))

    def moves(self) -> list[tuple[int, float, float]]:
        return list(zip(self.vertex.tolist(), self.x.tolist(), self.y.tolist()))


def kk_run(pos: np.ndarray, pairs, n_select: int, epsilon: float,
           inner_cap: int = INNER_CAP, log_capacity: int = 0) -> tuple[np.ndarray, KkLog]:
    """Repeated argmax-Delta selection with damped Newton moves over ``pairs``.

    The chosen vertex takes Newton steps (halved until its energy does not
    rise; a gradient step scaled by 1/sum k is the fallback when the 2x2
    system is singular or fails to descend) until its Delta drops to
    ``epsilon`` or ``inner_cap`` steps were taken.  Ties in the argmax go to
    the lowest id.
    """
    indptr, indices, lij, kij = pairs
    x = np.ascontiguousarray(pos[:, 0], dtype=float).copy()
    y = np.ascontiguousarray(pos[:, 1], dtype=float).copy()
    gx, gy = kernels.kk_gradients(x, y, indptr, indices, lij, kij)
    log = KkLog.empty(log_capacity)
    sel, moves = kernels.kk_updates(x, y, gx, gy, indptr, indices, lij, kij,
                                    int(n_select), int(inner_cap), float(epsilon),
                                    log.vertex, log.x, log.y)
    keep = min(moves, log_capacity)
    log = KkLog(log.vertex[:keep], log.x[:keep], log.y[:keep], sel)
    return np.column_stack([x, y]), log


def kk_layout(
    g: Graph,
    L0: float = 1.0,
    K: float = 1.0,
    epsilon: float = 1e-4,
    seed: int = 0,
    max_outer: int | None = None,
    init: Layout | None = None,
    log_capacity: int = 0,
) -> Layout | tuple[Layout, KkLog]:
    """Kamada-Kawai spring energy minimisation one vertex at a time.

    Starts from a random placement in an L0 x L0 frame unless ``init`` is
    given.  ``max_outer`` bounds vertex selections (default 100 n).  When
    ``log_capacity`` is positive the move log is returned alongside.
    """
    model = kk_build(bfs_apsp(g), L0, K, epsilon)
    start = init if init is not None else init_random(g, seed, (L0, L0))
    pos = start.copy_positions()
    separate_coincident(pos, make_rng(int(seed) ^ _JITTER_STREAM), 1e-9 * L0)
    cap = 100 * g.n if max_outer is None else max_outer
    out, log = kk_run(pos, kk_pairs(model), cap, epsilon, log_capacity=log_capacity)
    result = Layout(EUCLIDEAN, out, start.frame)
    return (result, log) if log_capacity else result


# ---------------------------------------------------------------------------
# stress majorization
# ---------------------------------------------------------------------------

def _weights(dist: np.ndarray, weighting: str) -> np.ndarray:
    if weighting == "uniform":
        w = np.ones_like(dist)
    elif weighting == "inverse-square":
        with np.errstate(divide="ignore"):
            w = np.where(dist > 0, 1.0 / (dist * dist), 0.0)
    else:
        raise ValueError(f"unknown weighting {weighting!r}")
    np.fill_diagonal(w, 0.0)
    return w


class _Majorizer:
    """Guttman transform X <- V^+ B(X) X for a fixed distance matrix and weighting."""

    def __init__(self, d: DistanceMatrix, weighting: str):
        _require_connected(d)
        self.dist = d.distances.astype(float)
        self.w = _weights(self.dist, weighting)
        self.wd = self.w * self.dist
        self.uniform = weighting == "uniform"
        n = self.dist.shape[0]
        if not self.uniform:
            v = -self.w.copy()
            np.fill_diagonal(v, self.w.sum(axis=1))
            self.vplus = np.linalg.pinv(v)

    def step(self, pos: np.ndarray) -> np.ndarray:
        n = pos.shape[0]
        if n < 2:
            return pos.copy()
        _, r = _pair_geometry(pos)
        ok = r > 0
        # coincident pairs get b_ij = 0, which keeps the majorizing bound valid
        b = np.where(ok, -self.wd / np.where(ok, r, 1.0), 0.0)
        np.fill_diagonal(b, 0.0)
        np.fill_diagonal(b, -b.sum(axis=1))
        bx = b @ pos
        if self.uniform:
            return bx / n
        return self.vplus @ bx


def smacof_step(layout: Layout, d: DistanceMatrix, weighting: str = "uniform") -> Layout:
    """One majorization update; stress never increases."""
    return layout.with_positions(_Majorizer(d, weighting).step(layout.positions))


def stress_layout(
    g: Graph,
    weighting: str = "uniform",
    tol: float = 1e-6,
    max_iters: int = 500,
    init: Layout | int = 0,
) -> tuple[Layout, int]:
    """Majorize until the relative stress change drops below ``tol``.

    ``init`` is a starting layout or a seed for a random one in a
    sqrt(n) x sqrt(n) frame.  Returns (layout, iterations taken).
    """
    d = bfs_apsp(g)
    if isinstance(init, Layout):
        start = init
    else:
        side = max(1.0, math.sqrt(g.n))
        start = init_random(g, int(init), (side, side))
    maj = _Majorizer(d, weighting)
    pos = start.copy_positions()
    cur = start.with_positions(pos)
    prev = stress(cur, d, weighting)
    it = 0
    while it < max_iters:
        pos = maj.step(pos)
        it += 1
        cur = start.with_positions(pos)
        s = stress(cur, d, weighting)
        done = s <= 1e-14 or (prev - s) <= tol * prev
        prev = s
        if done:
            break
    return cur, it


# ---------------------------------------------------------------------------
# pivot MDS
# ---------------------------------------------------------------------------

def choose_pivots(g: Graph, h: int, seed: int = 0) -> tuple[list[int], np.ndarray]:
    """Farthest-first pivots and their BFS rows (h x n).

    The traversal starts from the vertex farthest from a seeded random
    vertex, then repeatedly adds the vertex farthest from all chosen pivots
    (lowest id on ties).
    """
    if not 1 <= h <= g.n:
        raise ValueError("pivot count must lie in 1..n")
    rng = make_rng(seed)
    s = int(rng.integers(g.n))
    first = bfs_apsp(g, [s]).distances[0]
    if np.any(first == UNREACHABLE):
        raise ValueError("graph is disconnected; lay out components separately")
    pivots = [int(np.argmax(first))]
    rows = [bfs_apsp(g, pivots).distances[0]]
    near = rows[0].copy()
    while len(pivots) < h:
        p = int(np.argmax(near))
        pivots.append(p)
        row = bfs_apsp(g, [p]).distances[0]
        rows.append(row)
        np.minimum(near, row, out=near)
    return pivots, np.array(rows)


def _top_two(c: np.ndarray, rng: np.random.Generator, iters: int = 2000, tol: float = 1e-12):
    """Two dominant eigenpairs of C^T C by deflated power iteration."""
    m = c.T @ c
    vecs, vals = [], []
    for _ in range(2):
        v = rng.standard_normal(m.shape[0])
        for u in vecs:
            v -= (v @ u) * u
        v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(iters):
            w = m @ v
            for u in vecs:
                w -= (w @ u) * u
            nw = np.linalg.norm(w)
            if nw == 0.0:
                break
            w /= nw
            done = np.linalg.norm(w - v) < tol
            v, lam = w, nw
            if done:
                break
        vecs.append(v)
        vals.append(lam)
    return vecs, vals


def pivot_init(g: Graph, h: int | None = None, seed: int = 0) -> Layout:
    """Pivot MDS: classical scaling from an n x h block of squared distances."""
    n = g.n
    if h is None:
        h = min(n, 50)
    if h > n:
        raise ValueError("more pivots than vertices")
    if h < 3:
        raise ValueError("pivot MDS needs at least 3 pivots")
    _, rows = choose_pivots(g, h, seed)
    d2 = rows.T.astype(float) ** 2  # n x h
    c = -0.5 * (d2 - d2.mean(axis=0, keepdims=True) - d2.mean(axis=1, keepdims=True) + d2.mean())
    vecs, vals = _top_two(c, make_rng(int(seed) ^ _JITTER_STREAM))
    cols = []
    for v, mu in zip(vecs, vals):
        cols.append(c @ v / mu ** 0.25 if mu > 0 else np.zeros(n))
    return Layout(EUCLIDEAN, np.column_stack(cols))
