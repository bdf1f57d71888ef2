"""Harel-Koren multiscale layout: k-centers abstraction plus localized KK."""

from __future__ import annotations

import math

import numpy as np

from ..distance import KkLog, KkModel, kk_pairs, kk_run
from ..graph import UNREACHABLE, DistanceMatrix, Graph, bfs_apsp
from ..layout import EUCLIDEAN, Layout, init_random, make_rng

# refuse all-pairs distance storage beyond this many vertices
DEFAULT_MAX_VERTICES = 20000


def _matrix(d) -> np.ndarray:
    if isinstance(d, DistanceMatrix):
        if not d.is_full:
            raise ValueError("a full distance matrix is required")
        d = d.distances
    d = np.asarray(d)
    if np.any(d == UNREACHABLE):
        raise ValueError("graph is disconnected; lay out components separately")
    return d


def k_centers(g: Graph, k: int, d: DistanceMatrix | np.ndarray, seed: int = 0, start: int | None = None) -> list[int]:
    """Farthest-first traversal: ``k`` centers in the order they were chosen.

    The first center is ``start`` or a seeded random vertex; ties go to the
    lowest id.
    """
    dist = _matrix(d)
    n = g.n
    if not 1 <= k <= n:
        raise ValueError("k must lie in 1..n")
    if start is None:
        start = int(make_rng(seed).integers(n))
    centers = [int(start)]
    near = dist[start].astype(np.int64)
    while len(centers) < k:
        u = int(np.argmax(near))
        centers.append(u)
        np.minimum(near, dist[u], out=near)
    return centers


def covering_radius(d: DistanceMatrix | np.ndarray, centers) -> int:
    """max over vertices of the distance to the nearest center."""
    dist = _matrix(d)
    return int(dist[list(centers)].min(axis=0).max())


def _model(dist: np.ndarray, L: float, K: float, epsilon: float) -> KkModel:
    dist = dist.astype(float)
    with np.errstate(divide="ignore"):
        k = np.where(dist > 0, K / (dist * dist), 0.0)
    return KkModel(dist, L * dist, k, L, K, epsilon)


def hk_local_layout(
    d: DistanceMatrix | np.ndarray,
    layout: Layout,
    radius: float,
    iterations: int,
    L: float = 1.0,
    K: float = 1.0,
    epsilon: float = 0.0,
    inner_cap: int = 1,
    log_capacity: int = 0,
) -> Layout | tuple[Layout, KkLog]:
    """``iterations * n`` max-Delta vertex updates on the radius-restricted KK energy.

    Only pairs at graph distance <= ``radius`` enter the energy, gradient
    and Hessian.  Each selection takes ``inner_cap`` damped Newton steps
    (one by default).
    """
    dist = _matrix(d)
    if dist.shape != (layout.n, layout.n):
        raise ValueError("distance matrix does not match the layout")
    model = _model(dist, L, K, epsilon)
    pos, log = kk_run(layout.positions, kk_pairs(model, radius), iterations * layout.n,
                      epsilon, inner_cap=inner_cap, log_capacity=log_capacity)
    out = layout.with_positions(pos)
    return (out, log) if log_capacity else out


def hk_levels(n: int, min_size: int = 10, ratio: int = 3) -> list[int]:
    """Center counts per level: min_size * ratio^j up to n, always ending at n."""
    if min_size < 1 or ratio < 2:
        raise ValueError("need min_size >= 1 and ratio >= 2")
    sizes = []
    k = min_size
    while k <= n:
        sizes.append(k)
        k *= ratio
    if not sizes or sizes[-1] < n:
        sizes.append(n)
    return sizes


def hk_layout(
    g: Graph,
    iterations: int = 4,
    ratio: int = 3,
    rad: float = 7.0,
    min_size: int = 10,
    seed: int = 0,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> Layout:
    """Harel-Koren: lay out growing center sets, refining only local neighbourhoods.

    Unit graph distance is drawn at unit length.  After each level every
    non-center moves to its nearest center plus a random offset of up to 5%
    of that level's radius.
    """
    n = g.n
    if n > max_vertices:
        raise MemoryError(
            f"{n} vertices exceed the all-pairs distance budget ({max_vertices}); use grip instead"
        )
    d = _matrix(bfs_apsp(g))
    side = max(1.0, math.sqrt(n))
    pos = init_random(g, seed, (side, side)).copy_positions()
    if n < 2:
        return Layout(EUCLIDEAN, pos)
    rng = make_rng(int(seed) ^ 0x5EED_0003)
    start = int(make_rng(seed).integers(n))
    order = k_centers(g, n, d, start=start)
    for k in hk_levels(n, min_size, ratio):
        centers = np.array(order[:k])
        sub = d[np.ix_(centers, centers)]
        if k > 1:
            masked = sub + np.where(np.eye(k, dtype=bool), np.iinfo(np.int32).max // 2, 0)
            radius = float(masked.min(axis=1).max()) * rad
        else:
            radius = 0.0
        local = hk_local_layout(sub, Layout(EUCLIDEAN, pos[centers]), radius, iterations)
        pos[centers] = local.positions
        if k < n:
            nearest = centers[np.argmin(d[centers], axis=0)]
            others = np.setdiff1d(np.arange(n), centers)
            jitter = rng.uniform(-1.0, 1.0, size=(others.size, 2)) * (0.05 * max(radius, 1.0))
            pos[others] = pos[nearest[others]] + jitter
    return Layout(EUCLIDEAN, pos)
