import itertools
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from forcelayout import families
from forcelayout.distance import kk_build, kk_energy, kk_pairs, kk_run
from forcelayout.graph import Graph, bfs_apsp
from forcelayout.layout import EUCLIDEAN, Layout, graph_normalized_stress, init_random
from forcelayout.multiscale import (
    build_hierarchy,
    covering_radius,
    grip_layout,
    hk_layout,
    hk_levels,
    hk_local_layout,
    k_centers,
    match_coarsen,
    mis_filtration,
    neighborhoods,
    walshaw_forces,
    walshaw_layout,
)
from forcelayout.multiscale.grip import level_count_bound
from forcelayout.multiscale.walshaw import LEVEL_SCALE, walshaw_level


def test_k_centers_path_example():
    g = families.path(5)
    d = bfs_apsp(g)
    assert k_centers(g, 2, d, start=0) == [0, 4]
    assert k_centers(g, 3, d, start=0) == [0, 4, 2]
    assert covering_radius(d, [0, 4, 2]) == 1


def test_k_centers_extremes():
    g = families.grid(3, 3)
    d = bfs_apsp(g)
    every = k_centers(g, 9, d, seed=4)
    assert sorted(every) == list(range(9)) and covering_radius(d, every) == 0
    one = k_centers(g, 1, d, seed=4)
    assert covering_radius(d, one) == d.distances[one[0]].max()
    with pytest.raises(ValueError):
        k_centers(g, 0, d)
    with pytest.raises(ValueError):
        k_centers(g, 10, d)


@pytest.mark.parametrize("trial", range(100))
def test_k_centers_within_twice_optimal(trial):
    rng = np.random.default_rng(trial)
    n = int(rng.integers(2, 11))
    g = families.random_connected(n, int(rng.integers(0, n)), rng)
    d = bfs_apsp(g)
    k = int(rng.integers(1, n + 1))
    best = min(covering_radius(d, c) for c in itertools.combinations(range(n), k))
    assert covering_radius(d, k_centers(g, k, d, seed=trial)) <= 2 * best


def test_hk_levels():
    assert hk_levels(100, 10, 3) == [10, 30, 90, 100]
    assert hk_levels(90, 10, 3) == [10, 30, 90]
    assert hk_levels(5, 10, 3) == [5]


@pytest.mark.parametrize("seed", range(3))
def test_unrestricted_local_layout_matches_kk(seed):
    g = families.cycle(8)
    d = bfs_apsp(g)
    start = init_random(g, seed)
    out, log = hk_local_layout(d, start, math.inf, 3, log_capacity=1000)
    model = kk_build(d, L0=float(d.distances.max()))
    pos, ref = kk_run(start.positions, kk_pairs(model), 3 * g.n, 0.0, inner_cap=1, log_capacity=1000)
    assert log.moves() == ref.moves()
    assert out.positions.tobytes() == pos.tobytes()


def test_local_layout_leaves_realized_path_alone():
    g = families.path(3)
    start = Layout(EUCLIDEAN, np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]))
    out = hk_local_layout(bfs_apsp(g), start, 7.0, 5, epsilon=1e-12)
    np.testing.assert_allclose(out.positions, start.positions, atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_restricted_energy_never_rises(seed):
    g = families.cycle(8)
    d = bfs_apsp(g)
    start = init_random(g, seed)
    _, log = hk_local_layout(d, start, 2.0, 4, log_capacity=1000)
    dist = d.distances.astype(float)
    k = np.where((dist > 0) & (dist <= 2.0), 1.0 / np.maximum(dist, 1) ** 2, 0.0)

    def energy(p):
        diff = p[:, None, :] - p[None, :, :]
        r = np.sqrt((diff ** 2).sum(-1))
        return 0.25 * float((k * (r - dist) ** 2).sum())

    pos = start.copy_positions()
    prev = energy(pos)
    for v, x, y in log.moves():
        pos[v] = (x, y)
        cur = energy(pos)
        assert cur <= prev + 1e-12
        prev = cur


def test_hk_small_and_deterministic():
    g = families.path(6)
    out = hk_layout(g, min_size=10)
    assert out.n == 6 and np.all(np.isfinite(out.positions))
    g = families.grid(8, 8)
    assert hk_layout(g, seed=2).positions.tobytes() == hk_layout(g, seed=2).positions.tobytes()


def test_hk_grid_quality():
    g = families.grid(12, 12)
    assert graph_normalized_stress(hk_layout(g, seed=0), g) <= 0.25


def test_hk_memory_guard():
    with pytest.raises(MemoryError):
        hk_layout(families.path(30), max_vertices=20)


def check_filtration(g, f):
    d = bfs_apsp(g).distances
    assert np.array_equal(f.levels[0], np.arange(g.n))
    for i in range(1, f.depth):
        prev, cur = set(f.levels[i - 1].tolist()), f.levels[i]
        assert set(cur.tolist()) < prev
        if cur.size > 1:
            sub = d[np.ix_(cur, cur)] + np.eye(cur.size, dtype=int) * 10**9
            assert sub.min() >= 2 ** i
        # maximal: every dropped vertex is within 2^i - 1 of a kept one
        for v in prev - set(cur.tolist()):
            assert d[v, cur].min() <= 2 ** i - 1
        assert np.all(f.level_of[cur] >= i)


@pytest.mark.parametrize("g", [families.path(8), families.complete(6), families.path(64),
                               families.grid(16, 16), families.cycle(64)], ids=["P8", "K6", "P64", "grid16", "C64"])
def test_filtration_invariants(g):
    f = mis_filtration(g, seed=1)
    check_filtration(g, f)
    diameter = int(bfs_apsp(g).distances.max())
    assert f.depth <= level_count_bound(diameter) + 1


@pytest.mark.parametrize("trial", range(20))
def test_filtration_random(trial):
    rng = np.random.default_rng(trial)
    g = families.random_connected(int(rng.integers(2, 40)), int(rng.integers(0, 20)), rng)
    check_filtration(g, mis_filtration(g, seed=trial))


def test_filtration_complete_and_disconnected():
    f = mis_filtration(families.complete(6))
    assert f.depth == 2 and f.levels[1].size == 1
    with pytest.raises(ValueError):
        mis_filtration(Graph(4, [(0, 1), (2, 3)]))


def test_neighborhoods_are_nearest():
    g = families.grid(6, 6)
    d = bfs_apsp(g).distances
    members = np.array([0, 5, 14, 21, 30, 35, 17])
    sources = np.arange(g.n)
    idx, dist = neighborhoods(g, members, sources, 3)
    for s in sources:
        row = [u for u in idx[s] if u >= 0]
        others = [u for u in members if u != s]
        assert len(row) == min(3, len(others))
        assert all(dist[s][j] == d[s, u] for j, u in enumerate(row))
        worst = max(d[s, u] for u in row)
        assert all(d[s, u] >= worst for u in others if u not in row)


def test_grip_deterministic():
    g = families.grid(10, 10)
    a, b = grip_layout(g, seed=3), grip_layout(g, seed=3)
    assert a.positions.tobytes() == b.positions.tobytes()
    assert graph_normalized_stress(a, g) <= 0.25


def test_match_coarsen_small():
    coarse, w, proj = match_coarsen(families.path(2), seed=0)
    assert coarse.n == 1 and w.tolist() == [2] and proj[0] == proj[1] == 0
    coarse, w, proj = match_coarsen(families.cycle(4), seed=0)
    assert coarse.n == 2 and w.tolist() == [2, 2] and coarse.m == 1


@pytest.mark.parametrize("trial", range(100))
def test_match_coarsen_conserves_weight(trial):
    rng = np.random.default_rng(trial)
    g = families.random_connected(int(rng.integers(2, 30)), int(rng.integers(0, 15)), rng)
    weight = rng.integers(1, 5, size=g.n)
    coarse, w, proj = match_coarsen(g, weight, seed=trial)
    assert w.sum() == weight.sum()
    assert sorted(set(proj.tolist())) == list(range(coarse.n))
    assert np.all(np.bincount(proj) <= 2)
    for u, v in g.edges:
        if proj[u] != proj[v]:
            assert coarse.has_edge(int(proj[u]), int(proj[v]))


def test_hierarchy_shape_and_json():
    h = build_hierarchy(families.grid(8, 8), seed=1)
    assert h.graphs[-1].n <= 2 or h.graphs[-1].n > 0.95 * h.graphs[-2].n
    for i, proj in enumerate(h.projection):
        assert sorted(set(proj.tolist())) == list(range(h.graphs[i + 1].n))
        assert h.vertex_weight[i + 1].sum() == 64
    assert '"kind": "matching"' in h.to_json()


def test_walshaw_force_examples():
    fg, fl = walshaw_forces(1.0, 1, 1.0, 1.0, 0.2)
    assert fg == pytest.approx(-0.2) and fl == pytest.approx(0.2)
    fg, fl = walshaw_forces(2.0, 2, 1.0, 1.0, 0.2)
    assert fg + fl == pytest.approx(0.5)
    with pytest.raises(ValueError):
        walshaw_forces(0.0, 1, 1.0, 1.0, 0.2)


def test_walshaw_p2_settles_at_root():
    k, C = 1.0, 0.2
    root = brentq(lambda x: sum(walshaw_forces(x, 1, 1.0, k, C)), 0.1, 10.0)
    pos, _ = walshaw_level(families.path(2), np.array([[0.0, 0.0], [0.3, 0.1]]), np.ones(2), k, C, tol=1e-6, max_iters=2000)
    assert np.linalg.norm(pos[0] - pos[1]) == pytest.approx(root, rel=1e-4)


def test_walshaw_layout_deterministic():
    g = families.grid(10, 10)
    a, b = walshaw_layout(g, seed=4), walshaw_layout(g, seed=4)
    assert a.positions.tobytes() == b.positions.tobytes()
    assert graph_normalized_stress(a, g) <= 0.25
    assert LEVEL_SCALE < 1
