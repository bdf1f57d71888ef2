import math

import numpy as np
import pytest
from scipy.integrate import quad

from forcelayout import families
from forcelayout.layout import HYPERBOLIC, SPHERE, Layout
from forcelayout.riemannian import (
    AntipodalError,
    ManifoldPoint,
    TangentVector,
    disk_distance,
    disk_exp,
    disk_log,
    exp_map,
    geodesic_distance,
    log_map,
    riemannian_layout,
    sphere_distance,
    sphere_exp,
    sphere_log,
    tangent_frame,
)

NORTH = ManifoldPoint(SPHERE, [0, 0, 1])


def random_sphere(rng, m):
    p = rng.normal(size=(m, 3))
    return p / np.linalg.norm(p, axis=1, keepdims=True)


def random_disk(rng, m, max_radius=5.0):
    # uniform angle, hyperbolic radius up to max_radius
    ang = rng.uniform(0, 2 * math.pi, m)
    r = np.tanh(rng.uniform(0, max_radius, m) / 2)
    return np.column_stack([r * np.cos(ang), r * np.sin(ang)])


def to_hyperboloid(p):
    s = (p ** 2).sum(-1)
    return np.column_stack([(1 + s) / (1 - s), 2 * p[..., 0] / (1 - s), 2 * p[..., 1] / (1 - s)])


def minkowski(a, b):
    return -a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def test_distance_examples():
    eq = ManifoldPoint(SPHERE, [1, 0, 0])
    assert geodesic_distance(NORTH, eq) == pytest.approx(math.pi / 2)
    assert geodesic_distance(eq, eq) == 0.0
    origin = ManifoldPoint(HYPERBOLIC, [0, 0])
    for r in (0.1, 0.5, 0.9, 0.99):
        # length of the radius under the disk metric 2|dz| / (1 - |z|^2)
        integral, _ = quad(lambda t: 2.0 / (1.0 - t * t), 0.0, r, epsabs=1e-13, epsrel=1e-13)
        d = geodesic_distance(origin, ManifoldPoint(HYPERBOLIC, [r, 0]))
        assert d == pytest.approx(2 * math.atanh(r), rel=1e-12)
        assert d == pytest.approx(integral, rel=1e-10)
    with pytest.raises(ValueError):
        geodesic_distance(NORTH, origin)


def test_point_validation():
    with pytest.raises(ValueError):
        ManifoldPoint(SPHERE, [1, 1, 0])
    with pytest.raises(ValueError):
        ManifoldPoint(HYPERBOLIC, [1.0, 0])
    with pytest.raises(ValueError):
        TangentVector(NORTH, [np.nan, 0])


def test_frame_orthonormal():
    rng = np.random.default_rng(0)
    for x in random_sphere(rng, 100):
        e1, e2 = tangent_frame(x)
        m = np.array([e1, e2, x])
        np.testing.assert_allclose(m @ m.T, np.eye(3), atol=1e-14)
        np.testing.assert_allclose(np.cross(e1, e2), x, atol=1e-14)


def test_log_exp_examples():
    assert log_map(NORTH, NORTH).norm == 0.0
    assert np.array_equal(exp_map(TangentVector(NORTH, [0, 0])).coords, NORTH.coords)
    q = exp_map(TangentVector(NORTH, [math.pi / 2, 0]))
    assert abs(q.coords[2]) < 1e-15
    origin = ManifoldPoint(HYPERBOLIC, [0, 0])
    np.testing.assert_allclose(exp_map(TangentVector(origin, [2 * math.atanh(0.5), 0])).coords, [0.5, 0], atol=1e-15)
    with pytest.raises(AntipodalError):
        log_map(NORTH, ManifoldPoint(SPHERE, [0, 0, -1]))
    with pytest.raises(ValueError):
        exp_map(TangentVector(NORTH, [math.pi, 0]))
    with pytest.raises(ValueError):
        exp_map(TangentVector(origin, [80.0, 0]))


def test_equal_latitude_angles():
    lat = 0.4
    lons = np.array([0.3, 1.7, 4.0])
    pts = np.column_stack([np.cos(lat) * np.cos(lons), np.cos(lat) * np.sin(lons), np.full(3, np.sin(lat))])
    comps, anti = sphere_log(NORTH.coords, pts)
    assert not anti.any()
    ang = np.arctan2(comps[:, 1], comps[:, 0])
    for i in range(3):
        for j in range(i + 1, 3):
            got = (ang[j] - ang[i]) % (2 * math.pi)
            assert got == pytest.approx((lons[j] - lons[i]) % (2 * math.pi), abs=1e-12)


def angle(u, v):
    return math.atan2(abs(u[0] * v[1] - u[1] * v[0]), u @ v)


def test_sphere_constraints_on_1000_pairs():
    rng = np.random.default_rng(1)
    xs, ys, zs = random_sphere(rng, 1000), random_sphere(rng, 1000), random_sphere(rng, 1000)
    worst = 0.0
    for x, y, z in zip(xs, ys, zs):
        (u, w), anti = sphere_log(x, np.array([y, z]))
        assert not anti.any()
        worst = max(worst, np.abs(sphere_exp(x, u[None, :])[0] - y).max())
        assert math.hypot(*u) == pytest.approx(float(sphere_distance(x, y)), abs=1e-9)
        # true angle at x: between the tangent directions of the great circles in R^3
        ty, tz = y - (x @ y) * x, z - (x @ z) * x
        ref = math.atan2(np.linalg.norm(np.cross(ty, tz)), ty @ tz)
        assert angle(u, w) == pytest.approx(ref, abs=1e-9)
    assert worst < 1e-9


def test_hyperbolic_constraints_on_1000_pairs():
    rng = np.random.default_rng(2)
    xs, ys, zs = random_disk(rng, 1000), random_disk(rng, 1000), random_disk(rng, 1000)
    hx, hy, hz = to_hyperboloid(xs), to_hyperboloid(ys), to_hyperboloid(zs)
    for i in range(1000):
        x = xs[i]
        u, w = disk_log(x, np.array([ys[i], zs[i]]))
        back = disk_exp(x, u[None, :])[0]
        assert np.abs(back - ys[i]).max() < 1e-9
        ref_d = math.acosh(max(-minkowski(hx[i], hy[i]), 1.0))
        assert math.hypot(*u) == pytest.approx(ref_d, rel=1e-9, abs=1e-9)
        assert float(disk_distance(x, ys[i])[0]) == pytest.approx(ref_d, rel=1e-9, abs=1e-9)
        # initial directions on the hyperboloid: project y and z onto the tangent space at x
        ty = hy[i] + minkowski(hx[i], hy[i]) * hx[i]
        tz = hz[i] + minkowski(hx[i], hz[i]) * hx[i]
        c = minkowski(ty, tz) / math.sqrt(minkowski(ty, ty) * minkowski(tz, tz))
        ref = math.acos(min(1.0, max(-1.0, c)))
        assert angle(u, w) == pytest.approx(ref, abs=1e-9)


def test_hyperbolic_law_of_cosines():
    rng = np.random.default_rng(3)
    xs, ys, zs = random_disk(rng, 200, 3.0), random_disk(rng, 200, 3.0), random_disk(rng, 200, 3.0)
    for x, y, z in zip(xs, ys, zs):
        u, w = disk_log(x, np.array([y, z]))
        a, b = math.hypot(*u), math.hypot(*w)
        c = float(disk_distance(y, z)[0])
        if a < 0.1 or b < 0.1:
            continue
        want = math.cosh(a) * math.cosh(b) - math.sinh(a) * math.sinh(b) * math.cos(angle(u, w))
        assert math.cosh(c) == pytest.approx(want, rel=1e-9)


def edge_spread(layout, g):
    p = layout.positions
    e = np.array([sphere_distance(p[u], p[v]) for u, v in g.edges])
    return (e.max() - e.min()) / e.mean()


def test_sphere_c4_edges_even():
    # opposite vertices settle near antipodes where the lift is singular, so relaxation is slow
    g = families.cycle(4)
    spreads = [edge_spread(riemannian_layout(g, SPHERE, "fr", iterations=1000, seed=s), g) for s in range(10)]
    assert np.median(spreads) < 0.02


@pytest.mark.parametrize("space", [SPHERE, HYPERBOLIC])
@pytest.mark.parametrize("stepper", ["fr", "kk", "stress"])
def test_layout_deterministic(space, stepper):
    g = families.cycle(6)
    a = riemannian_layout(g, space, stepper, iterations=20, seed=4)
    b = riemannian_layout(g, space, stepper, iterations=20, seed=4)
    assert a.positions.tobytes() == b.positions.tobytes()
    assert a.space == space


@pytest.mark.parametrize("stepper", ["fr", "kk", "stress"])
def test_positions_stay_valid_each_iteration(stepper):
    g = families.grid(4, 4)
    for space in (SPHERE, HYPERBOLIC):
        cur = riemannian_layout(g, space, stepper, iterations=1, seed=1)
        for _ in range(30):
            p = cur.positions
            if space == SPHERE:
                assert np.abs(np.linalg.norm(p, axis=1) - 1).max() < 1e-9
            else:
                assert np.linalg.norm(p, axis=1).max() < 1 - 1e-9
            cur = riemannian_layout(g, space, stepper, iterations=1, seed=1, init=cur)


def test_kk_on_sphere_spreads_cycle():
    g = families.cycle(6)
    out = riemannian_layout(g, SPHERE, "kk", seed=0)
    p = out.positions
    e = np.array([sphere_distance(p[u], p[v]) for u, v in g.edges])
    assert e.std() / e.mean() < 0.05


def test_single_vertex_and_errors():
    g = families.path(1)
    start = Layout(SPHERE, np.array([[0.0, 0.0, 1.0]]))
    assert np.array_equal(riemannian_layout(g, SPHERE, init=start).positions, start.positions)
    with pytest.raises(ValueError):
        riemannian_layout(families.cycle(4), "euclidean-2d")
    with pytest.raises(ValueError):
        riemannian_layout(families.cycle(4), SPHERE, stepper="eades")
    from forcelayout.graph import Graph
    with pytest.raises(ValueError):
        riemannian_layout(Graph(4, [(0, 1), (2, 3)]), SPHERE)


def test_antipodal_start_is_recovered():
    g = families.path(2)
    start = Layout(SPHERE, np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]))
    out = riemannian_layout(g, SPHERE, "fr", iterations=50, init=start)
    assert np.all(np.isfinite(out.positions))
    assert float(sphere_distance(out.positions[0], out.positions[1])) < math.pi - 1e-3
