"""Layouts on the sphere and the hyperbolic plane through tangent-plane lifts.

For every vertex the whole drawing is mapped into the tangent plane at that
vertex with the log map (which keeps distances from, and angles at, the base
point), a Euclidean single-vertex rule moves the vertex there, and the exp
map carries the result back.

Sphere points are unit 3-vectors.  Hyperbolic points live in the Poincare
disk; the Mobius translation taking the base point to the origin is
conformal with a positive real derivative, so it identifies tangent
directions at the base with plain plane directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, bfs_apsp, is_connected
from .layout import HYPERBOLIC, SPHERE, Layout, Temperature, cool, make_rng
from .springs import fr_place

MANIFOLDS = (SPHERE, HYPERBOLIC)
DISK_MARGIN = 1e-12
# hyperbolic distance from the disk centre beyond which layouts are pulled back
MAX_HYPERBOLIC_RADIUS = 18.0


class AntipodalError(ValueError):
    """The log map is undefined for antipodal sphere points."""


@dataclass(frozen=True, eq=False)
class ManifoldPoint:
    space: str
    coords: np.ndarray

    def __post_init__(self):
        if self.space not in MANIFOLDS:
            raise ValueError(f"unknown manifold {self.space!r}")
        c = np.array(self.coords, dtype=float).ravel()
        if self.space == SPHERE:
            if c.shape != (3,) or abs(np.linalg.norm(c) - 1.0) > 1e-9:
                raise ValueError("sphere points are unit 3-vectors")
        else:
            if c.shape != (2,) or math.hypot(c[0], c[1]) >= 1.0 - DISK_MARGIN:
                raise ValueError("hyperbolic points lie strictly inside the unit disk")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Components in the orthonormal frame at ``base`` (see ``tangent_frame``)."""

    base: ManifoldPoint
    components: np.ndarray

    def __post_init__(self):
        c = np.array(self.components, dtype=float).ravel()
        if c.shape != (2,) or not np.all(np.isfinite(c)):
            raise ValueError("tangent components must be two finite numbers")
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    @property
    def norm(self) -> float:
        return math.hypot(*self.components)


# ---------------------------------------------------------------------------
# sphere
# ---------------------------------------------------------------------------

def tangent_frame(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis (e1, e2) of the tangent plane at unit vector ``x``; e1 x e2 = x."""
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(x)))] = 1.0
    e1 = axis - (axis @ x) * x
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(x, e1)


def sphere_distance(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.arctan2(np.linalg.norm(np.cross(x, y), axis=-1), np.sum(x * y, axis=-1))


def sphere_log(x: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Tangent components of ``ys`` (m x 3) at ``x`` and a mask of antipodal rows."""
    ys = np.atleast_2d(ys)
    e1, e2 = tangent_frame(x)
    dots = ys @ x
    perp = ys - dots[:, None] * x
    s = np.linalg.norm(perp, axis=1)
    theta = np.arctan2(s, dots)
    anti = (s < 1e-15) & (dots < 0)
    scale = np.divide(theta, s, out=np.zeros_like(s), where=s > 0)
    comps = np.column_stack([perp @ e1, perp @ e2]) * scale[:, None]
    comps[anti] = 0.0
    return comps, anti


def sphere_exp(x: np.ndarray, comps: np.ndarray) -> np.ndarray:
    comps = np.atleast_2d(comps)
    e1, e2 = tangent_frame(x)
    r = np.hypot(comps[:, 0], comps[:, 1])
    if np.any(r >= math.pi):
        raise ValueError("sphere tangent vectors must be shorter than pi")
    direction = np.divide(comps, r[:, None], out=np.zeros_like(comps), where=r[:, None] > 0)
    out = np.cos(r)[:, None] * x + np.sin(r)[:, None] * (direction[:, :1] * e1 + direction[:, 1:] * e2)
    return out / np.linalg.norm(out, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# Poincare disk
# ---------------------------------------------------------------------------

def _c(p: np.ndarray) -> np.ndarray:
    p = np.atleast_2d(p)
    return p[:, 0] + 1j * p[:, 1]


def disk_distance(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    zx, zy = _c(x), _c(y)
    ratio = np.abs(zy - zx) / np.abs(1.0 - np.conj(zx) * zy)
    return 2.0 * np.arctanh(np.minimum(ratio, 1.0))


def disk_log(x: np.ndarray, ys: np.ndarray) -> np.ndarray:
    zx = complex(x[0], x[1])
    w = (_c(ys) - zx) / (1.0 - np.conj(zx) * _c(ys))
    a = np.abs(w)
    scale = np.divide(2.0 * np.arctanh(np.minimum(a, 1.0)), a, out=np.zeros_like(a), where=a > 0)
    t = w * scale
    return np.column_stack([t.real, t.imag])


def disk_exp(x: np.ndarray, comps: np.ndarray) -> np.ndarray:
    zx = complex(x[0], x[1])
    t = _c(comps)
    r = np.abs(t)
    u = np.divide(np.tanh(r / 2.0) * t, r, out=np.zeros_like(t), where=r > 0)
    z = (zx + u) / (1.0 + np.conj(zx) * u)
    return np.column_stack([z.real, z.imag])


def clamp_disk(p: np.ndarray, max_radius: float = MAX_HYPERBOLIC_RADIUS) -> np.ndarray:
    """Pull points farther than ``max_radius`` from the centre back onto that circle."""
    p = np.atleast_2d(p).copy()
    r = np.hypot(p[:, 0], p[:, 1])
    limit = math.tanh(max_radius / 2.0)
    far = r > limit
    p[far] *= (limit / r[far])[:, None]
    return p


# ---------------------------------------------------------------------------
# point-level API
# ---------------------------------------------------------------------------

def _same_space(a: ManifoldPoint, b: ManifoldPoint):
    if a.space != b.space:
        raise ValueError("points live in different spaces")


def geodesic_distance(a: ManifoldPoint, b: ManifoldPoint) -> float:
    _same_space(a, b)
    if a.space == SPHERE:
        return float(sphere_distance(a.coords, b.coords))
    return float(disk_distance(a.coords, b.coords)[0])


def log_map(x: ManifoldPoint, y: ManifoldPoint) -> TangentVector:
    _same_space(x, y)
    if x.space == SPHERE:
        comps, anti = sphere_log(x.coords, y.coords[None, :])
        if anti[0]:
            raise AntipodalError("log map undefined at the antipode")
        return TangentVector(x, comps[0])
    return TangentVector(x, disk_log(x.coords, y.coords[None, :])[0])


def exp_map(v: TangentVector) -> ManifoldPoint:
    x = v.base
    if x.space == SPHERE:
        return ManifoldPoint(SPHERE, sphere_exp(x.coords, v.components[None, :])[0])
    p = disk_exp(x.coords, v.components[None, :])[0]
    if math.hypot(p[0], p[1]) >= 1.0 - DISK_MARGIN:
        raise ValueError("tangent vector too long: image reaches the disk boundary")
    return ManifoldPoint(HYPERBOLIC, p)


# ---------------------------------------------------------------------------
# layout
# ---------------------------------------------------------------------------

def init_manifold(space: str, n: int, seed: int) -> np.ndarray:
    """Seeded random start: uniform on the sphere, or uniform in the disk of radius 1/2."""
    rng = make_rng(seed)
    if space == SPHERE:
        p = rng.standard_normal((n, 3))
        return p / np.linalg.norm(p, axis=1, keepdims=True)
    if space == HYPERBOLIC:
        r = 0.5 * np.sqrt(rng.random(n))
        a = 2 * math.pi * rng.random(n)
        return np.column_stack([r * np.cos(a), r * np.sin(a)])
    raise ValueError(f"unknown manifold {space!r}")


def _kk_place(rel, lv, kv, t):
    """Damped Newton step on the single-vertex KK energy, vertex at the origin."""
    ok = np.hypot(rel[:, 0], rel[:, 1]) > 0
    rel, lv, kv = rel[ok], lv[ok], kv[ok]

    def energy(p):
        r = np.hypot(p[0] - rel[:, 0], p[1] - rel[:, 1])
        return 0.5 * np.sum(kv * (r - lv) ** 2)

    dx, dy = -rel[:, 0], -rel[:, 1]
    r = np.hypot(dx, dy)
    r3 = r ** 3
    g = np.array([np.sum(kv * (dx - lv * dx / r)), np.sum(kv * (dy - lv * dy / r))])
    hxx = np.sum(kv * (1 - lv * dy * dy / r3))
    hyy = np.sum(kv * (1 - lv * dx * dx / r3))
    hxy = np.sum(kv * lv * dx * dy / r3)
    det = hxx * hyy - hxy * hxy
    step = np.linalg.solve([[hxx, hxy], [hxy, hyy]], -g) if det > 1e-12 else -g / max(np.sum(kv), 1e-300)
    e0 = energy(np.zeros(2))
    for _ in range(31):
        if energy(step) <= e0:
            break
        step = step * 0.5
    else:
        return np.zeros(2)
    length = math.hypot(*step)
    return step if length <= t else step * (t / length)


def _stress_place(rel, lv, wv, t):
    """Local majorization: the weighted mean of where each pair wants the vertex."""
    r = np.hypot(rel[:, 0], rel[:, 1])
    ok = r > 0
    target = rel[ok] - rel[ok] * (lv[ok] / r[ok])[:, None]
    w = wv[ok]
    if w.sum() == 0:
        return np.zeros(2)
    step = (w[:, None] * target).sum(axis=0) / w.sum()
    length = math.hypot(*step)
    return step if length <= t else step * (t / length)


def riemannian_layout(
    g: Graph,
    space: str = SPHERE,
    stepper: str = "fr",
    iterations: int = 200,
    seed: int = 0,
    C: float = 1.0,
    t0: float | None = None,
    init: Layout | None = None,
) -> Layout:
    """Sequential per-vertex sweeps: lift to the tangent plane, step, map back.

    ``stepper`` is ``fr`` (Fruchterman-Reingold), ``kk`` (Kamada-Kawai Newton
    step) or ``stress`` (local majorization).  The natural length is
    C*sqrt(4 pi / n) on the sphere and C on the hyperbolic plane; graph
    distance d is drawn at length d times that for ``kk`` and ``stress``.  The
    temperature starts at one tenth of the square root of the (sphere) area
    or of n times k^2 (hyperbolic) and decays inverse-linearly.
    """
    if space not in MANIFOLDS:
        raise ValueError(f"unknown manifold {space!r}")
    if stepper not in ("fr", "kk", "stress"):
        raise ValueError(f"unknown stepper {stepper!r}")
    if not is_connected(g):
        raise ValueError("graph is disconnected; lay out components separately")
    n = g.n
    pos = init.copy_positions() if init is not None else init_manifold(space, n, seed)
    if n < 2:
        return Layout(space, pos)
    if space == SPHERE:
        k = C * math.sqrt(4 * math.pi / n)
        width = math.sqrt(4 * math.pi)
    else:
        k = C
        width = k * math.sqrt(n)
    temp = Temperature.start(width / 10.0 if t0 is None else t0, iterations)
    if stepper != "fr":
        dist = bfs_apsp(g).distances.astype(float)
        ideal = k * dist
        if space == SPHERE:
            # geodesics on the unit sphere are at most pi long
            ideal = np.minimum(ideal, math.pi * (1 - 1e-6))
        with np.errstate(divide="ignore"):
            weight = np.where(dist > 0, 1.0 / (dist * dist), 0.0)
    nbrs = [np.array(g.neighbors(v), dtype=np.int64) for v in range(n)]
    rng = make_rng(int(seed) ^ 0x5EED_0006)
    others = [np.delete(np.arange(n), v) for v in range(n)]
    for _ in range(iterations):
        for v in range(n):
            x = pos[v]
            rel = _lift(space, x, pos, rng)
            if rel is None:
                x = _nudge(space, x, rng, 1e-6)
                pos[v] = x
                rel = _lift(space, x, pos, rng)
                if rel is None:
                    continue
            if stepper == "fr":
                step = fr_place(rel, nbrs[v], k, temp.value)
            elif stepper == "kk":
                o = others[v]
                step = _kk_place(rel[o], ideal[v, o], weight[v, o], temp.value)
            else:
                o = others[v]
                step = _stress_place(rel[o], ideal[v, o], weight[v, o], temp.value)
            if space == SPHERE:
                length = math.hypot(*step)
                if length >= math.pi:
                    step = step * ((math.pi - 1e-6) / length)
                pos[v] = sphere_exp(x, step[None, :])[0]
            else:
                pos[v] = clamp_disk(disk_exp(x, step[None, :]))[0]
        temp = cool(temp)
    return Layout(space, pos)


def _lift(space, x, pos, rng):
    if space == SPHERE:
        rel, anti = sphere_log(x, pos)
        return None if np.any(anti) else rel
    return disk_log(x, pos)


def _nudge(space, x, rng, size):
    step = rng.normal(scale=size, size=(1, 2))
    if space == SPHERE:
        return sphere_exp(x, step)[0]
    return clamp_disk(disk_exp(x, step))[0]
