"""Layout containers, seeded initialisation, cooling schedules and quality metrics.

Random numbers come from numpy's PCG64 bit generator seeded with the
caller's 64-bit seed; its output stream and ``Generator.random`` doubles are
platform independent, which the byte-identical output contract relies on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from . import kernels
from .graph import UNREACHABLE, DistanceMatrix, Graph

EUCLIDEAN = "euclidean-2d"
SPHERE = "sphere"
HYPERBOLIC = "hyperbolic"
SPACES = (EUCLIDEAN, SPHERE, HYPERBOLIC)

# rows of the distance matrix handled per block in stress sums; fixed so the
# reduction order (and thus the result bits) never depends on input size
_BLOCK = 256


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True, eq=False)
class Layout:
    """Per-vertex positions in one of the supported spaces.

    Euclidean positions are (x, y); sphere positions are unit 3-vectors;
    hyperbolic positions are Poincare-disk points with norm < 1.
    """

    space: str
    positions: np.ndarray
    frame: tuple[float, float] | None = None

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"unknown space {self.space!r}")
        pos = np.array(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != (3 if self.space == SPHERE else 2):
            raise ValueError(f"bad position array shape {pos.shape} for {self.space}")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        if self.space == SPHERE and pos.size and np.max(np.abs(np.linalg.norm(pos, axis=1) - 1.0)) > 1e-9:
            raise ValueError("sphere positions must have unit norm")
        if self.space == HYPERBOLIC and pos.size and np.max(np.hypot(pos[:, 0], pos[:, 1])) >= 1.0:
            raise ValueError("hyperbolic positions must lie inside the unit disk")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def copy_positions(self) -> np.ndarray:
        return self.positions.copy()

    def with_positions(self, positions: np.ndarray) -> "Layout":
        return replace(self, positions=positions)

    def to_json(self) -> str:
        return layout_to_json(self)

    def __eq__(self, other):
        if not isinstance(other, Layout):
            return NotImplemented
        return (
            self.space == other.space
            and self.frame == other.frame
            and np.array_equal(self.positions, other.positions)
        )


def _num(x: float) -> str:
    return format(float(x), ".17g")


def layout_to_json(layout: Layout) -> str:
    """``{"space": ..., "positions": [[x, y], ...]}`` with 17 significant digits."""
    rows = ", ".join("[" + ", ".join(_num(c) for c in p) + "]" for p in layout.positions)
    return '{"space": ' + json.dumps(layout.space) + ', "positions": [' + rows + "]}\n"


def layout_from_json(text: str) -> Layout:
    doc = json.loads(text)
    pos = np.array(doc["positions"], dtype=float)
    if pos.size == 0:
        pos = pos.reshape(0, 3 if doc["space"] == SPHERE else 2)
    return Layout(doc["space"], pos)


def init_random(g: Graph, seed: int, frame: tuple[float, float] = (1.0, 1.0)) -> Layout:
    """Uniform i.i.d. positions over the origin-centred W x L frame."""
    w, l = frame
    if w <= 0 or l <= 0:
        raise ValueError("frame dimensions must be positive")
    rng = make_rng(seed)
    pos = (rng.random((g.n, 2)) - 0.5) * np.array([w, l])
    return Layout(EUCLIDEAN, pos, (float(w), float(l)))


def separate_coincident(pos: np.ndarray, rng: np.random.Generator, scale: float) -> int:
    """Nudge all but the lowest-id member of each group of identical points.

    Works in place on an (n, d) array and returns how many points moved.
    """
    if pos.shape[0] < 2:
        return 0
    _, inverse, counts = np.unique(pos, axis=0, return_inverse=True, return_counts=True)
    if np.all(counts == 1):
        return 0
    inverse = inverse.ravel()
    first = {}
    moved = 0
    for v in range(pos.shape[0]):
        grp = int(inverse[v])
        if counts[grp] == 1:
            continue
        if grp not in first:
            first[grp] = v
            continue
        pos[v] += rng.normal(scale=scale, size=pos.shape[1])
        moved += 1
    return moved


# ---------------------------------------------------------------------------
# cooling
# ---------------------------------------------------------------------------

INVERSE_LINEAR = "inverse-linear"
GEOMETRIC = "geometric"


@dataclass(frozen=True)
class Temperature:
    value: float
    schedule: str
    step: int
    t0: float
    total: int
    factor: float = 0.9

    @classmethod
    def start(cls, t0: float, total: int, schedule: str = INVERSE_LINEAR, factor: float = 0.9) -> "Temperature":
        if schedule not in (INVERSE_LINEAR, GEOMETRIC):
            raise ValueError(f"unknown schedule {schedule!r}")
        if t0 < 0:
            raise ValueError("initial temperature must be non-negative")
        return cls(float(t0), schedule, 0, float(t0), int(total), float(factor))


def cool(t: Temperature) -> Temperature:
    """Advance one step: t0*(1 - step/total) or t0*factor**step."""
    if t.step >= t.total:
        raise ValueError("temperature schedule exhausted")
    step = t.step + 1
    if t.schedule == INVERSE_LINEAR:
        value = t.t0 * (1.0 - step / t.total)
    else:
        value = t.t0 * t.factor**step
    return replace(t, value=max(value, 0.0), step=step)


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def pair_distances(space: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances between each row of ``a`` and each row of ``b`` in ``space``."""
    if space == EUCLIDEAN:
        dx = a[:, None, 0] - b[None, :, 0]
        dy = a[:, None, 1] - b[None, :, 1]
        return np.sqrt(dx * dx + dy * dy)
    if space == SPHERE:
        dots = np.clip(a @ b.T, -1.0, 1.0)
        cross = np.linalg.norm(np.cross(a[:, None, :], b[None, :, :]), axis=2)
        return np.arctan2(cross, dots)
    if space == HYPERBOLIC:
        za = a[:, 0] + 1j * a[:, 1]
        zb = b[:, 0] + 1j * b[:, 1]
        num = np.abs(zb[None, :] - za[:, None])
        den = np.abs(1.0 - np.conj(za)[:, None] * zb[None, :])
        return 2.0 * np.arctanh(np.minimum(num / den, 1.0 - 1e-16))
    raise ValueError(f"unknown space {space!r}")


def _weights(d: np.ndarray, weighting: str) -> np.ndarray:
    if weighting == "uniform":
        return np.ones_like(d)
    if weighting == "inverse-square":
        with np.errstate(divide="ignore"):
            return np.where(d > 0, 1.0 / (d * d), 0.0)
    raise ValueError(f"unknown weighting {weighting!r}")


def _row_blocks(d: DistanceMatrix) -> Iterator[tuple[int, np.ndarray]]:
    for lo in range(0, d.n, _BLOCK):
        yield lo, d.distances[lo:lo + _BLOCK]


def _graph_row_blocks(g: Graph) -> Iterator[tuple[int, np.ndarray]]:
    indptr, indices = g.csr
    for lo in range(0, g.n, _BLOCK):
        src = np.arange(lo, min(lo + _BLOCK, g.n), dtype=np.int64)
        yield lo, kernels.bfs_rows(indptr, indices, src, -1)


def _stress_sums(layout: Layout, blocks, weighting: str):
    pos = layout.positions
    total = 0.0
    a_sum = b_sum = c_sum = 0.0
    for lo, rows in blocks:
        if np.any(rows == UNREACHABLE):
            raise ValueError("stress undefined across components: unreachable pair")
        d = rows.astype(float)
        geo = pair_distances(layout.space, pos[lo:lo + rows.shape[0]], pos)
        mask = np.arange(pos.shape[0])[None, :] > np.arange(lo, lo + rows.shape[0])[:, None]
        w = _weights(d, weighting)
        diff = geo - d
        total += float(np.sum((0.5 * w * diff * diff)[mask]))
        a_sum += float(np.sum((w * geo * geo)[mask]))
        b_sum += float(np.sum((w * geo * d)[mask]))
        c_sum += float(np.sum((w * d * d)[mask]))
    return total, a_sum, b_sum, c_sum


def _check_full(layout: Layout, d: DistanceMatrix):
    if not d.is_full:
        raise ValueError("stress needs a full distance matrix")
    if d.n != layout.n:
        raise ValueError("layout and distance matrix sizes differ")


def stress(layout: Layout, d: DistanceMatrix, weighting: str = "uniform") -> float:
    """Sum over i<j of 0.5 * w_ij * (|p_i - p_j| - d_ij)^2.

    ``w_ij`` is 1 (uniform) or d_ij^-2 (inverse-square).  Non-Euclidean
    layouts use geodesic distances.
    """
    _check_full(layout, d)
    return _stress_sums(layout, _row_blocks(d), weighting)[0]


def graph_stress(layout: Layout, g: Graph, weighting: str = "uniform") -> float:
    """``stress`` with distance rows computed on the fly (no n x n matrix held)."""
    return _stress_sums(layout, _graph_row_blocks(g), weighting)[0]


def _normalized(sums) -> float:
    _, a, b, c = sums
    if c == 0.0:
        return 0.0
    if a == 0.0:
        return 1.0
    return max(0.0, 1.0 - (b * b) / (a * c))


def normalized_stress(layout: Layout, d: DistanceMatrix, weighting: str = "uniform") -> float:
    """Scale-free stress: min over s of sum w(s|p_i - p_j| - d)^2 / sum w d^2."""
    _check_full(layout, d)
    return _normalized(_stress_sums(layout, _row_blocks(d), weighting))


def graph_normalized_stress(layout: Layout, g: Graph, weighting: str = "uniform") -> float:
    return _normalized(_stress_sums(layout, _graph_row_blocks(g), weighting))


def count_crossings(layout: Layout, g: Graph) -> int:
    """Edge pairs without a shared endpoint whose straight segments properly cross.

    Touching and collinear overlaps are not counted.
    """
    if layout.space != EUCLIDEAN:
        raise ValueError("crossings are only defined for Euclidean layouts")
    if g.m < 2:
        return 0
    e = g.edge_array
    x = np.ascontiguousarray(layout.positions[:, 0])
    y = np.ascontiguousarray(layout.positions[:, 1])
    return int(kernels.crossings(x, y, np.ascontiguousarray(e[:, 0]), np.ascontiguousarray(e[:, 1])))


def edge_lengths(layout: Layout, g: Graph) -> np.ndarray:
    e = g.edge_array
    if layout.space == EUCLIDEAN:
        d = layout.positions[e[:, 0]] - layout.positions[e[:, 1]]
        return np.sqrt(np.sum(d * d, axis=1))
    pos = layout.positions
    return np.array([pair_distances(layout.space, pos[u:u + 1], pos[v:v + 1])[0, 0] for u, v in e])


def edge_length_stats(layout: Layout, g: Graph) -> tuple[float, float]:
    """(mean, std/mean) of drawn edge lengths; geodesic off the plane."""
    if g.m == 0:
        raise ValueError("edge length statistics need at least one edge")
    lengths = edge_lengths(layout, g)
    mean = float(np.mean(lengths))
    if mean == 0.0:
        return 0.0, 0.0
    return mean, float(np.std(lengths) / mean)


def min_vertex_separation(layout: Layout) -> float:
    """Smallest pairwise distance between vertices."""
    n = layout.n
    if n < 2:
        raise ValueError("need at least two vertices")
    best = math.inf
    pos = layout.positions
    for lo in range(0, n, _BLOCK):
        dist = pair_distances(layout.space, pos[lo:lo + _BLOCK], pos)
        idx = np.arange(lo, min(lo + _BLOCK, n))
        dist[np.arange(len(idx)), idx] = np.inf
        best = min(best, float(dist.min()))
    return best


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@dataclass
class QualityReport:
    stress: float
    crossings: int | None
    edge_length_mean: float | None
    edge_length_rel_std: float | None
    runtime_ms: int
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        doc = {
            "stress": self.stress,
            "crossings": self.crossings,
            "edge_length_mean": self.edge_length_mean,
            "edge_length_rel_std": self.edge_length_rel_std,
            "runtime_ms": self.runtime_ms,
        }
        doc.update(self.extras)
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def quality_report(layout: Layout, g: Graph, runtime_ms: int, weighting: str = "uniform", **extras) -> QualityReport:
    """Metrics for a connected graph's layout."""
    crossings = count_crossings(layout, g) if layout.space == EUCLIDEAN else None
    if g.m:
        mean, rel = edge_length_stats(layout, g)
    else:
        mean = rel = None
    return QualityReport(graph_stress(layout, g, weighting), crossings, mean, rel, int(runtime_ms), dict(extras))
