"""Barycentric (Tutte) drawings with a fixed convex outer face."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import kernels
from .graph import Graph
from .layout import EUCLIDEAN, Layout, min_vertex_separation  # noqa: F401  (re-exported)


class TutteError(ValueError):
    """The barycentric system is ill-posed for the given input."""


def _strictly_convex(poly: np.ndarray) -> bool:
    k = poly.shape[0]
    a = poly
    b = np.roll(poly, -1, axis=0)
    c = np.roll(poly, -2, axis=0)
    turn = (b[:, 0] - a[:, 0]) * (c[:, 1] - b[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - b[:, 0])
    if not (np.all(turn > 0) or np.all(turn < 0)):
        return False
    # a star polygon turns consistently too; its total winding exceeds one turn
    ang = np.arctan2(b[:, 1] - a[:, 1], b[:, 0] - a[:, 0])
    step = np.diff(np.append(ang, ang[0]))
    step = (step + math.pi) % (2 * math.pi) - math.pi
    return abs(abs(step.sum()) - 2 * math.pi) < 1e-6 and k >= 3


@dataclass(frozen=True, eq=False)
class FixedFaceSpec:
    """Outer-face cycle and the convex polygon its vertices are pinned to."""

    fixed_ids: tuple[int, ...]
    polygon: np.ndarray

    def __post_init__(self):
        ids = tuple(int(v) for v in self.fixed_ids)
        poly = np.array(self.polygon, dtype=float).reshape(-1, 2)
        if len(ids) < 3:
            raise TutteError("need at least three fixed vertices")
        if len(set(ids)) != len(ids):
            raise TutteError("fixed vertices must be distinct")
        if poly.shape[0] != len(ids):
            raise TutteError("one polygon corner per fixed vertex required")
        if not _strictly_convex(poly):
            raise TutteError("polygon must be strictly convex with corners in cyclic order")
        poly.setflags(write=False)
        object.__setattr__(self, "fixed_ids", ids)
        object.__setattr__(self, "polygon", poly)

    @classmethod
    def regular(cls, fixed_ids: Sequence[int], radius: float = 0.5) -> "FixedFaceSpec":
        """Corners of a regular polygon of the given circumradius, counter-clockwise."""
        k = len(fixed_ids)
        if k < 3:
            raise TutteError("need at least three fixed vertices")
        ang = math.pi / 2 + 2 * math.pi * np.arange(k) / k
        return cls(tuple(fixed_ids), radius * np.column_stack([np.cos(ang), np.sin(ang)]))


def _check(g: Graph, face: FixedFaceSpec) -> np.ndarray:
    for v in face.fixed_ids:
        if not 0 <= v < g.n:
            raise TutteError(f"fixed vertex {v} not in graph")
    fixed = np.zeros(g.n, dtype=bool)
    fixed[list(face.fixed_ids)] = True
    # every free vertex must reach the pinned face, otherwise the system is singular
    seen = fixed.copy()
    frontier = list(face.fixed_ids)
    while frontier:
        nxt = []
        for v in frontier:
            for u in g.neighbors(v):
                if not seen[u]:
                    seen[u] = True
                    nxt.append(u)
        frontier = nxt
    if not np.all(seen):
        bad = int(np.flatnonzero(~seen)[0])
        raise TutteError(f"vertex {bad} has no path to the fixed face")
    return fixed


def tutte_layout(
    g: Graph,
    face: FixedFaceSpec,
    mode: str = "iterative",
    tol: float = 1e-10,
    max_sweeps: int = 10**6,
    order: Sequence[int] | None = None,
) -> Layout:
    """Pin the face to its polygon and put every other vertex at its neighbours' barycentre.

    ``iterative`` runs Gauss-Seidel sweeps (over ``order``, default ascending
    ids) until no coordinate moves by ``tol``; ``direct`` solves the x and y
    linear systems with a sparse factorisation.
    """
    fixed = _check(g, face)
    free = np.flatnonzero(~fixed)
    pos = np.zeros((g.n, 2))
    pos[list(face.fixed_ids)] = face.polygon
    if free.size:
        pos[free] = face.polygon.mean(axis=0)

    if mode == "direct":
        if free.size:
            pos[free] = _direct_solve(g, fixed, free, pos)
    elif mode == "iterative":
        if order is None:
            order = free
        order = np.asarray(order, dtype=np.int64)
        if sorted(order.tolist()) != free.tolist():
            raise TutteError("sweep order must list every free vertex exactly once")
        x = np.ascontiguousarray(pos[:, 0])
        y = np.ascontiguousarray(pos[:, 1])
        indptr, indices = g.csr
        prev = math.inf
        for _ in range(max_sweeps):
            move = kernels.gauss_seidel(x, y, order, indptr, indices)
            # sweeps contract geometrically, so the distance still to go is
            # about move * rho / (1 - rho); demand that it is below tol too
            rho = min(move / prev, 0.999999) if prev > 0 else 0.0
            prev = move
            if move < tol and move * rho / (1.0 - rho) < tol:
                break
        else:
            warnings.warn("Gauss-Seidel sweep cap reached before convergence", RuntimeWarning, stacklevel=2)
        pos = np.column_stack([x, y])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Layout(EUCLIDEAN, pos)


def _direct_solve(g: Graph, fixed: np.ndarray, free: np.ndarray, pos: np.ndarray) -> np.ndarray:
    index = -np.ones(g.n, dtype=np.int64)
    index[free] = np.arange(free.size)
    rows, cols, vals = [], [], []
    rhs = np.zeros((free.size, 2))
    for i, v in enumerate(free.tolist()):
        rows.append(i)
        cols.append(i)
        vals.append(float(g.degree(v)))
        for u in g.neighbors(v):
            if fixed[u]:
                rhs[i] += pos[u]
            else:
                rows.append(i)
                cols.append(int(index[u]))
                vals.append(-1.0)
    a = sp.csc_matrix((vals, (rows, cols)), shape=(free.size, free.size))
    lu = spla.splu(a)
    return np.column_stack([lu.solve(rhs[:, 0]), lu.solve(rhs[:, 1])])
