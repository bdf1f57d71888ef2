"""Deterministic SVG drawings of layouts."""

from __future__ import annotations

import math

import numpy as np

from .graph import Graph
from .layout import EUCLIDEAN, HYPERBOLIC, SPHERE, Layout

CANVAS = 1000.0
MARGIN = 0.05


def _f(x: float) -> str:
    return format(float(x), ".3f")


def orthographic(points: np.ndarray, view: tuple[float, float] = (0.0, 0.0)) -> tuple[np.ndarray, np.ndarray]:
    """Project unit vectors as seen from longitude/latitude ``view`` (degrees).

    Returns plane coordinates and a mask of points on the visible hemisphere.
    """
    lon, lat = (math.radians(v) for v in view)
    eye = np.array([math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat)])
    east = np.array([-math.sin(lon), math.cos(lon), 0.0])
    north = np.cross(eye, east)
    return np.column_stack([points @ east, points @ north]), points @ eye >= 0


def render_svg(
    layout: Layout,
    g: Graph,
    radius: float = 4.0,
    stroke: str = "#444444",
    fill: str = "#1f77b4",
    view: tuple[float, float] = (0.0, 0.0),
) -> str:
    """1000 x 1000 SVG: edges (sorted pairs) as lines, then vertices (by id) as circles.

    Planar layouts are scaled uniformly into the canvas minus a 5% margin.
    The hyperbolic disk and the sphere's projection disk are drawn as a
    boundary circle and scaled so that circle fills the same box.  Vertices
    on the far side of the sphere are drawn hollow.
    """
    if layout.n != g.n:
        raise ValueError("layout and graph sizes differ")
    inner = CANVAS * (1 - 2 * MARGIN)
    hidden = np.zeros(layout.n, dtype=bool)
    boundary = None
    if layout.space == EUCLIDEAN:
        pts = layout.positions
        if pts.shape[0]:
            lo, hi = pts.min(axis=0), pts.max(axis=0)
            span = float(max(hi - lo))
            scale = inner / span if span > 0 else 1.0
            centre = (lo + hi) / 2
        else:
            scale, centre = 1.0, np.zeros(2)
    else:
        if layout.space == SPHERE:
            pts, visible = orthographic(layout.positions, view)
            hidden = ~visible
        else:
            pts = layout.positions
        scale, centre = inner / 2.0, np.zeros(2)
        boundary = inner / 2.0
    xy = np.empty_like(pts, dtype=float)
    if pts.shape[0]:
        xy[:, 0] = CANVAS / 2 + (pts[:, 0] - centre[0]) * scale
        # SVG y grows downwards
        xy[:, 1] = CANVAS / 2 - (pts[:, 1] - centre[1]) * scale
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(CANVAS)}" height="{int(CANVAS)}" '
        f'viewBox="0 0 {int(CANVAS)} {int(CANVAS)}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if boundary is not None:
        out.append(f'<circle class="boundary" cx="{_f(CANVAS / 2)}" cy="{_f(CANVAS / 2)}" r="{_f(boundary)}" '
                   f'fill="none" stroke="#999999"/>')
    for u, v in g.edges:
        out.append(f'<line x1="{_f(xy[u, 0])}" y1="{_f(xy[u, 1])}" x2="{_f(xy[v, 0])}" y2="{_f(xy[v, 1])}" '
                   f'stroke="{stroke}" stroke-width="1"/>')
    for v in range(layout.n):
        paint = "white" if hidden[v] else fill
        out.append(f'<circle class="v" cx="{_f(xy[v, 0])}" cy="{_f(xy[v, 1])}" r="{_f(radius)}" '
                   f'fill="{paint}" stroke="{fill}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
