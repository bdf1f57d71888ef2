"""Command-line front end: read a graph, lay it out, write JSON/SVG/report."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import distance, families, springs, tutte
from .graph import Graph, GraphParseError, GraphWarning, connected_components, load_graph
from .layout import (
    EUCLIDEAN,
    HYPERBOLIC,
    SPHERE,
    Layout,
    QualityReport,
    count_crossings,
    edge_length_stats,
    graph_stress,
    init_random,
    layout_to_json,
    quality_report,
)
from .multiscale import grip, hk, walshaw
from .render import render_svg
from .riemannian import init_manifold, riemannian_layout

ALGORITHMS = ("eades", "fr", "fr-grid", "fr-bh", "tutte", "kk", "stress", "pivot-stress", "hk", "grip", "walshaw", "riemann")
SPACE_TAGS = {"plane": EUCLIDEAN, "sphere": SPHERE, "hyperbolic": HYPERBOLIC}

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 2, 3, 4


class PreconditionError(ValueError):
    """The chosen algorithm cannot run on this input/configuration."""


@dataclass
class RunConfig:
    algorithm: str
    input: str | None = None
    family: str | None = None
    seed: int = 0
    out_json: str | None = None
    out_svg: str | None = None
    out_report: str | None = None
    space: str = "plane"
    params: dict = field(default_factory=dict)
    view: tuple[float, float] = (0.0, 0.0)
    dump_hierarchy: str | None = None


def _opt(params, key, default):
    value = params.get(key)
    return default if value is None else value


def _euclid_frame(n: int) -> tuple[float, float]:
    side = max(1.0, math.sqrt(n))
    return side, side


def _layout_component(g: Graph, cfg: RunConfig) -> tuple[Layout, Layout, dict]:
    """(layout, random start of the same seed, extra report fields) for a connected graph."""
    p = cfg.params
    a = cfg.algorithm
    seed = cfg.seed
    extras = {}
    if a == "riemann":
        space = SPACE_TAGS[cfg.space]
        if space == EUCLIDEAN:
            raise PreconditionError("riemann needs --space sphere or --space hyperbolic")
        start = Layout(space, init_manifold(space, g.n, seed))
        out = riemannian_layout(g, space, _opt(p, "stepper", "fr"), _opt(p, "iterations", 200), seed,
                                _opt(p, "C", 1.0), p.get("t0"), init=start)
        return out, start, extras
    if cfg.space != "plane":
        raise PreconditionError(f"{a} only lays out in the plane; use --algorithm riemann")
    if a == "eades":
        ep = springs.EadesParams(M=_opt(p, "iterations", 100))
        frame = _euclid_frame(g.n)
        start = init_random(g, seed, frame)
        return springs.eades_layout(g, ep, seed, start, frame), start, extras
    if a in ("fr", "fr-grid", "fr-bh"):
        fp = springs.FrParams(C=_opt(p, "C", 1.0), iterations=_opt(p, "iterations", 50), t0=p.get("t0"))
        start = init_random(g, seed, (fp.W, fp.L))
        if a == "fr":
            out = springs.fr_layout(g, fp, seed, start)
        elif a == "fr-grid":
            out = springs.fr_grid_layout(g, fp, p.get("cutoff"), seed, start)
        else:
            out = springs.fr_bh_layout(g, fp, _opt(p, "theta", 0.5), seed, start)
        return out, start, extras
    if a == "tutte":
        fixed = p.get("fixed")
        if not fixed:
            raise PreconditionError("tutte needs --fixed with the outer face cycle")
        labels = {s: i for i, s in enumerate(g.labels)}
        try:
            ids = [labels[t] if t in labels else int(t) for t in fixed]
        except ValueError:
            raise PreconditionError(f"unknown vertex in --fixed: {fixed}") from None
        face = tutte.FixedFaceSpec.regular(ids)
        start = init_random(g, seed)
        return tutte.tutte_layout(g, face, tol=_opt(p, "tol", 1e-10)), start, extras
    if a == "kk":
        L0 = _opt(p, "L0", 1.0)
        start = init_random(g, seed, (L0, L0))
        out = distance.kk_layout(g, L0, _opt(p, "K", 1.0), _opt(p, "epsilon", 1e-4), seed, p.get("iterations"), start)
        return out, start, extras
    if a in ("stress", "pivot-stress"):
        rand = init_random(g, seed, _euclid_frame(g.n))
        start = rand
        if a == "pivot-stress" and g.n >= 3:
            h = min(g.n, _opt(p, "pivots", 50))
            start = distance.pivot_init(g, max(h, 3), seed)
        out, its = distance.stress_layout(g, _opt(p, "weighting", "uniform"), _opt(p, "tol", 1e-6),
                                          _opt(p, "iterations", 500), start)
        extras["iterations"] = its
        return out, start, extras
    if a == "hk":
        start = init_random(g, seed, _euclid_frame(g.n))
        return hk.hk_layout(g, iterations=_opt(p, "iterations", 4), seed=seed), start, extras
    if a == "grip":
        start = init_random(g, seed, _euclid_frame(g.n))
        f = grip.mis_filtration(g, seed)
        extras["_hierarchy"] = f.to_json()
        return grip.grip_layout(g, _opt(p, "iterations", 30), seed, filtration=f), start, extras
    if a == "walshaw":
        start = init_random(g, seed, _euclid_frame(g.n))
        if g.n < 2:
            return Layout(EUCLIDEAN, np.zeros((g.n, 2))), start, extras
        h = walshaw.build_hierarchy(g, seed)
        extras["_hierarchy"] = h.to_json()
        out = walshaw.walshaw_layout(g, _opt(p, "C", 0.2), p.get("t0"), _opt(p, "tol", 0.01), seed,
                                     max_iters=_opt(p, "iterations", 200), hierarchy=h)
        return out, start, extras
    raise PreconditionError(f"unknown algorithm {a!r}")


def _tile(parts: list[tuple[list[int], Layout]], n: int) -> Layout:
    """Place component layouts left to right, separated by one frame width."""
    pos = np.zeros((n, 2))
    cursor = 0.0
    for comp, lay in parts:
        p = lay.positions
        lo, hi = p.min(axis=0), p.max(axis=0)
        width = float(hi[0] - lo[0])
        gap = lay.frame[0] if lay.frame else max(width, float(hi[1] - lo[1]), 1.0)
        pos[comp] = p - np.array([lo[0] - cursor, (lo[1] + hi[1]) / 2])
        cursor += width + gap
    return Layout(EUCLIDEAN, pos)


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute one configuration; returns the process exit status."""
    stdout = stdout or sys.stdout
    try:
        if cfg.algorithm not in ALGORITHMS:
            raise GraphParseError(f"unknown algorithm {cfg.algorithm!r}")
        if cfg.space not in SPACE_TAGS:
            raise GraphParseError(f"unknown space {cfg.space!r}")
        if (cfg.input is None) == (cfg.family is None):
            raise GraphParseError("give exactly one of --input or --family")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", GraphWarning)
            if cfg.input is not None:
                g = load_graph(cfg.input)
            else:
                try:
                    g = families.from_spec(cfg.family)
                except ValueError as exc:
                    raise GraphParseError(str(exc)) from None
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    except (GraphParseError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    try:
        t = time.perf_counter()
        comps = connected_components(g)
        parts, starts, extras = [], [], {}
        if len(comps) > 1 and (cfg.algorithm in ("tutte", "riemann")):
            raise PreconditionError(f"{cfg.algorithm} needs a connected graph")
        for comp in comps:
            sub = g.subgraph(comp) if len(comps) > 1 else g
            lay, start, ex = _layout_component(sub, cfg)
            parts.append((comp, lay))
            starts.append((sub, start))
            for key, val in ex.items():
                extras.setdefault(key, []).append(val)
        layout = parts[0][1] if len(parts) == 1 else _tile(parts, g.n)
        runtime_ms = int(round((time.perf_counter() - t) * 1000))
    except (PreconditionError, tutte.TutteError, MemoryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    try:
        weighting = cfg.params.get("weighting") or "uniform"
        text = layout_to_json(layout)
        if cfg.out_json:
            with open(cfg.out_json, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        if cfg.out_svg:
            with open(cfg.out_svg, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(render_svg(layout, g, view=cfg.view))
        hierarchy = extras.pop("_hierarchy", None)
        if cfg.dump_hierarchy and hierarchy:
            with open(cfg.dump_hierarchy, "w", encoding="utf-8", newline="\n") as fh:
                if len(hierarchy) == 1:
                    fh.write(hierarchy[0])
                else:
                    fh.write(json.dumps({"components": [json.loads(h) for h in hierarchy]}) + "\n")
        if cfg.out_report:
            report = _report(g, comps, parts, starts, layout, runtime_ms, weighting, extras, cfg)
            with open(cfg.out_report, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(report)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def _report(g, comps, parts, starts, layout, runtime_ms, weighting, extras, cfg) -> str:
    if len(comps) == 1:
        rep = quality_report(layout, g, runtime_ms, weighting)
    else:
        # tiling keeps distances inside each component, so per-component stress is summed
        rep = QualityReport(
            sum(graph_stress(lay, g.subgraph(comp), weighting) for comp, lay in parts),
            count_crossings(layout, g),
            *(edge_length_stats(layout, g) if g.m else (None, None)),
            runtime_ms,
        )
    doc = rep.to_dict()
    doc["init_stress"] = sum(graph_stress(start, sub, weighting) for sub, start in starts)
    doc.update({
        "algorithm": cfg.algorithm,
        "seed": cfg.seed,
        "space": layout.space,
        "n": g.n,
        "m": g.m,
        "components": len(comps),
        "weighting": weighting,
    })
    for key, vals in extras.items():
        doc[key] = vals[0] if len(vals) == 1 else vals
    return json.dumps(doc, indent=2) + "\n"


def _view(text: str) -> tuple[float, float]:
    try:
        lon, lat = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected lon,lat in degrees") from None
    return lon, lat


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="forcelayout", description="Force-directed graph layout.")
    ap.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    src = ap.add_argument_group("input")
    src.add_argument("--input", help="edge list, or JSON graph when the name ends in .json")
    src.add_argument("--family", help="built-in graph such as grid:10x10, cycle:16, nested-triangles:5")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-json", help="layout JSON path (default: stdout)")
    ap.add_argument("--out-svg")
    ap.add_argument("--out-report")
    ap.add_argument("--dump-hierarchy", help="write the grip/walshaw level structure as JSON")
    ap.add_argument("--space", default="plane", choices=tuple(SPACE_TAGS))
    ap.add_argument("--view", type=_view, default=(0.0, 0.0), help="sphere viewpoint lon,lat in degrees")
    ap.add_argument("--iterations", type=int)
    ap.add_argument("--fixed", help="comma-separated outer face cycle for tutte")
    ap.add_argument("--theta", type=float, help="Barnes-Hut opening ratio (default 0.5)")
    ap.add_argument("--cutoff", type=float, help="fr-grid repulsion radius (default 2k)")
    ap.add_argument("--pivots", type=int, help="pivot count for pivot-stress (default min(n, 50))")
    ap.add_argument("--weighting", choices=("uniform", "inverse-square"))
    ap.add_argument("--stepper", choices=("fr", "kk", "stress"), help="tangent-plane rule for riemann")
    ap.add_argument("--L0", type=float)
    ap.add_argument("--K", type=float)
    ap.add_argument("--epsilon", type=float)
    ap.add_argument("--C", type=float)
    ap.add_argument("--t0", type=float)
    ap.add_argument("--tol", type=float)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    params = {
        "iterations": ns.iterations,
        "fixed": [t.strip() for t in ns.fixed.split(",") if t.strip()] if ns.fixed else None,
        "theta": ns.theta,
        "cutoff": ns.cutoff,
        "pivots": ns.pivots,
        "weighting": ns.weighting,
        "stepper": ns.stepper,
        "L0": ns.L0,
        "K": ns.K,
        "epsilon": ns.epsilon,
        "C": ns.C,
        "t0": ns.t0,
        "tol": ns.tol,
    }
    cfg = RunConfig(ns.algorithm, ns.input, ns.family, ns.seed, ns.out_json, ns.out_svg, ns.out_report,
                    ns.space, params, ns.view, ns.dump_hierarchy)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
