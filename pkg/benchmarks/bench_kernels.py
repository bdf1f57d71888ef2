"""Time the compiled and pure-Python kernel backends on the same workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]
"""

import argparse
import timeit

import numpy as np

from forcelayout import families, kernels
from forcelayout.distance import kk_layout
from forcelayout.graph import bfs_apsp
from forcelayout.layout import count_crossings, init_random
from forcelayout.multiscale import grip_layout
from forcelayout.springs import bh_repulsion_all
from forcelayout.tutte import FixedFaceSpec, tutte_layout


def workloads(scale):
    n = max(50, int(1000 * scale))
    side = max(5, int(40 * np.sqrt(scale)))
    pts = np.random.default_rng(0).random((n, 2))
    coef = np.ones(n)
    grid = families.grid(side, side)
    small = families.grid(max(4, side // 3), max(4, side // 3))
    tri = families.nested_triangles(max(3, int(30 * scale)))
    tangled = init_random(grid, 1)
    return [
        (f"bfs all-pairs, grid {side}x{side}", lambda: bfs_apsp(grid)),
        (f"exact repulsion, {n} points", lambda: kernels.repulsion_all(pts, coef)),
        (f"grid repulsion, {n} points", lambda: kernels.repulsion_grid(pts, coef, 0.1)),
        (f"Barnes-Hut theta=0.5, {n} points", lambda: bh_repulsion_all(pts, 0.5, 1.0)),
        (f"kk layout, grid {small.n} vertices", lambda: kk_layout(small, seed=0)),
        (f"tutte Gauss-Seidel, {tri.n} vertices", lambda: tutte_layout(tri, FixedFaceSpec.regular((0, 1, 2)))),
        (f"edge crossings, {grid.m} edges", lambda: count_crossings(tangled, grid)),
        (f"grip layout, grid {side}x{side}", lambda: grip_layout(grid, seed=0)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0, help="workload size multiplier")
    args = ap.parse_args()
    names = kernels.available()
    rows = []
    for label, fn in workloads(args.scale):
        times = {}
        for name in names:
            with kernels.using(name):
                times[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        rows.append((label, times))
    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  " + "  ".join(f"{n:>10}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, times in rows:
        line = f"{label:<{width}}  " + "  ".join(f"{times[n] * 1000:>8.1f}ms" for n in names)
        if "cython" in times and "python" in times:
            line += f"  {times['python'] / times['cython']:>9.1f}x"
        print(line)
    if len(names) == 1:
        print("compiled backend not built; only the pure-Python kernels were timed")


if __name__ == "__main__":
    main()
