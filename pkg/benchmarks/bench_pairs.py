#!/usr/bin/env python3
"""Benchmark the compiled pair kernel against the numpy fallback.

Runs the wrapped-neighbor sweep at the scales the verification harness uses
and prints per-call timings plus the speedup.  Both backends return
bit-identical edge lists; this script asserts that too.
"""

import math
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from torusgg.gilbert import pair_backend, wrapped_edges
from torusgg.torus import WindowSpec, sample_poisson_cloud

CASES = [
    # (d, lam, rho description) -> window tuned like the harness regimes
    ("criterion-5 regime", 4, 0.25, 21.27458),
    ("criterion-4 regime", 6, 0.35, 12.68258),
    ("criterion-6 d=7 point", 7, 0.25, 13.98899),
    ("dense low-d", 2, 0.45, 40.0),
]


def time_backend(points, box, backend, repeats):
    best = math.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = wrapped_edges(points, box, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def canon(edges):
    i, j, d = edges
    order = np.lexsort((j, i))
    return i[order], j[order], d[order]


def main():
    if pair_backend() != "compiled":
        print("compiled kernel not available; nothing to compare")
        return 1
    print(f"{'case':<24}{'n':>7}{'edges':>8}{'numpy':>12}{'compiled':>12}{'speedup':>9}")
    for name, d, lam, b in CASES:
        w = WindowSpec(d=d, b=b, lam=lam)
        cloud = sample_poisson_cloud(w, 12345)
        reps = 3 if len(cloud) > 4000 else 10
        t_py, out_py = time_backend(cloud.points, w.b, "numpy", reps)
        t_c, out_c = time_backend(cloud.points, w.b, "compiled", reps)
        a, b_, dist_a = canon(out_py)
        x, y, dist_b = canon(out_c)
        assert np.array_equal(a, x) and np.array_equal(b_, y)
        assert np.array_equal(dist_a, dist_b)
        print(f"{name:<24}{len(cloud):>7}{len(a):>8}"
              f"{t_py * 1e3:>10.2f}ms{t_c * 1e3:>10.2f}ms{t_py / t_c:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
