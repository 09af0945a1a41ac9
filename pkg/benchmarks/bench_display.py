"""Compare the numba and numpy backends of the displayed-tree kernel.

Usage:
    python3 benchmarks/bench_display.py [--repeat 5] [--max-k 15] [--json]

Each case is a built octopus (so the answer is known in advance: t(n, k)).
The kernel is timed on all 2^k choice masks; the first numba call is timed
separately because it includes compilation (cached on disk afterwards).
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from tck import _kernels
from tck.display import _Problem, count_displayed
from tck.octopus import build_octopus, t_bound


def octopus_text(k: int) -> str:
    """An octopus with k reticulations: one L3 if k is odd, the rest L2s, in a caterpillar backbone."""
    labels = (f"x{i}" for i in range(1, 4 * k + 2))
    parts = []
    if k % 2:
        parts.append("L3({},{},{},{})".format(*(next(labels) for _ in range(4))))
    for _ in range((k - 3 * (k % 2)) // 2):
        parts.append("L2({},{},{})".format(*(next(labels) for _ in range(3))))
    node = parts[0]
    for p in parts[1:]:
        node = f"({node},{p})"
    return node + ";"


def time_kernel(problem: _Problem, k: int, repeat: int) -> float:
    masks = np.arange(1 << k, dtype=np.uint64)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        _kernels.cluster_rows(masks, problem.child, problem.cond, problem.want, problem.leafbit, problem.width)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--max-k", type=int, default=15)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()

    rows = []
    compile_time = None
    if _kernels.HAVE_NUMBA:
        _kernels.set_backend("numba")
        tiny = _Problem(build_octopus("L2(a,b,c);"))
        t0 = time.perf_counter()
        time_kernel(tiny, 2, 1)
        compile_time = time.perf_counter() - t0

    for k in range(2, args.max_k + 1):
        net = build_octopus(octopus_text(k))
        problem = _Problem(net)
        row = {"n": net.n, "k": k, "masks": 1 << k}
        for name in ("numpy", "numba"):
            if name == "numba" and not _kernels.HAVE_NUMBA:
                continue
            _kernels.set_backend(name)
            row[name] = time_kernel(problem, k, args.repeat)
            assert count_displayed(net) == t_bound(net.n, k)
        if "numba" in row:
            row["speedup"] = row["numpy"] / row["numba"]
        rows.append(row)

    if args.json:
        print(json.dumps({"numba_first_call_s": compile_time, "cases": rows}, indent=2))
        return 0
    if compile_time is not None:
        print(f"numba first call (compile or cache load): {compile_time:.3f}s")
    print(f"{'n':>3} {'k':>3} {'masks':>7} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for r in rows:
        nb = f"{1000 * r['numba']:10.3f}" if "numba" in r else f"{'-':>10}"
        sp = f"{r['speedup']:8.1f}" if "speedup" in r else f"{'-':>8}"
        print(f"{r['n']:>3} {r['k']:>3} {r['masks']:>7} {1000 * r['numpy']:10.3f} {nb} {sp}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
