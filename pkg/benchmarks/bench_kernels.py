"""Compiled versus pure-Python refinement kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json]

Each workload runs once per available backend with a fresh color table;
the reported figure is the best of ``--repeat`` wall-clock timings.
"""

from __future__ import annotations

import argparse
import json
import time
from functools import lru_cache
from itertools import combinations

import numpy as np

from wlhier.constructions import gen_base_3regular, gen_cfi_pair, random_graphs
from wlhier.kernels import available_backends
from wlhier.refinement import STABLE, ColorTable, initial_coloring, kfwl_joint, refine


@lru_cache(maxsize=None)
def _random_graph():
    g = random_graphs(1, 3000, seed=7, min_nodes=3000)[0]
    g.csr  # build adjacency outside the timed region
    return g


@lru_cache(maxsize=None)
def _cfi_pair():
    pair = gen_cfi_pair(gen_base_3regular(8))
    for g in pair:
        g.csr
    return pair


def refine_stable(backend: str) -> None:
    g = _random_graph()
    t = ColorTable(backend)
    refine(g, initial_coloring(g, t), STABLE)


def marking_runs(backend: str) -> None:
    g, _ = _cfi_pair()
    t = ColorTable(backend)
    base = initial_coloring(g, t).colors
    unmarked = np.array([t.intern(("mark", 0, int(c))) for c in base], dtype=np.int64)
    marked = np.array([t.intern(("mark", 1, int(c))) for c in base], dtype=np.int64)
    indptr, indices = g.csr
    for s in combinations(range(g.node_count), 2):
        cols = unmarked.copy()
        cols[list(s)] = marked[list(s)]
        t.kernel.refine(indptr, indices, cols, 6, False, None)


def two_fwl(backend: str) -> None:
    g1, g2 = _cfi_pair()
    kfwl_joint([g1, g2], 2, STABLE, ColorTable(backend))


WORKLOADS = {
    "1-WL to stability, random n=3000": refine_stable,
    "3160 two-markings, CFI(8), 6 rounds": marking_runs,
    "2-FWL to stability, CFI(8) pair": two_fwl,
}


def best_of(fn, backend: str, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    backends = available_backends()
    rows = []
    _random_graph(), _cfi_pair()
    for name, fn in WORKLOADS.items():
        row = {"workload": name}
        for b in backends:
            row[b] = best_of(fn, b, args.repeat)
        if "cython" in row and "python" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'workload':40s}" + "".join(f"{b:>10s}" for b in backends) + f"{'speedup':>10s}")
    for row in rows:
        line = f"{row['workload']:40s}" + "".join(f"{row[b]:9.3f}s" for b in backends)
        line += f"{row['speedup']:9.1f}x" if "speedup" in row else ""
        print(line)


if __name__ == "__main__":
    main()
