#!/usr/bin/env python3
"""Compare the compiled search kernel against the pure-Python fallback.

Workloads:
  petersen-no5   exhaust the whole k=5 space on the reference Petersen
                 signature (264712 nodes, the costliest single search)
  petersen-yes6  first nowhere-zero 6-flow on the same graph
  corpus-k3      integer- and modulo-3 sweep over every switching class
                 with <= 4 vertices and <= 6 edges (1623 graphs)

Both backends must visit identical node counts; this script asserts that
while timing them.  Run:  python3 benchmarks/bench_solvers.py [--repeat N]
"""

import argparse
import time

from signedflow.corpus import enumerate_signed_graphs, signed_petersen
from signedflow.errors import PreconditionError
from signedflow.solve import find_nz_k_flow, find_nz_zk_flow, solver_backend_name


def timed(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_petersen(backend, k, repeat):
    g = signed_petersen()
    stats = {}

    def run():
        return find_nz_k_flow(g, k, stats=stats, backend=backend)

    secs, fa = timed(run, repeat)
    return secs, stats["nodes"], fa is not None


def bench_corpus(backend):
    graphs = list(enumerate_signed_graphs(4, 6))
    nodes = 0
    t0 = time.perf_counter()
    for g in graphs:
        for finder in (find_nz_k_flow, find_nz_zk_flow):
            stats = {}
            finder(g, 3, stats=stats, backend=backend)
            nodes += stats["nodes"]
    return time.perf_counter() - t0, nodes, len(graphs)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3,
                    help="best-of-N for the single-graph workloads")
    args = ap.parse_args()

    backends = []
    for name in ("compiled", "python"):
        try:
            solver_backend_name(name)
            backends.append(name)
        except PreconditionError:
            print(f"note: backend {name!r} unavailable, skipping")
    if not backends:
        print("no backend available")
        return 1

    rows = []
    reference_nodes = {}
    for backend in backends:
        secs, nodes, found = bench_petersen(backend, 5, args.repeat)
        assert not found
        rows.append(("petersen-no5", backend, secs, nodes))
        reference_nodes.setdefault("petersen-no5", nodes)
        assert nodes == reference_nodes["petersen-no5"], "node counts diverged"

        secs, nodes, found = bench_petersen(backend, 6, args.repeat)
        assert found
        rows.append(("petersen-yes6", backend, secs, nodes))
        reference_nodes.setdefault("petersen-yes6", nodes)
        assert nodes == reference_nodes["petersen-yes6"], "node counts diverged"

        secs, nodes, count = bench_corpus(backend)
        rows.append((f"corpus-k3 ({count} graphs)", backend, secs, nodes))
        reference_nodes.setdefault("corpus-k3", nodes)
        assert nodes == reference_nodes["corpus-k3"], "node counts diverged"

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'backend':8}  {'seconds':>9}  {'nodes':>9}")
    for workload, backend, secs, nodes in rows:
        print(f"{workload:<{width}}  {backend:8}  {secs:9.3f}  {nodes:9d}")

    if len(backends) == 2:
        by = {(w, b): s for w, b, s, _ in rows}
        for workload in dict.fromkeys(w for w, _, _, _ in rows):
            ratio = by[(workload, "python")] / by[(workload, "compiled")]
            print(f"speedup {workload}: {ratio:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
