"""Compiled core vs pure-Python core: build time and per-query latency on one dataset.

    python3 benchmarks/bench_backends.py --trips 20000 --queries 2000
"""
import argparse
import time

from ctr import _backend
from ctr.bench import query_sets, time_classes
from ctr.gen import generate_trips
from ctr.query import BuildConfig, CtrIndex
from ctr.trips import build_store

CLASSES = ("starts_with_x", "ends_with_x", "from_x_to_y", "uses_x", "starts_t", "uses_t",
           "starts_with_x_t", "from_x_to_y_strong", "top_k_bin_10")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trips", type=int, default=20000)
    ap.add_argument("--queries", type=int, default=2000)
    ap.add_argument("--dist", default="skewed")
    ap.add_argument("--time-struct", choices=("wtht", "wm"), default="wtht")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    cfg = BuildConfig(mode="day-types", time_struct=args.time_struct)
    store = build_store(generate_trips(None, args.trips, args.dist, args.seed), cfg.discretizer())
    qs = query_sets(store, args.queries, seed=args.seed)
    print(f"{args.trips} trips, n={store.n}, sigma_t={store.sigma_t}, {args.queries} queries per class")

    results = {}
    for name in _backend.available():
        core = _backend.load(name)
        t0 = time.perf_counter()
        idx = CtrIndex.build(store, cfg, core=core)
        build = time.perf_counter() - t0
        lat = time_classes(idx, qs, topk_runs=5)
        results[name] = (build, lat)

    names = list(results)
    print(f"{'':26}" + "".join(f"{n:>14}" for n in names) + ("       speedup" if len(names) == 2 else ""))
    row = [results[n][0] for n in names]
    print(f"{'build (s)':26}" + "".join(f"{v:14.3f}" for v in row)
          + (f"{row[1] / row[0]:13.1f}x" if len(names) == 2 else ""))
    for c in CLASSES:
        row = [results[n][1][c] * 1e6 for n in names]
        print(f"{c + ' (us)':26}" + "".join(f"{v:14.2f}" for v in row)
              + (f"{row[1] / row[0]:13.1f}x" if len(names) == 2 else ""))


if __name__ == "__main__":
    main()
