"""ctr command line: build, query, generate, bench, verify.

Exit codes: 0 ok, 1 data error (bad input, corrupt index, mismatch), 2 usage.
"""
import argparse
import os
import random
import sys
from dataclasses import replace

from .errors import CtrError
from .query import BuildConfig, CtrIndex


def _seed(args):
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("CTR_SEED", "0"))


def _add_build_flags(p):
    p.add_argument("--interval", type=int, default=None, help="minutes per time code (default 5)")
    p.add_argument("--mode", choices=("linear", "cyclic-day", "cyclic-week", "day-types"), default=None)
    p.add_argument("--origin", type=int, default=None, help="epoch second of code 0 (linear mode)")
    p.add_argument("--sigma-t", type=int, default=None, help="time alphabet size (linear mode)")
    p.add_argument("--day-types", type=int, default=None)
    p.add_argument("--day-type-table", default=None, help="JSON mapping dates/weekdays to day classes")
    p.add_argument("--config", default=None, help="key = value discretizer file")
    p.add_argument("--psi-sample", type=int, choices=(32, 128, 512), default=32)
    p.add_argument("--time-struct", choices=("wtht", "wm"), default="wtht")
    p.add_argument("--bitvector", choices=("plain", "rrr32", "rrr64", "rrr128"), default="plain")


def _build_config(args):
    from .trips import TimeDiscretizer

    d = TimeDiscretizer.from_config(args.config) if args.config else TimeDiscretizer()
    overrides = dict(interval_minutes=args.interval, mode=args.mode, origin=args.origin,
                     sigma=args.sigma_t, day_types=args.day_types)
    d = replace(d, **{k: v for k, v in overrides.items() if v is not None})
    if args.day_type_table:
        d = replace(d, day_type_table=TimeDiscretizer.from_options(day_type_table=args.day_type_table).day_type_table)
    return BuildConfig(interval_minutes=d.interval_minutes, mode=d.mode, origin=d.origin, sigma_t=d.sigma,
                       day_types=d.day_types, day_type_table=d.day_type_table, t_psi=args.psi_sample,
                       time_struct=args.time_struct, bitvector=args.bitvector)


def _read_input(path):
    from .trips import parse_trips, read_trips

    if path == "-":
        return parse_trips(sys.stdin)
    return read_trips(path)


def cmd_build(args):
    from .serialize import save_index

    idx = CtrIndex.build(_read_input(args.input), _build_config(args))
    size = save_index(idx, args.output)
    s = idx.stats
    print(f"z={s['z']} n={s['n']} sigma_s={s['sigma_s']} sigma_t={s['sigma_t']}")
    print(f"spatial_bits={s['spatial_bits']} spatial_ratio={s['spatial_ratio']:.4f}")
    print(f"temporal_bits={s['temporal_bits']} temporal_ratio={s['temporal_ratio']:.4f}")
    print(f"file_bytes={size}")
    return 0


def cmd_query(args):
    from .serialize import load_index

    idx = load_index(args.index)
    src = open(args.file, encoding="utf-8") if args.file else sys.stdin
    status = 0
    with src:
        for raw in src:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                print(idx.run(line))
            except CtrError as exc:
                print(f"error: {line}: {exc}", file=sys.stderr)
                status = 1
    sys.stdout.flush()
    return status


def cmd_generate(args):
    from .gen import NetworkModel, default_network, generate_trips
    from .trips import write_trips

    model = NetworkModel.load(args.network) if args.network else default_network()
    trips = generate_trips(model, args.count, args.dist, _seed(args))
    if args.output == "-":
        write_trips(trips, sys.stdout)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            write_trips(trips, fh)
    return 0


def cmd_bench(args):
    from .bench import GRID, run_bench, write_csv

    base = _build_config(args)
    if args.grid:
        configs = GRID
    else:
        configs = [dict(time_struct=args.time_struct, bitvector=args.bitvector, t_psi=args.psi_sample)]
    rows = run_bench(_read_input(args.input), configs, args.queries, args.topk_runs, _seed(args), base,
                     log=lambda m: print(m, file=sys.stderr))
    if args.output == "-":
        write_csv(rows, sys.stdout)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
    return 0


def cmd_verify(args):
    from .oracle import Oracle
    from .protocol import random_queries
    from .serialize import load_index
    from .trips import build_store

    raw = _read_input(args.input)
    if args.index:
        idx = load_index(args.index)
    else:
        idx = CtrIndex.build(raw, _build_config(args))
    store = build_store(raw, idx.config.discretizer(), idx.sigma_s)
    oracle = Oracle(store.trips, idx.sigma_s, idx.sigma_t)
    seed = _seed(args)
    lines = random_queries(random.Random(seed), store.trips, idx.sigma_s, idx.sigma_t, args.queries)
    bad = 0
    for line in lines:
        want = oracle.run(line)
        got = idx.run(line)
        if want != got:
            bad += 1
            print(f"MISMATCH {line!r}: expected {want!r}, got {got!r}")
            if bad == 1:
                print(f"reproduce: ctr verify --input {args.input} --queries {args.queries} --seed {seed}")
    print(f"{len(lines)} queries, {bad} mismatches: {'FAIL' if bad else 'PASS'}")
    return 1 if bad else 0


def make_parser():
    ap = argparse.ArgumentParser(prog="ctr", description="Compact trip representation: build and query.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="index a trip file")
    p.add_argument("--input", required=True, help="trip file ('-' for stdin)")
    p.add_argument("--output", required=True)
    _add_build_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer protocol lines against an index")
    p.add_argument("--index", required=True)
    p.add_argument("--file", default=None, help="query file (default stdin)")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("generate", help="write synthetic trips")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--dist", choices=("uniform", "skewed", "very-skewed"), default="uniform")
    p.add_argument("--network", default=None, help="network JSON (default: bundled 23-line model)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="space/time report as CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--queries", type=int, default=10000)
    p.add_argument("--topk-runs", type=int, default=100)
    p.add_argument("--grid", action="store_true", help="all structure x bitvector x t_psi combinations")
    p.add_argument("--seed", type=int, default=None)
    _add_build_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="cross-check the index against brute force")
    p.add_argument("--input", required=True)
    p.add_argument("--index", default=None, help="check this saved index instead of building one")
    p.add_argument("--queries", type=int, default=100, help="random queries per class")
    p.add_argument("--seed", type=int, default=None)
    _add_build_flags(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (CtrError, OSError, ValueError) as exc:
        print(f"ctr: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
