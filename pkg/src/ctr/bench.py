"""Space/time benchmark harness: build each configuration, time each query class."""
import csv
import random
import time

from .errors import ConfigurationUnsupported
from .protocol import random_window
from .query import BuildConfig, CtrIndex
from .trips import build_store

WARMUP = 100
GRID = [
    dict(time_struct=ts, bitvector=bv, t_psi=tp)
    for ts in ("wtht", "wm")
    for bv in ("plain", "rrr32", "rrr64", "rrr128")
    for tp in (32, 128, 512)
]
COLUMNS = [
    "time_struct", "bitvector", "t_psi", "interval_minutes", "mode", "n", "z", "sigma_s", "sigma_t",
    "spatial_bits", "spatial_baseline_bits", "spatial_ratio",
    "temporal_bits", "temporal_payload_bits", "temporal_baseline_bits", "temporal_ratio",
]


def query_sets(store, count=10000, seed=0, interval_minutes=5):
    """Per-class argument lists; windows span 5 minutes to 2 hours."""
    rng = random.Random(seed)
    max_w = max(1, 120 // interval_minutes)
    nodes = lambda: [rng.randint(1, store.sigma_s) for _ in range(count)]
    wins = lambda: [random_window(rng, store.sigma_t, max_w) for _ in range(count)]
    pairs = []
    for _ in range(count):
        path = store.trips[rng.randrange(store.z)][0]
        pairs.append((path[0], path[-1]))
    return dict(nodes=nodes(), nodes2=nodes(), pairs=pairs, windows=wins(), windows2=wins())


def mean_latency(fn, args, warmup=WARMUP):
    """Mean CPU seconds per call, after `warmup` untimed calls."""
    for a in args[:warmup]:
        fn(*a)
    timed = args[warmup:] or args
    t0 = time.process_time()
    for a in timed:
        fn(*a)
    return (time.process_time() - t0) / len(timed)


def time_classes(idx, qs, topk_runs=100, warmup=WARMUP):
    W, N, P = qs["windows"], qs["nodes"], qs["pairs"]
    W2 = qs["windows2"]
    out = {
        "starts_with_x": mean_latency(idx.starts_with_x, [(x,) for x in N], warmup),
        "ends_with_x": mean_latency(idx.ends_with_x, [(x,) for x in qs["nodes2"]], warmup),
        "from_x_to_y": mean_latency(idx.from_x_to_y, P, warmup),
        "uses_x": mean_latency(idx.uses_x, [(x,) for x in N], warmup),
        "starts_t": mean_latency(idx.starts_t, [(w,) for w in W], warmup),
        "uses_t": mean_latency(idx.uses_t, [(w,) for w in W2], warmup),
        "starts_with_x_t": mean_latency(idx.starts_with_x, list(zip(N, W)), warmup),
        "uses_x_t": mean_latency(idx.uses_x, list(zip(qs["nodes2"], W2)), warmup),
        "from_x_to_y_strong": mean_latency(idx.from_x_to_y_strong, [(x, y, w) for (x, y), w in zip(P, W)], warmup),
        "from_x_to_y_weak": mean_latency(idx.from_x_to_y_weak, [(x, y, w) for (x, y), w in zip(P, W2)], warmup),
    }
    for k in (10, 100):
        for strat in ("seq", "bin"):
            args = [(k, strat)] * topk_runs
            out[f"top_k_{strat}_{k}"] = mean_latency(idx.top_k, args, warmup=0)
            out[f"top_k_starts_{strat}_{k}"] = mean_latency(idx.top_k_starts, args, warmup=0)
    return out


def run_bench(trips, configurations=None, count=10000, topk_runs=100, seed=0, base=None, log=None):
    """One report row per configuration; `trips` are RawTrips or a TripStore."""
    base = base or BuildConfig()
    configurations = configurations or [dict(time_struct="wtht", bitvector="plain", t_psi=32)]
    store = trips if hasattr(trips, "Icode") else build_store(trips, base.discretizer(), base.sigma_s)
    qs = query_sets(store, count, seed, base.interval_minutes)
    rows = []
    for conf in configurations:
        unknown = set(conf) - {"time_struct", "bitvector", "t_psi"}
        if unknown:
            raise ConfigurationUnsupported(f"unknown configuration keys {sorted(unknown)}")
        cfg = BuildConfig(**{**base.__dict__, **conf}).validate()
        idx = CtrIndex.build(store, cfg)
        row = dict(time_struct=cfg.time_struct, bitvector=cfg.bitvector, t_psi=cfg.t_psi,
                   interval_minutes=cfg.interval_minutes, mode=cfg.mode)
        row.update({k: v for k, v in idx.stats.items() if k in COLUMNS})
        lat = time_classes(idx, qs, topk_runs)
        row.update({f"{k}_us": v * 1e6 for k, v in lat.items()})
        rows.append(row)
        if log:
            log(f"{cfg.time_struct}/{cfg.bitvector}/t_psi={cfg.t_psi}: spatial {row['spatial_ratio']:.3f}, "
                f"temporal {row['temporal_ratio']:.3f}")
    return rows


def write_csv(rows, fh):
    if not rows:
        return
    fields = list(rows[0])
    w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (f"{v:.6g}" if isinstance(v, float) else v) for k, v in r.items()})
