"""Acceptance criteria, each at its stated tolerance and time budget.

Every test prints one ACCEPT line; conftest repeats them in the terminal summary.
Run alone with `pytest tests/test_acceptance.py -v`.
"""
import random
import time

import numpy as np
import pytest

from ctr import _backend
from ctr.bench import GRID, query_sets, time_classes
from ctr.bitvector import FLAVORS
from ctr.errors import ChecksumError, IndexFormatError
from ctr.gen import generate_trips
from ctr.hutucker import build_hu_tucker, entropy, optimal_alphabetic_cost
from ctr.oracle import Oracle
from ctr.protocol import random_queries
from ctr.query import BuildConfig, CtrIndex
from ctr.serialize import dumps, loads
from ctr.trips import build_store, read_trips
from ctr.wavelet import build_temporal

from _util import SMALL_SEQ, example1_path, random_dataset

RESULTS = []
BIG_Z = 100_000


def report(num, title, ok, detail, elapsed, budget=None):
    over = budget is not None and elapsed > budget
    status = "PASS" if ok and not over else "FAIL"
    limit = f" (limit {budget:g} s)" if budget is not None else ""
    line = f"ACCEPT {num} {status}  {title}: {detail}; {elapsed:.2f} s{limit}"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert not over, line


# -- shared 100k datasets ----------------------------------------------------------

BIG_CONFIG = BuildConfig(interval_minutes=5, mode="day-types")


@pytest.fixture(scope="module")
def skewed_store():
    t0 = time.perf_counter()
    trips = generate_trips(None, BIG_Z, "skewed", seed=11)
    store = build_store(trips, BIG_CONFIG.discretizer())
    return store, time.perf_counter() - t0


@pytest.fixture(scope="module")
def skewed_index(skewed_store):
    store, _ = skewed_store
    return CtrIndex.build(store, BIG_CONFIG)


# -- 1 ----------------------------------------------------------------------------

def test_c1_worked_example():
    t0 = time.perf_counter()
    want_psi = {8: 10, 10: 14, 14: 2, 2: 8, 5: 12, 12: 16}
    bad = []
    for name in _backend.available():
        idx = CtrIndex.build(read_trips(example1_path()), BuildConfig(interval_minutes=5),
                             core=_backend.load(name), keep_store=True)
        sp = idx.spatial
        for i, v in want_psi.items():
            if sp.psi_at(i) != v:
                bad.append(f"{name}: psi[{i}]={sp.psi_at(i)}")
        for i, r, node in ((12, 3, 2), (16, 4, 3)):
            got_r = sp.D.rank1(i)
            if got_r != r or int(sp.V[got_r - 1]) != node:
                bad.append(f"{name}: rank1(D,{i})={got_r}")
        for i, v in ((4, 10), (15, 8)):
            if idx.icode_psi[i - 1] != v or idx.temporal.access(i) != v:
                bad.append(f"{name}: icode_psi[{i}]")
    report(1, "worked example", not bad, "all cited values match" if not bad else ", ".join(bad),
           time.perf_counter() - t0, 1.0)


# -- 2 ----------------------------------------------------------------------------

def test_c2_wavelet_examples():
    t0 = time.perf_counter()
    bad = []
    flavors = [f for f in FLAVORS if f != "sparse"]
    for name in _backend.available():
        core = _backend.load(name)
        for kind in ("wm", "wtht"):
            for flavor in flavors:
                w = build_temporal(SMALL_SEQ, 8, kind, flavor, core)
                if w.access(8) != 3 or w.count(5, 10, 3, 7) != 4:
                    bad.append(f"{name}/{kind}/{flavor}")
    report(2, "wavelet examples", not bad,
           f"access(8)=3, count(5,10,3,7)=4 on {2 * len(flavors)} structures per core" if not bad else ", ".join(bad),
           time.perf_counter() - t0, 1.0)


# -- 3 ----------------------------------------------------------------------------

def criterion3_suite(i):
    """Dataset i of the oracle suite: (trips, sigma_s, sigma_t, config, query lines)."""
    rng = random.Random(1000 + i)
    trips, ss, st = random_dataset(rng)
    cfg = BuildConfig(sigma_s=ss, sigma_t=st, **GRID[i % len(GRID)])
    return trips, ss, st, cfg, random_queries(rng, trips, ss, st, 20)


def test_c3_oracle_equivalence():
    t0 = time.perf_counter()
    mismatches, total = [], 0
    for i in range(1000):
        trips, ss, st, cfg, lines = criterion3_suite(i)
        idx = CtrIndex.build(trips, cfg)
        oracle = Oracle(trips, ss, st)
        for line in lines:
            total += 1
            want, got = oracle.run(line), idx.run(line)
            if want != got:
                mismatches.append(f"dataset {i} {line!r}: {got!r} != {want!r}")
    detail = f"{total} queries over 1000 datasets, {len(mismatches)} mismatches"
    if mismatches:
        detail += "; first " + mismatches[0]
    report(3, "oracle equivalence", not mismatches, detail, time.perf_counter() - t0, 600)


# -- 4 ----------------------------------------------------------------------------

def _prefix_free_ordered(code):
    words = [format(c, f"0{l}b") if l else "" for c, l in zip(code.codes, code.lengths)]
    if words != sorted(words):
        return False
    return all(not words[k + 1].startswith(words[k]) for k in range(len(words) - 1))


def test_c4_hu_tucker():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    bad = []
    for trial in range(500):
        sigma = int(rng.integers(1, 17))
        freqs = [int(x) for x in rng.integers(1, 1000, size=sigma)]
        code = build_hu_tucker(freqs)
        if code.weighted_length(freqs) != optimal_alphabetic_cost(freqs) or not _prefix_free_ordered(code):
            bad.append(f"trial {trial}: {freqs}")
    worst = 0.0
    for trial in range(50):
        sigma = int(rng.integers(2, 1025))
        freqs = [int(x) for x in rng.integers(1, 10_000, size=sigma)]
        code = build_hu_tucker(freqs)
        avg = code.weighted_length(freqs) / sum(freqs)
        h = entropy(freqs)
        worst = max(worst, avg - h)
        if not h <= avg <= h + 2:
            bad.append(f"entropy bound, sigma={sigma}: H={h:.3f} avg={avg:.3f}")
    detail = f"500 DP matches, 50 entropy-bound checks (max avg - H0 = {worst:.3f})"
    report(4, "Hu-Tucker optimality", not bad, detail if not bad else bad[0], time.perf_counter() - t0, 120)


# -- 5 ----------------------------------------------------------------------------

def test_c5_compression(skewed_store):
    store, setup = skewed_store
    t0 = time.perf_counter()
    ratios = []
    for t_psi in (32, 128, 512):
        idx = CtrIndex.build(store, BIG_CONFIG, t_psi=t_psi)
        ratios.append(idx.stats["spatial_ratio"])
        if t_psi == 32:
            wtht_skewed = idx.stats["temporal_payload_bits"]
    wm_skewed = CtrIndex.build(store, BIG_CONFIG, time_struct="wm").stats["temporal_payload_bits"]
    uni = build_store(generate_trips(None, BIG_Z, "uniform", seed=12), BIG_CONFIG.discretizer())
    st = CtrIndex.build(uni, BIG_CONFIG).stats
    uniform_ratio = st["temporal_payload_bits"] / st["temporal_baseline_bits"]

    a = ratios[0] <= 0.70 and ratios[0] > ratios[1] > ratios[2]
    b = wtht_skewed < wm_skewed
    c = uniform_ratio <= 1.05
    detail = (f"(a) spatial {', '.join(f'{r:.3f}' for r in ratios)} {'ok' if a else 'FAILED'}; "
              f"(b) WTHT {wtht_skewed} < WM {wm_skewed} bits {'ok' if b else 'FAILED'}; "
              f"(c) uniform WTHT {uniform_ratio:.3f} of baseline {'ok' if c else 'FAILED'}")
    report(5, "compression", a and b and c, detail, setup + time.perf_counter() - t0, 300)


# -- 6 ----------------------------------------------------------------------------

def test_c6_topk_agreement(skewed_index):
    idx = skewed_index
    t0 = time.perf_counter()
    rng = random.Random(6)
    windows = [None]
    for _ in range(10):
        t1 = rng.randrange(idx.sigma_t)
        windows.append((t1, min(idx.sigma_t - 1, t1 + rng.randint(0, 300))))
    bad = []
    for k in (1, 10, 100):
        for w in windows:
            for fn in (idx.top_k, idx.top_k_starts):
                seq, binp = fn(k, "seq", w), fn(k, "bin", w)
                if sorted(seq) != sorted(binp):
                    bad.append(f"{fn.__name__} k={k} window={w}")
    n = 3 * len(windows) * 2
    report(6, "top-k agreement", not bad, f"{n} seq/bin comparisons, {len(bad)} differ" if not bad else bad[0],
           time.perf_counter() - t0, 120)


# -- 7 ----------------------------------------------------------------------------

SPATIAL = ("starts_with_x", "ends_with_x", "from_x_to_y")
COUNTING = ("uses_x", "uses_x_t", "starts_t", "uses_t")


def test_c7_latency(skewed_store, skewed_index):
    store, _ = skewed_store
    t0 = time.perf_counter()
    lat = time_classes(skewed_index, query_sets(store, 10_000, seed=7), topk_runs=1)
    slow = [f"{k}={lat[k] * 1e6:.2f} us" for k in SPATIAL if lat[k] >= 100e-6]
    slow += [f"{k}={lat[k] * 1e6:.2f} us" for k in COUNTING if lat[k] >= 10e-6]
    shown = ", ".join(f"{k} {lat[k] * 1e6:.2f}" for k in SPATIAL + COUNTING)
    detail = f"mean us on {_backend.NAME} core: {shown}"
    if slow:
        detail += "; over limit: " + ", ".join(slow)
    report(7, "query latency", not slow, detail, time.perf_counter() - t0)


# -- 8 ----------------------------------------------------------------------------

def test_c8_serialization():
    t0 = time.perf_counter()
    bad = []
    flips = 0
    for i in range(len(GRID) * 4):
        trips, ss, st, cfg, lines = criterion3_suite(i)
        idx = CtrIndex.build(trips, cfg)
        data = dumps(idx)
        back = loads(data)
        for line in lines:
            if idx.run(line) != back.run(line):
                bad.append(f"config {GRID[i % len(GRID)]}: {line!r}")
        if dumps(back) != data:
            bad.append(f"config {GRID[i % len(GRID)]}: re-serialization differs")
        # every bit for the first few, a sample afterward
        rng = random.Random(i)
        positions = range(len(data) * 8) if i < 3 else rng.sample(range(len(data) * 8), 300)
        buf = bytearray(data)
        for bit in positions:
            buf[bit >> 3] ^= 1 << (bit & 7)
            try:
                loads(bytes(buf))
                bad.append(f"config {GRID[i % len(GRID)]}: bit {bit} flip undetected")
            except IndexFormatError:
                pass
            buf[bit >> 3] ^= 1 << (bit & 7)
            flips += 1
    detail = f"{len(GRID) * 4} indexes over the full grid round-trip; {flips} single-bit flips all rejected"
    report(8, "serialization", not bad, detail if not bad else bad[0], time.perf_counter() - t0)


def test_checksum_error_type():
    idx = CtrIndex.build([((1, 2), (0, 1))])
    data = bytearray(dumps(idx))
    data[30] ^= 4
    with pytest.raises(ChecksumError):
        loads(bytes(data))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
