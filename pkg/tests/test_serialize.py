import random

import pytest

from ctr.bench import GRID
from ctr.errors import ChecksumError, IndexFormatError
from ctr.oracle import Oracle
from ctr.protocol import random_queries
from ctr.query import BuildConfig, CtrIndex
from ctr.serialize import MAGIC, dumps, load_index, loads, save_index
from ctr.trips import read_trips

from _util import CORES, example1_path, random_dataset


@pytest.mark.parametrize("conf", GRID, ids=lambda c: f"{c['time_struct']}-{c['bitvector']}-{c['t_psi']}")
def test_roundtrip_grid(conf):
    rng = random.Random(7)
    trips, ss, st = random_dataset(rng, max_z=80)
    idx = CtrIndex.build(trips, BuildConfig(sigma_s=ss, sigma_t=st, **conf))
    data = dumps(idx)
    assert dumps(CtrIndex.build(trips, BuildConfig(sigma_s=ss, sigma_t=st, **conf))) == data
    for core in CORES:
        back = loads(data, core)
        assert back.config == idx.config
        for line in random_queries(rng, trips, ss, st, 10):
            assert back.run(line) == idx.run(line)


def test_file_roundtrip(tmp_path):
    idx = CtrIndex.build(read_trips(example1_path()), time_struct="wm", bitvector="rrr64")
    path = tmp_path / "ex1.ctr"
    size = save_index(idx, path)
    assert size == path.stat().st_size
    back = load_index(path)
    assert back.stats == idx.stats
    oracle = Oracle([(list(n), list(c)) for n, c in
                     [((1, 2, 3), (0, 3, 5)), ((1, 2, 3), (5, 7, 8)), ((2, 3, 10, 6), (10, 13, 14, 15)),
                      ((2, 3, 10, 4, 7), (2, 4, 6, 8, 10)), ((3, 10, 5), (9, 11, 12)), ((9, 8, 7), (12, 14, 15))]],
                    10, 16)
    for line in random_queries(random.Random(1), oracle.trips, 10, 16, 20):
        assert back.run(line) == oracle.run(line)


def test_every_bit_flip_detected():
    data = dumps(CtrIndex.build([((1, 2, 1), (0, 1, 1)), ((2, 1), (3, 4))]))
    buf = bytearray(data)
    for bit in range(len(data) * 8):
        buf[bit >> 3] ^= 1 << (bit & 7)
        with pytest.raises(IndexFormatError):
            loads(bytes(buf))
        buf[bit >> 3] ^= 1 << (bit & 7)


def test_format_errors():
    data = dumps(CtrIndex.build([((1, 2), (0, 1))]))
    assert data[:4] == MAGIC
    with pytest.raises(IndexFormatError):
        loads(b"XXXX" + data[4:])
    with pytest.raises(IndexFormatError):
        loads(data[:-1])
    with pytest.raises(IndexFormatError):
        loads(data[:4] + b"\x09" + data[5:])
    bad = bytearray(data)
    bad[-1] ^= 1
    with pytest.raises(ChecksumError):
        loads(bytes(bad))
