import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ctr.bitvector import FLAVORS, build_bitvector, flavor_name, from_state, parse_flavor
from ctr.errors import PositionOutOfRange, RankOutOfRange

from _util import CORES, CORE_IDS


def naive(bits):
    bits = np.asarray(bits, dtype=np.int64)
    rank = np.concatenate([[0], np.cumsum(bits)])
    return rank, np.flatnonzero(bits == 1) + 1, np.flatnonzero(bits == 0) + 1


def check_against_scan(bv, bits, sample=None, rng=None):
    rank, ones, zeros = naive(bits)
    m = len(bits)
    assert len(bv) == m and bv.ones == len(ones)
    positions = range(m + 1) if sample is None else rng.integers(0, m + 1, size=sample)
    for i in positions:
        i = int(i)
        assert bv.rank1(i) == rank[i]
        assert bv.rank0(i) + bv.rank1(i) == i
        if i:
            assert bv.access(i) == bits[i - 1]
    ks = range(1, len(ones) + 1) if sample is None else rng.integers(1, len(ones) + 1, size=min(sample, len(ones)))
    for k in ks:
        assert bv.select1(int(k)) == ones[int(k) - 1]
    ks = range(1, len(zeros) + 1) if sample is None else rng.integers(1, len(zeros) + 1, size=min(sample, len(zeros)))
    for k in ks:
        assert bv.select0(int(k)) == zeros[int(k) - 1]


@pytest.mark.parametrize("core", CORES, ids=CORE_IDS)
@pytest.mark.parametrize("flavor", FLAVORS)
@given(bits=st.lists(st.integers(0, 1), max_size=700))
@settings(max_examples=40, deadline=None)
def test_matches_naive_scan(core, flavor, bits):
    bits = np.asarray(bits, dtype=np.uint8)
    bv = build_bitvector(bits, flavor, core)
    check_against_scan(bv, bits)
    assert np.array_equal(bv.to_bits(), bits)


@pytest.mark.parametrize("core", CORES, ids=CORE_IDS)
@pytest.mark.parametrize("flavor", FLAVORS)
@pytest.mark.parametrize("density", [0.001, 0.5, 0.97])
def test_large_random(core, flavor, density):
    rng = np.random.default_rng(int(density * 1000))
    m = 1_000_000 if core.NAME == "compiled" else 200_000
    bits = (rng.random(m) < density).astype(np.uint8)
    bv = build_bitvector(bits, flavor, core)
    check_against_scan(bv, bits, sample=2000, rng=rng)
    assert bv.rank1(m) == int(bits.sum())


@pytest.mark.parametrize("core", CORES, ids=CORE_IDS)
@pytest.mark.parametrize("flavor", FLAVORS)
def test_edge_shapes(core, flavor):
    for bits in ([], [0], [1], [1] * 300, [0] * 300, ([1] + [0] * 63) * 9):
        bits = np.asarray(bits, dtype=np.uint8)
        check_against_scan(build_bitvector(bits, flavor, core), bits)


@pytest.mark.parametrize("core", CORES, ids=CORE_IDS)
def test_bounds_raise(core):
    bv = build_bitvector([1, 0, 1], "plain", core)
    with pytest.raises(PositionOutOfRange):
        bv.rank1(4)
    with pytest.raises(PositionOutOfRange):
        bv.access(0)
    with pytest.raises(RankOutOfRange):
        bv.select1(3)
    with pytest.raises(RankOutOfRange):
        bv.select0(2)
    assert isinstance(PositionOutOfRange("x"), IndexError)


def test_rrr_compresses_skewed_content():
    rng = np.random.default_rng(0)
    bits = (rng.random(200_000) < 0.02).astype(np.uint8)
    plain = build_bitvector(bits, "plain").size_in_bits()
    rrr = build_bitvector(bits, "rrr64").size_in_bits()
    sparse = build_bitvector(bits, "sparse").size_in_bits()
    assert rrr < plain and sparse < plain


@pytest.mark.parametrize("core", CORES, ids=CORE_IDS)
def test_sparse_from_positions(core):
    bv = core.SparseBitvector.from_positions([0, 5, 6, 99], 100)
    assert [bv.select1(k) for k in (1, 2, 3, 4)] == [1, 6, 7, 100]
    assert bv.rank1(6) == 2


@pytest.mark.parametrize("core", CORES, ids=CORE_IDS)
@pytest.mark.parametrize("flavor", FLAVORS)
def test_state_roundtrip(core, flavor):
    bits = (np.random.default_rng(3).random(5000) < 0.3).astype(np.uint8)
    bv = build_bitvector(bits, flavor, core)
    tag, params, arrays = bv.state()
    again = from_state(tag, params, arrays, core)
    assert np.array_equal(again.to_bits(), bits)
    assert flavor_name(again) == flavor


def test_parse_flavor():
    assert parse_flavor("rrr128") == ("rrr", 128)
    assert parse_flavor("plain") == ("plain", 32)
    with pytest.raises(ValueError):
        parse_flavor("elias")
