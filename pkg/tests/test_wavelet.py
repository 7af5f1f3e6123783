import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ctr.errors import PreconditionViolated, RangeInvalid, SymbolOutOfRange
from ctr.wavelet import build_temporal, countlr, payload_bits

from _util import CORES, CORE_IDS, SMALL_SEQ

KINDS = ("wm", "wtht")
FLAVORS = ("plain", "rrr32", "rrr64", "rrr128")


def brute_count(seq, i, j, a, b):
    return sum(1 for x in seq[i - 1:j] if a <= x <= b)


@pytest.mark.parametrize("core", CORES, ids=CORE_IDS)
@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("flavor", FLAVORS)
def test_small_sequence(core, kind, flavor):
    w = build_temporal(SMALL_SEQ, 8, kind, flavor, core, check=True)
    assert w.access(8) == 3
    assert w.count(5, 10, 3, 7) == 4
    assert w.rank(3, 15) == 4
    assert w.select(7, 3) == 9
    assert w.count_split(1, 15, 3, 5) == (4, 7)


@pytest.mark.parametrize("core", CORES, ids=CORE_IDS)
@pytest.mark.parametrize("kind", KINDS)
@given(data=st.data())
@settings(max_examples=60, deadline=None)
def test_against_scan(core, kind, data):
    sigma = data.draw(st.integers(1, 40))
    seq = data.draw(st.lists(st.integers(0, sigma - 1), min_size=1, max_size=120))
    w = build_temporal(seq, sigma, kind, "plain", core)
    n = len(seq)
    for _ in range(15):
        i = data.draw(st.integers(1, n))
        j = data.draw(st.integers(i, n))
        a = data.draw(st.integers(0, sigma - 1))
        b = data.draw(st.integers(a, sigma - 1))
        assert w.count(i, j, a, b) == brute_count(seq, i, j, a, b)
        assert w.count_split(i, j, a, b) == (brute_count(seq, i, j, 0, a - 1) if a else 0,
                                              brute_count(seq, i, j, a, b))
    c = data.draw(st.integers(0, sigma - 1))
    positions = [k + 1 for k, x in enumerate(seq) if x == c]
    for k, p in enumerate(positions, 1):
        assert w.select(c, k) == p
        assert w.rank(c, p) == k
    assert [w.access(i) for i in range(1, n + 1)] == seq


@pytest.mark.parametrize("kind", KINDS)
def test_access_sample_on_larger_sequence(kind):
    rng = np.random.default_rng(5)
    seq = rng.zipf(1.6, size=50_000) % 300
    w = build_temporal(seq, 300, kind, "rrr64")
    for i in rng.integers(1, len(seq) + 1, size=1000):
        assert w.access(int(i)) == seq[i - 1]


def test_wtht_beats_wm_on_skewed_symbols():
    rng = np.random.default_rng(9)
    seq = np.minimum(rng.geometric(0.2, size=20_000), 255)
    assert payload_bits(build_temporal(seq, 256, "wtht")) < payload_bits(build_temporal(seq, 256, "wm"))


@pytest.mark.parametrize("kind", KINDS)
def test_countlr(kind):
    seq = [4, 1, 2, 2, 3, 5, 5, 7, 0]
    w = build_temporal(seq, 8, kind)
    assert countlr(w, 2, 8, 2, 5) == (3, 7)
    assert countlr(w, 2, 8, 6, 6) is None
    with pytest.raises(PreconditionViolated):
        countlr(w, 1, 3, 0, 7, check=True)


@pytest.mark.parametrize("kind", KINDS)
def test_single_symbol_alphabet(kind):
    w = build_temporal([0, 0, 0], 1, kind)
    assert w.count(1, 3, 0, 0) == 3 and w.access(2) == 0


@pytest.mark.parametrize("kind", KINDS)
def test_errors(kind):
    with pytest.raises(SymbolOutOfRange):
        build_temporal([0, 9], 4, kind)
    w = build_temporal([0, 1, 2], 3, kind)
    with pytest.raises(RangeInvalid):
        w.count(2, 1, 0, 2)
    with pytest.raises(RangeInvalid):
        w.count(1, 3, 0, 3)
    with pytest.raises(ValueError):
        build_temporal([0], 1, "bwt")
