import heapq
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ctr.errors import EmptyAlphabet
from ctr.hutucker import build_hu_tucker, codes_from_lengths, entropy, optimal_alphabetic_cost


def words(code):
    return [code.bits(c) for c in range(len(code))]


def test_textbook_vector():
    # classic Hu-Tucker example, optimum 4 (weights 1,1,1,1 -> balanced)
    code = build_hu_tucker([1, 1, 1, 1])
    assert words(code) == ["00", "01", "10", "11"]


def test_frozen_small_cases():
    assert build_hu_tucker([5]).lengths == (0,)
    assert build_hu_tucker([3, 9]).lengths == (1, 1)
    # a heavy middle symbol cannot rise above depth 2 without breaking order
    code = build_hu_tucker([1, 100, 1])
    assert code.weighted_length([1, 100, 1]) == optimal_alphabetic_cost([1, 100, 1]) == 203
    assert code.lengths in ((1, 2, 2), (2, 2, 1))


def huffman_cost(freqs):
    heap = list(freqs)
    heapq.heapify(heap)
    total = 0
    while len(heap) > 1:
        a, b = heapq.heappop(heap), heapq.heappop(heap)
        total += a + b
        heapq.heappush(heap, a + b)
    return total


def test_alphabetic_costs_more_than_huffman():
    freqs = [1, 10, 1, 10]
    code = build_hu_tucker(freqs)
    assert code.weighted_length(freqs) == optimal_alphabetic_cost(freqs) == 44
    assert huffman_cost(freqs) == 36


@given(st.lists(st.integers(0, 500), min_size=1, max_size=64))
@settings(max_examples=300, deadline=None)
def test_matches_dynamic_program(freqs):
    code = build_hu_tucker(freqs)
    assert code.weighted_length(freqs) == optimal_alphabetic_cost(freqs)
    w = words(code)
    assert w == sorted(w)
    for a, b in itertools.combinations(w, 2):
        assert not b.startswith(a) and not a.startswith(b)


@given(st.lists(st.integers(1, 10_000), min_size=2, max_size=1024))
@settings(max_examples=60, deadline=None)
def test_entropy_bound(freqs):
    code = build_hu_tucker(freqs)
    avg = code.weighted_length(freqs) / sum(freqs)
    h = entropy(freqs)
    assert h - 1e-9 <= avg <= h + 2


def test_codes_from_lengths():
    assert codes_from_lengths([1, 2, 2]) == [0, 2, 3]
    with pytest.raises(ValueError):
        codes_from_lengths([1, 1, 1])
    with pytest.raises(ValueError):
        codes_from_lengths([2, 2, 2])


def test_errors():
    with pytest.raises(EmptyAlphabet):
        build_hu_tucker([])
    with pytest.raises(ValueError):
        build_hu_tucker([1, -1])
