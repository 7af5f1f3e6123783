"""Hu-Tucker optimal alphabetic (order-preserving) prefix codes."""
import math
from dataclasses import dataclass

from .errors import EmptyAlphabet


@dataclass(frozen=True)
class HuTuckerCode:
    codes: tuple   # integer codeword per symbol, read MSB first
    lengths: tuple

    def __len__(self):
        return len(self.codes)

    def bits(self, c):
        n = self.lengths[c]
        return format(self.codes[c], f"0{n}b") if n else ""

    def weighted_length(self, freqs):
        return sum(int(f) * l for f, l in zip(freqs, self.lengths))


def _combine_levels(weights):
    """Phase 1: repeatedly merge the minimum compatible pair; return leaf depths."""
    n = len(weights)
    # work list entries: [weight, is_leaf, members]
    work = [[int(w), True, [i]] for i, w in enumerate(weights)]
    depth = [0] * n
    while len(work) > 1:
        best = None
        win_w = win_i = None
        for j, (wj, leaf_j, _) in enumerate(work):
            if win_i is not None:
                key = (win_w + wj, win_i, j)
                if best is None or key < best:
                    best = key
            if leaf_j:
                win_w, win_i = wj, j
            elif win_i is None or wj < win_w:
                win_w, win_i = wj, j
        _, i, j = best
        a, b = work[i], work[j]
        for leaf in a[2]:
            depth[leaf] += 1
        for leaf in b[2]:
            depth[leaf] += 1
        work[i] = [a[0] + b[0], False, a[2] + b[2]]
        del work[j]
    return depth


def codes_from_lengths(lengths):
    """Phase 2: assign alphabetic codewords left to right from leaf levels."""
    codes = []
    prev_code, prev_len = -1, 0
    for l in lengths:
        if prev_code < 0:
            code = 0
        elif l >= prev_len:
            code = (prev_code + 1) << (l - prev_len)
        else:
            code = (prev_code + 1) >> (prev_len - l)
        if code >> l:
            raise ValueError("levels do not describe an alphabetic tree")
        codes.append(code)
        prev_code, prev_len = code, l
    if lengths and (prev_code + 1) != (1 << prev_len):
        raise ValueError("levels do not describe a full alphabetic tree")
    return codes


def build_hu_tucker(freqs):
    freqs = [int(f) for f in freqs]
    if not freqs:
        raise EmptyAlphabet("Hu-Tucker code needs at least one symbol")
    if any(f < 0 for f in freqs):
        raise ValueError("frequencies must be non-negative")
    if len(freqs) == 1:
        return HuTuckerCode((0,), (0,))
    lengths = _combine_levels(freqs)
    return HuTuckerCode(tuple(codes_from_lengths(lengths)), tuple(lengths))


def optimal_alphabetic_cost(freqs):
    """O(σ³) dynamic program for the cheapest alphabetic tree (reference)."""
    w = [int(f) for f in freqs]
    n = len(w)
    if n == 0:
        raise EmptyAlphabet("empty alphabet")
    pre = [0]
    for x in w:
        pre.append(pre[-1] + x)
    cost = [[0] * n for _ in range(n)]
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span - 1
            cost[i][j] = pre[j + 1] - pre[i] + min(cost[i][k] + cost[k + 1][j] for k in range(i, j))
    return cost[0][n - 1]


def entropy(freqs):
    total = sum(freqs)
    return -sum(f / total * math.log2(f / total) for f in freqs if f)
