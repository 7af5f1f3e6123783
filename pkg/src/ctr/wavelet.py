"""Wavelet matrix and Hu-Tucker-shaped wavelet tree over integer sequences.

Both expose access(i), rank(c, i), select(c, k), count(i, j, a, b) and
count_split(i, j, t1, t2); countlr() builds on count_split. Positions are
1-based, symbols are 0..sigma-1.
"""
import numpy as np

from . import _backend
from .bitvector import build_bitvector
from .errors import EmptyAlphabet, PreconditionViolated, SymbolOutOfRange
from .hutucker import build_hu_tucker


def _as_seq(seq, sigma):
    seq = np.asarray(seq, dtype=np.int64)
    if sigma is None:
        sigma = int(seq.max()) + 1 if len(seq) else 1
    if sigma < 1:
        raise EmptyAlphabet("sigma must be at least 1")
    if len(seq) and (seq.min() < 0 or seq.max() >= sigma):
        raise SymbolOutOfRange(f"sequence symbols must lie in [0, {sigma})")
    return seq, int(sigma)


def wm_levels(seq, sigma):
    """Per-level bit arrays and zero counts of the wavelet matrix."""
    nlevels = max(1, (sigma - 1).bit_length())
    cur = seq
    levels, zeros = [], []
    for lvl in range(nlevels):
        bits = ((cur >> (nlevels - 1 - lvl)) & 1).astype(np.uint8)
        zeros.append(int(len(bits) - bits.sum()))
        levels.append(bits)
        cur = np.concatenate([cur[bits == 0], cur[bits == 1]])
    return levels, zeros


def build_wavelet_matrix(seq, sigma=None, flavor="plain", core=None, check=False):
    core = core or _backend.core
    seq, sigma = _as_seq(seq, sigma)
    bit_levels, zeros = wm_levels(seq, sigma)
    levels = [build_bitvector(b, flavor, core) for b in bit_levels]
    wm = core.WaveletMatrix(len(seq), sigma, zeros, levels)
    if check:
        _roundtrip(wm, seq)
    return wm


def wtht_layout(seq, code):
    """Shape table and per-depth concatenated bit arrays of the shaped tree."""
    sigma = len(code)
    codes = np.asarray(code.codes, dtype=np.int64)
    lens = np.asarray(code.lengths, dtype=np.int64)
    if sigma == 1:
        empty = np.zeros(0, dtype=np.int64)
        table = dict(codes=codes, code_lens=lens, **{k: empty for k in _NODE_KEYS})
        return -1, table, []

    # internal nodes keyed by (depth, prefix); symbols of a node form a contiguous range
    nodes = {}
    order = []
    stack = [(0, 0, 0, sigma - 1)]
    while stack:
        d, pref, lo, hi = stack.pop()
        bit = (codes[lo:hi + 1] >> (lens[lo:hi + 1] - d - 1)) & 1
        mid = lo + int((bit == 0).sum()) - 1
        nodes[(d, pref)] = (lo, mid, hi)
        order.append((d, pref))
        for (clo, chi, cpref) in ((lo, mid, pref * 2), (mid + 1, hi, pref * 2 + 1)):
            if clo < chi:
                stack.append((d + 1, cpref, clo, chi))
    order.sort()
    ident = {key: k for k, key in enumerate(order)}

    sym_codes = codes[seq]
    sym_lens = lens[seq]
    maxdepth = int(lens.max())
    levels = []
    cols = {k: np.zeros(len(order), dtype=np.int64) for k in _NODE_KEYS}
    for d in range(maxdepth):
        sel = sym_lens > d
        c, l = sym_codes[sel], sym_lens[sel]
        key = c >> (l - d)
        perm = np.argsort(key, kind="stable")
        key = key[perm]
        bits = ((c[perm] >> (l[perm] - d - 1)) & 1).astype(np.uint8)
        levels.append(bits)
        cum = np.concatenate([[0], np.cumsum(bits, dtype=np.int64)])
        for (dd, pref) in order:
            if dd != d:
                continue
            k = ident[(dd, pref)]
            lo, mid, hi = nodes[(dd, pref)]
            off = int(np.searchsorted(key, pref, side="left"))
            cols["node_depth"][k] = d
            cols["node_off"][k] = off
            cols["node_ones"][k] = cum[off]
            cols["node_lo"][k] = lo
            cols["node_mid"][k] = mid
            cols["node_hi"][k] = hi
            cols["node_left"][k] = ident[(d + 1, pref * 2)] if lo < mid else -(lo + 1)
            cols["node_right"][k] = ident[(d + 1, pref * 2 + 1)] if mid + 1 < hi else -(hi + 1)
    table = dict(codes=codes, code_lens=lens, **cols)
    return ident[(0, 0)], table, levels


_NODE_KEYS = ("node_depth", "node_off", "node_ones", "node_lo", "node_mid", "node_hi", "node_left", "node_right")


def build_wtht(seq, sigma=None, flavor="plain", core=None, freqs=None, check=False):
    core = core or _backend.core
    seq, sigma = _as_seq(seq, sigma)
    if freqs is None:
        freqs = np.bincount(seq, minlength=sigma)
    # unused symbols still get a leaf so they stay queryable
    code = build_hu_tucker(np.maximum(np.asarray(freqs, dtype=np.int64), 1))
    root, table, bit_levels = wtht_layout(seq, code)
    levels = [build_bitvector(b, flavor, core) for b in bit_levels]
    wt = core.WaveletTreeHT(len(seq), sigma, root, levels=levels, **table)
    wt.code = code
    if check:
        _roundtrip(wt, seq)
    return wt


def build_temporal(seq, sigma=None, kind="wtht", flavor="plain", core=None, check=False):
    if kind == "wm":
        return build_wavelet_matrix(seq, sigma, flavor, core, check)
    if kind == "wtht":
        return build_wtht(seq, sigma, flavor, core, check=check)
    raise ValueError(f"unknown temporal structure {kind!r}; expected 'wtht' or 'wm'")


def _roundtrip(w, seq):
    got = np.fromiter((w.access(i) for i in range(1, len(seq) + 1)), dtype=np.int64, count=len(seq))
    if not np.array_equal(got, seq):
        bad = int(np.flatnonzero(got != seq)[0]) + 1
        raise AssertionError(f"wavelet round trip failed at position {bad}")


def countlr(w, a, b, t1, t2, check=False):
    """Maximal subrange of [a, b] with values in [t1, t2], given non-decreasing values there.

    Returns (a', b') or None when no value falls in the window.
    """
    if check:
        vals = [w.access(i) for i in range(a, b + 1)]
        if any(x > y for x, y in zip(vals, vals[1:])):
            raise PreconditionViolated(f"values in [{a}, {b}] are not non-decreasing")
    below, inside = w.count_split(a, b, t1, t2)
    if inside == 0:
        return None
    return a + below, a + below + inside - 1


def payload_bits(w):
    """Bits spent in the level bitvectors alone."""
    return sum(bv.size_in_bits() for bv in w.levels)
