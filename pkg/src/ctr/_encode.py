"""Array encoders shared by the compiled and the pure-Python cores.

Every structure is built here with numpy, then handed to a core class as a
set of flat arrays. Both cores read exactly the same layout, which is also
the layout written to index files.
"""
from math import comb

import numpy as np

SUPERBLOCK_WORDS = 1024  # 65536 bits per absolute rank sample
RRR_BLOCK = 15
SPARSE_SAMPLE = 64  # one select sample every 64 ones (or zeros)


def bit_length(x):
    return int(x).bit_length()


def as_bits(bits):
    arr = np.asarray(bits)
    if arr.dtype != np.uint8:
        arr = (arr != 0).astype(np.uint8)
    return arr


def pack_words(bits, extra=1):
    """Pack a 0/1 array into little-endian uint64 words plus `extra` zero words."""
    bits = as_bits(bits)
    nwords = (len(bits) + 63) // 64 + extra
    padded = np.zeros(nwords * 64, dtype=np.uint8)
    padded[: len(bits)] = bits
    return np.packbits(padded, bitorder="little").view("<u8").astype(np.uint64)


def unpack_words(words, m):
    raw = np.asarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, bitorder="little")[:m]


def pack_fields(values, widths):
    """Concatenate variable-width fields (each < 64 bits) into uint64 words.

    Returns (words, starts) where starts[i] is the bit offset of field i.
    """
    values = np.asarray(values, dtype=np.uint64)
    widths = np.asarray(widths, dtype=np.int64)
    starts = np.zeros(len(widths) + 1, dtype=np.int64)
    np.cumsum(widths, out=starts[1:])
    total = int(starts[-1])
    words = np.zeros(total // 64 + 2, dtype=np.uint64)
    sel = widths > 0
    if sel.any():
        v = values[sel]
        p = starts[:-1][sel]
        w = widths[sel]
        idx = p >> 6
        sh = (p & 63).astype(np.uint64)
        np.bitwise_or.at(words, idx, v << sh)
        spill = (p & 63) + w > 64
        if spill.any():
            np.bitwise_or.at(
                words,
                idx[spill] + 1,
                v[spill] >> (np.uint64(64) - sh[spill]),
            )
    return words, starts


def pack_fixed(values, width):
    values = np.asarray(values, dtype=np.uint64)
    words, _ = pack_fields(values, np.full(len(values), width, dtype=np.int64))
    return words


def read_field(words, pos, width):
    if width == 0:
        return 0
    w = pos >> 6
    sh = pos & 63
    x = int(words[w]) >> sh
    if sh + width > 64:
        x |= int(words[w + 1]) << (64 - sh)
    return x & ((1 << width) - 1)


# -- plain bitvector ---------------------------------------------------------

def check_factor(factor):
    if factor < 2 or factor > 2 * SUPERBLOCK_WORDS or factor & (factor - 1):
        raise ValueError(f"rank sampling factor must be a power of two in [2, 2048], got {factor}")


def encode_plain(bits, factor=32):
    """Plain bits with a two-level rank directory.

    Blocks span `factor` 32-bit words (factor/2 uint64 words); each block keeps
    a 16-bit count relative to its 65536-bit superblock, which keeps an
    absolute 64-bit count.
    """
    check_factor(factor)
    bits = as_bits(bits)
    m = len(bits)
    words = pack_words(bits)
    wpb = factor // 2
    pc = np.bitwise_count(words).astype(np.int64)
    cum = np.zeros(len(words) + 1, dtype=np.int64)
    np.cumsum(pc, out=cum[1:])
    nblocks = (len(words) + wpb - 1) // wpb
    block_abs = cum[np.arange(nblocks) * wpb]
    nsb = (len(words) + SUPERBLOCK_WORDS - 1) // SUPERBLOCK_WORDS
    sb = cum[np.arange(nsb) * SUPERBLOCK_WORDS].astype(np.uint64)
    blk = (block_abs - sb[(np.arange(nblocks) * wpb) // SUPERBLOCK_WORDS].astype(np.int64)).astype(np.uint16)
    return dict(m=m, factor=factor), dict(words=words, sb=sb, blk=blk)


def plain_size_bits(m, factor):
    wpb = factor // 2
    nwords = (m + 63) // 64 + 1
    nblocks = (nwords + wpb - 1) // wpb
    nsb = (nwords + SUPERBLOCK_WORDS - 1) // SUPERBLOCK_WORDS
    return m + 16 * nblocks + 64 * nsb


# -- RRR-style compressed bitvector -------------------------------------------

def _rrr_tables():
    allp = np.arange(1 << RRR_BLOCK, dtype=np.int64)
    pcs = np.bitwise_count(allp)
    order = np.lexsort((allp, pcs))
    patterns = allp[order].astype(np.uint16)
    class_start = np.zeros(RRR_BLOCK + 2, dtype=np.int64)
    np.cumsum(np.bincount(pcs, minlength=RRR_BLOCK + 1), out=class_start[1:])
    inverse = np.zeros(1 << RRR_BLOCK, dtype=np.uint16)
    inverse[patterns.astype(np.int64)] = (np.arange(len(patterns)) - class_start[pcs[order]]).astype(np.uint16)
    widths = np.array([bit_length(comb(RRR_BLOCK, c) - 1) for c in range(RRR_BLOCK + 1)], dtype=np.uint8)
    return patterns, class_start, inverse, widths


RRR_PATTERNS, RRR_CLASS_START, RRR_INVERSE, RRR_WIDTHS = _rrr_tables()


def encode_rrr(bits, sampling=32):
    if sampling < 1:
        raise ValueError("sampling must be positive")
    bits = as_bits(bits)
    m = len(bits)
    nblocks = (m + RRR_BLOCK - 1) // RRR_BLOCK
    padded = np.zeros(nblocks * RRR_BLOCK, dtype=np.int64)
    padded[:m] = bits
    pats = padded.reshape(nblocks, RRR_BLOCK) @ (1 << np.arange(RRR_BLOCK, dtype=np.int64))
    classes = np.bitwise_count(pats).astype(np.uint8)
    offsets = RRR_INVERSE[pats]
    widths = RRR_WIDTHS[classes].astype(np.int64)
    words, starts = pack_fields(offsets, widths)
    cum_ones = np.zeros(nblocks + 1, dtype=np.int64)
    np.cumsum(classes, out=cum_ones[1:])
    sample_blocks = np.arange(nblocks // sampling + 1) * sampling
    return (
        dict(m=m, sampling=sampling),
        dict(
            classes=classes,
            offsets=words,
            rank_samples=cum_ones[sample_blocks].astype(np.uint64),
            pos_samples=starts[sample_blocks].astype(np.uint64),
        ),
    )


def rrr_size_bits(m, sampling, offset_bits):
    nblocks = (m + RRR_BLOCK - 1) // RRR_BLOCK
    nsamples = nblocks // sampling + 1
    return 4 * nblocks + offset_bits + nsamples * (bit_length(m) + bit_length(offset_bits))


# -- sparse (Elias-Fano) bitvector --------------------------------------------

def encode_sparse(bits=None, positions=None, m=None):
    """High/low split of the one positions with sampled select on the high part."""
    if positions is None:
        bits = as_bits(bits)
        m = len(bits)
        positions = np.flatnonzero(bits)
    positions = np.asarray(positions, dtype=np.int64)
    k = len(positions)
    low_width = max(0, bit_length(m // k) - 1) if k else 0
    high_len = k + (m >> low_width) + 1
    high_bits = np.zeros(high_len, dtype=np.uint8)
    high_bits[(positions >> low_width) + np.arange(k)] = 1
    low = pack_fixed(positions & ((1 << low_width) - 1), low_width)
    one_pos = np.flatnonzero(high_bits)
    zero_pos = np.flatnonzero(high_bits == 0)
    return (
        dict(m=m, ones=k, low_width=low_width, high_len=high_len),
        dict(
            low=low,
            high=pack_words(high_bits),
            sel1=one_pos[::SPARSE_SAMPLE].astype(np.uint64),
            sel0=zero_pos[::SPARSE_SAMPLE].astype(np.uint64),
        ),
    )


def sparse_size_bits(ones, low_width, high_len, nsel):
    return ones * low_width + high_len + nsel * bit_length(high_len)


# -- compressed psi -------------------------------------------------------------

def encode_psi(psi, sample_rate):
    """Byte-aligned gap code with run-length marking of +1 runs.

    Each block of `sample_rate` entries stores its first value as an absolute
    sample; the remaining entries become tokens, LEB128 encoded:
      2*zigzag(gap)        literal gap (never +1)
      2*(run_length-1)+1   run of consecutive +1 gaps
    """
    psi = [int(v) for v in psi]
    n = len(psi)
    nblocks = (n + sample_rate - 1) // sample_rate
    samples = np.zeros(nblocks, dtype=np.int64)
    ptrs = np.zeros(nblocks + 1, dtype=np.uint64)
    out = bytearray()

    def put(tok):
        while True:
            b = tok & 0x7F
            tok >>= 7
            if tok:
                out.append(b | 0x80)
            else:
                out.append(b)
                return

    for b in range(nblocks):
        lo = b * sample_rate
        hi = min(n, lo + sample_rate)
        samples[b] = psi[lo]
        ptrs[b] = len(out)
        run = 0
        prev = psi[lo]
        for i in range(lo + 1, hi):
            gap = psi[i] - prev
            prev = psi[i]
            if gap == 1:
                run += 1
                continue
            if run:
                put(2 * (run - 1) + 1)
                run = 0
            put(2 * ((gap << 1) ^ (gap >> 63)))
        if run:
            put(2 * (run - 1) + 1)
    ptrs[nblocks] = len(out)
    return samples, ptrs, np.frombuffer(bytes(out), dtype=np.uint8).copy()


def psi_size_bits(n, nblocks, stream_len):
    return 8 * stream_len + nblocks * (bit_length(n) + bit_length(stream_len))
