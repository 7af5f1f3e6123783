"""Pure-Python query cores.

Mirrors ``_ccore`` class for class: same constructor arguments (the arrays
produced by ``_encode``), same 1-based public methods, same answers. Used
when the compiled extension is unavailable or CTR_BACKEND=python.
"""
import numpy as np

from . import _encode as enc
from .errors import PositionOutOfRange, RangeInvalid, RankOutOfRange, SymbolOutOfRange

NAME = "python"
MASK64 = (1 << 64) - 1
_PAT = [int(x) for x in enc.RRR_PATTERNS]
_CSTART = [int(x) for x in enc.RRR_CLASS_START]
_W = [int(x) for x in enc.RRR_WIDTHS]


def _select_in_word(x, j):
    for _ in range(j - 1):
        x &= x - 1
    return (x & -x).bit_length() - 1


def _read(words, pos, width):
    if width == 0:
        return 0
    w = pos >> 6
    sh = pos & 63
    x = words[w] >> sh
    if sh + width > 64:
        x |= words[w + 1] << (64 - sh)
    return x & ((1 << width) - 1)


class Bitvector:
    flavor = None
    m = 0
    ones = 0

    def __len__(self):
        return self.m

    def rank1(self, i):
        if not 0 <= i <= self.m:
            raise PositionOutOfRange(f"rank position {i} outside [0, {self.m}]")
        return self._rank1(i)

    def rank0(self, i):
        if not 0 <= i <= self.m:
            raise PositionOutOfRange(f"rank position {i} outside [0, {self.m}]")
        return i - self._rank1(i)

    def select1(self, k):
        if not 1 <= k <= self.ones:
            raise RankOutOfRange(f"select1({k}) with {self.ones} ones")
        return self._select1(k) + 1

    def select0(self, k):
        if not 1 <= k <= self.m - self.ones:
            raise RankOutOfRange(f"select0({k}) with {self.m - self.ones} zeros")
        return self._select0(k) + 1

    def access(self, i):
        if not 1 <= i <= self.m:
            raise PositionOutOfRange(f"access position {i} outside [1, {self.m}]")
        return self._access(i - 1)

    def _access(self, i):
        return self._rank1(i + 1) - self._rank1(i)

    def to_bits(self):
        return np.array([self._access(i) for i in range(self.m)], dtype=np.uint8)

    def state(self):
        return self.flavor, dict(self._params), dict(self._arrays)

    def __repr__(self):
        return f"<{type(self).__name__} m={self.m} ones={self.ones}>"


class PlainBitvector(Bitvector):
    flavor = "plain"

    def __init__(self, m, factor, words, sb, blk):
        self.m = int(m)
        self.factor = int(factor)
        self._params = dict(m=self.m, factor=self.factor)
        self._arrays = dict(words=words, sb=sb, blk=blk)
        self._w = [int(x) for x in words]
        self._sb = [int(x) for x in sb]
        self._blk = [int(x) for x in blk]
        self._wpb = self.factor // 2
        self._nblocks = len(self._blk)
        self.ones = self._rank1(self.m)

    @classmethod
    def from_bits(cls, bits, factor=32):
        params, arrays = enc.encode_plain(bits, factor)
        return cls(**params, **arrays)

    def size_in_bits(self):
        return enc.plain_size_bits(self.m, self.factor)

    def _rank1(self, i):
        w = i >> 6
        b = w // self._wpb
        r = self._sb[w >> 10] + self._blk[b]
        words = self._w
        for k in range(b * self._wpb, w):
            r += words[k].bit_count()
        sh = i & 63
        if sh:
            r += (words[w] & ((1 << sh) - 1)).bit_count()
        return r

    def _block_ones(self, b):
        return self._sb[(b * self._wpb) >> 10] + self._blk[b]

    def _select1(self, k):
        lo, hi = 0, self._nblocks - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._block_ones(mid) < k:
                lo = mid
            else:
                hi = mid - 1
        w = lo * self._wpb
        r = self._block_ones(lo)
        words = self._w
        while True:
            c = words[w].bit_count()
            if r + c >= k:
                return w * 64 + _select_in_word(words[w], k - r)
            r += c
            w += 1

    def _select0(self, k):
        bits_per_block = self._wpb * 64
        lo, hi = 0, self._nblocks - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid * bits_per_block - self._block_ones(mid) < k:
                lo = mid
            else:
                hi = mid - 1
        w = lo * self._wpb
        r = lo * bits_per_block - self._block_ones(lo)
        words = self._w
        while True:
            x = words[w] ^ MASK64
            c = x.bit_count()
            if r + c >= k:
                return w * 64 + _select_in_word(x, k - r)
            r += c
            w += 1

    def _access(self, i):
        return (self._w[i >> 6] >> (i & 63)) & 1


class RRRBitvector(Bitvector):
    flavor = "rrr"

    def __init__(self, m, sampling, classes, offsets, rank_samples, pos_samples):
        self.m = int(m)
        self.sampling = int(sampling)
        self._params = dict(m=self.m, sampling=self.sampling)
        self._arrays = dict(classes=classes, offsets=offsets, rank_samples=rank_samples, pos_samples=pos_samples)
        self._cls = [int(x) for x in classes]
        self._off = [int(x) for x in offsets]
        self._rs = [int(x) for x in rank_samples]
        self._ps = [int(x) for x in pos_samples]
        self._offset_bits = sum(_W[c] for c in self._cls)
        self.ones = self._rank1(self.m)

    @classmethod
    def from_bits(cls, bits, sampling=32):
        params, arrays = enc.encode_rrr(bits, sampling)
        return cls(**params, **arrays)

    def size_in_bits(self):
        return enc.rrr_size_bits(self.m, self.sampling, self._offset_bits)

    def _pattern(self, c, pos):
        return _PAT[_CSTART[c] + _read(self._off, pos, _W[c])]

    def _rank1(self, i):
        blk, rem = divmod(i, enc.RRR_BLOCK)
        s = blk // self.sampling
        r = self._rs[s]
        p = self._ps[s]
        cls = self._cls
        for k in range(s * self.sampling, blk):
            c = cls[k]
            r += c
            p += _W[c]
        if rem:
            r += (self._pattern(cls[blk], p) & ((1 << rem) - 1)).bit_count()
        return r

    def _select(self, k, ones):
        B = enc.RRR_BLOCK
        t = self.sampling
        rs = self._rs

        def before(s):
            return rs[s] if ones else s * t * B - rs[s]

        lo, hi = 0, len(rs) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if before(mid) < k:
                lo = mid
            else:
                hi = mid - 1
        b = lo * t
        r = before(lo)
        p = self._ps[lo]
        cls = self._cls
        while True:
            c = cls[b]
            cnt = c if ones else B - c
            if r + cnt >= k:
                pat = self._pattern(c, p)
                if not ones:
                    pat ^= (1 << B) - 1
                return b * B + _select_in_word(pat, k - r)
            r += cnt
            p += _W[c]
            b += 1

    def _select1(self, k):
        return self._select(k, True)

    def _select0(self, k):
        return self._select(k, False)

    def _access(self, i):
        blk, rem = divmod(i, enc.RRR_BLOCK)
        s = blk // self.sampling
        p = self._ps[s]
        for k in range(s * self.sampling, blk):
            p += _W[self._cls[k]]
        return (self._pattern(self._cls[blk], p) >> rem) & 1


class SparseBitvector(Bitvector):
    flavor = "sparse"

    def __init__(self, m, ones, low_width, high_len, low, high, sel1, sel0):
        self.m = int(m)
        self.ones = int(ones)
        self.low_width = int(low_width)
        self.high_len = int(high_len)
        self._params = dict(m=self.m, ones=self.ones, low_width=self.low_width, high_len=self.high_len)
        self._arrays = dict(low=low, high=high, sel1=sel1, sel0=sel0)
        self._low = [int(x) for x in low]
        self._high = [int(x) for x in high]
        self._sel1 = [int(x) for x in sel1]
        self._sel0 = [int(x) for x in sel0]

    @classmethod
    def from_bits(cls, bits):
        params, arrays = enc.encode_sparse(bits)
        return cls(**params, **arrays)

    @classmethod
    def from_positions(cls, positions, m):
        params, arrays = enc.encode_sparse(positions=positions, m=m)
        return cls(**params, **arrays)

    def size_in_bits(self):
        return enc.sparse_size_bits(self.ones, self.low_width, self.high_len, len(self._sel1) + len(self._sel0))

    def _lowbits(self, j):
        return _read(self._low, j * self.low_width, self.low_width)

    def _high_select(self, k, ones):
        t = (k - 1) >> 6
        s0 = (self._sel1 if ones else self._sel0)[t]
        r = k - t * 64
        w = s0 >> 6
        x = self._high[w] if ones else self._high[w] ^ MASK64
        x &= (MASK64 << (s0 & 63)) & MASK64
        while True:
            c = x.bit_count()
            if c >= r:
                return w * 64 + _select_in_word(x, r)
            r -= c
            w += 1
            x = self._high[w] if ones else self._high[w] ^ MASK64

    def _select1(self, k):
        h = self._high_select(k, True)
        return ((h - (k - 1)) << self.low_width) | self._lowbits(k - 1)

    def _rank1(self, i):
        if self.ones == 0:
            return 0
        hb = i >> self.low_width
        if hb == 0:
            j = q = 0
        else:
            z = self._high_select(hb, False)
            j = z + 1 - hb
            q = z + 1
        base = hb << self.low_width
        high = self._high
        while j < self.ones and (high[q >> 6] >> (q & 63)) & 1:
            if base | self._lowbits(j) < i:
                j += 1
                q += 1
            else:
                break
        return j

    def _select0(self, k):
        lo, hi = 0, self.ones
        while lo < hi:
            mid = (lo + hi) // 2
            if self._select1(mid + 1) - mid < k:
                lo = mid + 1
            else:
                hi = mid
        return k - 1 + lo


class PsiArray:
    """Sampled, gap-encoded permutation; values and indices 0-based inside."""

    def __init__(self, n, sample_rate, samples, ptrs, stream):
        self.n = int(n)
        self.sample_rate = int(sample_rate)
        self._arrays = dict(samples=samples, ptrs=ptrs, stream=stream)
        self._samples = [int(x) for x in samples]
        self._ptrs = [int(x) for x in ptrs]
        self._stream = bytes(np.asarray(stream, dtype=np.uint8))

    @classmethod
    def from_values(cls, psi0, sample_rate):
        samples, ptrs, stream = enc.encode_psi(psi0, sample_rate)
        return cls(len(psi0), sample_rate, samples, ptrs, stream)

    def state(self):
        return dict(n=self.n, sample_rate=self.sample_rate), dict(self._arrays)

    def __len__(self):
        return self.n

    def size_in_bits(self):
        return enc.psi_size_bits(self.n, len(self._samples), len(self._stream))

    def _decode_block(self, b):
        t = self.sample_rate
        count = min(t, self.n - b * t)
        val = self._samples[b]
        out = [val]
        p = self._ptrs[b]
        data = self._stream
        while len(out) < count:
            tok = 0
            shift = 0
            while True:
                byte = data[p]
                p += 1
                tok |= (byte & 0x7F) << shift
                shift += 7
                if byte < 0x80:
                    break
            if tok & 1:
                for _ in range((tok >> 1) + 1):
                    val += 1
                    out.append(val)
            else:
                z = tok >> 1
                val += (z >> 1) ^ -(z & 1)
                out.append(val)
        return out

    def _psi(self, i):
        b, j = divmod(i, self.sample_rate)
        if j == 0:
            return self._samples[b]
        val = self._samples[b]
        p = self._ptrs[b]
        data = self._stream
        steps = j
        while steps:
            tok = 0
            shift = 0
            while True:
                byte = data[p]
                p += 1
                tok |= (byte & 0x7F) << shift
                shift += 7
                if byte < 0x80:
                    break
            if tok & 1:
                run = (tok >> 1) + 1
                if run >= steps:
                    return val + steps
                val += run
                steps -= run
            else:
                z = tok >> 1
                val += (z >> 1) ^ -(z & 1)
                steps -= 1
        return val

    def psi_at(self, i):
        if not 1 <= i <= self.n:
            raise PositionOutOfRange(f"psi position {i} outside [1, {self.n}]")
        return self._psi(i - 1) + 1

    def decode_all(self):
        out = []
        for b in range(len(self._samples)):
            out.extend(self._decode_block(b))
        return np.asarray(out, dtype=np.int64) + 1

    def lower_bound_increasing(self, a, b, v):
        """First i in [a, b] with psi[i] >= v, for psi increasing on [a, b]; b+1 if none."""
        a0, b0, v0 = a - 1, b - 1, v - 1
        if a0 > b0:
            return b + 1
        t = self.sample_rate
        ba = a0 // t
        lo, hi = ba + 1, b0 // t
        best = ba
        samples = self._samples
        while lo <= hi:
            mid = (lo + hi) // 2
            if samples[mid] < v0:
                best = mid
                lo = mid + 1
            else:
                hi = mid - 1
        base = best * t
        vals = self._decode_block(best)
        start = a0 if best == ba else base
        end = min(b0, base + len(vals) - 1)
        for i in range(start, end + 1):
            if vals[i - base] >= v0:
                return i + 1
        nxt = base + t
        return nxt + 1 if nxt <= b0 else b + 1

    def lower_bound_monotone(self, a, b, v):
        """First i in [a, b] with psi[i] >= v when that predicate is monotone in i."""
        lo, hi, v0 = a - 1, b, v - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self._psi(mid) < v0:
                lo = mid + 1
            else:
                hi = mid
        return lo + 1


class WaveletMatrix:
    kind = "wm"

    def __init__(self, n, sigma, zeros, levels):
        self.n = int(n)
        self.sigma = int(sigma)
        self.levels = list(levels)
        self.nlevels = len(self.levels)
        self._zeros = [int(x) for x in zeros]

    def state(self):
        return (
            dict(n=self.n, sigma=self.sigma),
            dict(zeros=np.asarray(self._zeros, dtype=np.uint64)),
            self.levels,
        )

    def __len__(self):
        return self.n

    def size_in_bits(self):
        return sum(bv.size_in_bits() for bv in self.levels) + self.nlevels * enc.bit_length(self.n)

    def _check_pos(self, i, lo=1):
        if not lo <= i <= self.n:
            raise PositionOutOfRange(f"position {i} outside [{lo}, {self.n}]")

    def _check_sym(self, c):
        if not 0 <= c < self.sigma:
            raise SymbolOutOfRange(f"symbol {c} outside [0, {self.sigma})")

    def access(self, i):
        self._check_pos(i)
        p = i - 1
        c = 0
        for lvl, bv in enumerate(self.levels):
            bit = bv._access(p)
            c = (c << 1) | bit
            r1 = bv._rank1(p)
            p = self._zeros[lvl] + r1 if bit else p - r1
        return c

    def rank(self, c, i):
        self._check_sym(c)
        self._check_pos(i, 0)
        s, p = 0, i
        L = self.nlevels
        for lvl, bv in enumerate(self.levels):
            if (c >> (L - 1 - lvl)) & 1:
                z = self._zeros[lvl]
                s = z + bv._rank1(s)
                p = z + bv._rank1(p)
            else:
                s -= bv._rank1(s)
                p -= bv._rank1(p)
        return p - s

    def select(self, c, k):
        self._check_sym(c)
        total = self.rank(c, self.n)
        if not 1 <= k <= total:
            raise RankOutOfRange(f"select({c}, {k}) with {total} occurrences")
        L = self.nlevels
        s = 0
        for lvl, bv in enumerate(self.levels):
            if (c >> (L - 1 - lvl)) & 1:
                s = self._zeros[lvl] + bv._rank1(s)
            else:
                s -= bv._rank1(s)
        p = s + k - 1
        for lvl in range(L - 1, -1, -1):
            bv = self.levels[lvl]
            if (c >> (L - 1 - lvl)) & 1:
                p = bv._select1(p - self._zeros[lvl] + 1)
            else:
                p = bv._select0(p + 1)
        return p + 1

    def _less(self, s, e, v):
        L = self.nlevels
        if v <= 0:
            return 0
        if v >= 1 << L:
            return e - s
        res = 0
        for lvl, bv in enumerate(self.levels):
            r1s = bv._rank1(s)
            r1e = bv._rank1(e)
            if (v >> (L - 1 - lvl)) & 1:
                res += (e - r1e) - (s - r1s)
                z = self._zeros[lvl]
                s = z + r1s
                e = z + r1e
            else:
                s -= r1s
                e -= r1e
            if s >= e:
                break
        return res

    def _check_range(self, i, j, a, b):
        if not (1 <= i <= j <= self.n):
            raise RangeInvalid(f"position range [{i}, {j}] invalid for n={self.n}")
        if not (0 <= a <= b < self.sigma):
            raise RangeInvalid(f"symbol range [{a}, {b}] invalid for sigma={self.sigma}")

    def count(self, i, j, a, b):
        self._check_range(i, j, a, b)
        return self._less(i - 1, j, b + 1) - self._less(i - 1, j, a)

    def count_split(self, i, j, t1, t2):
        """(values < t1, values in [t1, t2]) inside positions [i, j]: two count passes."""
        self._check_range(i, j, t1, t2)
        below = self._less(i - 1, j, t1)
        return below, self._less(i - 1, j, t2 + 1) - below


class WaveletTreeHT:
    kind = "wtht"

    def __init__(self, n, sigma, root, codes, code_lens, node_depth, node_off, node_ones,
                 node_lo, node_mid, node_hi, node_left, node_right, levels):
        self.n = int(n)
        self.sigma = int(sigma)
        self.root = int(root)
        self.levels = list(levels)
        self._arrays = dict(
            codes=codes, code_lens=code_lens, node_depth=node_depth, node_off=node_off,
            node_ones=node_ones, node_lo=node_lo, node_mid=node_mid, node_hi=node_hi,
            node_left=node_left, node_right=node_right,
        )
        self._codes = [int(x) for x in codes]
        self._lens = [int(x) for x in code_lens]
        self._dep = [int(x) for x in node_depth]
        self._off = [int(x) for x in node_off]
        self._ones = [int(x) for x in node_ones]
        self._lo = [int(x) for x in node_lo]
        self._mid = [int(x) for x in node_mid]
        self._hi = [int(x) for x in node_hi]
        self._left = [int(x) for x in node_left]
        self._right = [int(x) for x in node_right]

    def state(self):
        return dict(n=self.n, sigma=self.sigma, root=self.root), dict(self._arrays), self.levels

    def __len__(self):
        return self.n

    def size_in_bits(self):
        nodes = len(self._dep)
        per_node = 2 * enc.bit_length(self.n) + 3 * enc.bit_length(self.sigma) + 2 * enc.bit_length(nodes + self.sigma)
        table = nodes * per_node + self.sigma * (max(self._lens, default=0) + 6)
        return sum(bv.size_in_bits() for bv in self.levels) + table

    _check_pos = WaveletMatrix._check_pos
    _check_sym = WaveletMatrix._check_sym
    _check_range = WaveletMatrix._check_range

    def _r1(self, v, x):
        return self.levels[self._dep[v]]._rank1(self._off[v] + x) - self._ones[v]

    def access(self, i):
        self._check_pos(i)
        v = self.root
        p = i - 1
        while v >= 0:
            bv = self.levels[self._dep[v]]
            g = self._off[v] + p
            r1 = bv._rank1(g) - self._ones[v]
            if bv._access(g):
                p = r1
                v = self._right[v]
            else:
                p -= r1
                v = self._left[v]
        return -v - 1

    def rank(self, c, i):
        self._check_sym(c)
        self._check_pos(i, 0)
        v = self.root
        p = i
        code, length = self._codes[c], self._lens[c]
        d = 0
        while v >= 0:
            r1 = self._r1(v, p)
            if (code >> (length - 1 - d)) & 1:
                p = r1
                v = self._right[v]
            else:
                p -= r1
                v = self._left[v]
            d += 1
        return p

    def select(self, c, k):
        total = self.rank(c, self.n)
        if not 1 <= k <= total:
            raise RankOutOfRange(f"select({c}, {k}) with {total} occurrences")
        code, length = self._codes[c], self._lens[c]
        path = []
        v = self.root
        for d in range(length):
            bit = (code >> (length - 1 - d)) & 1
            path.append((v, bit))
            v = self._right[v] if bit else self._left[v]
        p = k
        for v, bit in reversed(path):
            bv = self.levels[self._dep[v]]
            off = self._off[v]
            if bit:
                g = bv._select1(self._ones[v] + p)
            else:
                g = bv._select0(off - self._ones[v] + p)
            p = g - off + 1
        return p

    def _walk(self, s, e, t1, t2):
        """Single traversal returning (values < t1, values in [t1, t2]) in [s, e)."""
        below = inside = 0
        if self.root < 0:
            c = -self.root - 1
            if c < t1:
                return e - s, 0
            return 0, (e - s if c <= t2 else 0)
        stack = [(self.root, s, e)]
        lo0, hi0 = self._lo[self.root], self._hi[self.root]
        if hi0 < t1:
            return e - s, 0
        if lo0 > t2:
            return 0, 0
        if t1 <= lo0 and hi0 <= t2:
            return 0, e - s
        while stack:
            v, s, e = stack.pop()
            r1s = self._r1(v, s)
            r1e = self._r1(v, e)
            lo, mid, hi = self._lo[v], self._mid[v], self._hi[v]
            for child, cs, ce, clo, chi in (
                (self._left[v], s - r1s, e - r1e, lo, mid),
                (self._right[v], r1s, r1e, mid + 1, hi),
            ):
                if cs >= ce or clo > t2:
                    continue
                if chi < t1:
                    below += ce - cs
                elif t1 <= clo and chi <= t2:
                    inside += ce - cs
                elif child >= 0:
                    stack.append((child, cs, ce))
        return below, inside

    def count(self, i, j, a, b):
        self._check_range(i, j, a, b)
        return self._walk(i - 1, j, a, b)[1]

    def count_split(self, i, j, t1, t2):
        self._check_range(i, j, t1, t2)
        return self._walk(i - 1, j, t1, t2)


def suffix_array(s, alphabet_size=None):
    """Prefix doubling with numpy sorts; s must end with a unique smallest symbol."""
    s = np.asarray(s, dtype=np.int64)
    n = len(s)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    _, rank = np.unique(s, return_inverse=True)
    rank = rank.astype(np.int64)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        r, sc = rank[sa], second[sa]
        diff = np.empty(n, dtype=np.int64)
        diff[0] = 0
        diff[1:] = (r[1:] != r[:-1]) | (sc[1:] != sc[:-1])
        new = np.empty(n, dtype=np.int64)
        new[sa] = np.cumsum(diff)
        rank = new
        if rank.max() == n - 1:
            return sa.astype(np.int64)
        k *= 2


encode_psi = enc.encode_psi
