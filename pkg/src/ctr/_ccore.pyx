# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled query cores: bitvectors, sampled Psi, wavelet matrix and tree, SA-IS.

Same classes and answers as ``_pycore``; the array layouts come from ``_encode``.
"""
import numpy as np

from libc.stdint cimport int64_t, uint8_t, uint16_t, uint64_t
from libc.stdlib cimport free, malloc

from . import _encode as enc
from .errors import PositionOutOfRange, RangeInvalid, RankOutOfRange, SymbolOutOfRange

cdef extern from *:
    """
    #include <stdint.h>
    #include <stdlib.h>
    #include <string.h>

    static inline int ctr_popcount(uint64_t x) { return __builtin_popcountll(x); }

    /* position of the j-th set bit (j >= 1), caller guarantees it exists */
    static inline int ctr_select64(uint64_t x, int j) {
        int shift = 0;
        for (;;) {
            int c = __builtin_popcountll(x & 0xFFu);
            if (c >= j) break;
            j -= c; x >>= 8; shift += 8;
        }
        for (;;) {
            if (x & 1u) { if (--j == 0) return shift; }
            x >>= 1; shift++;
        }
    }

    static inline uint64_t ctr_read(const uint64_t *w, int64_t pos, int width) {
        if (width == 0) return 0;
        int64_t q = pos >> 6;
        int sh = (int)(pos & 63);
        uint64_t x = w[q] >> sh;
        if (sh + width > 64) x |= w[q + 1] << (64 - sh);
        return x & ((((uint64_t)1) << width) - 1);
    }

    /* SA-IS induced sorting; s[n-1] must be the unique smallest symbol, alphabet [0, K] */
    #define CTR_TGET(i) (t[i])
    #define CTR_LMS(i) ((i) > 0 && t[i] && !t[(i) - 1])

    static void ctr_buckets(const int64_t *s, int64_t *bkt, int64_t n, int64_t K, int end) {
        int64_t i, sum = 0;
        for (i = 0; i <= K; i++) bkt[i] = 0;
        for (i = 0; i < n; i++) bkt[s[i]]++;
        for (i = 0; i <= K; i++) { sum += bkt[i]; bkt[i] = end ? sum : sum - bkt[i]; }
    }

    static void ctr_induce(const uint8_t *t, int64_t *SA, const int64_t *s, int64_t *bkt, int64_t n, int64_t K) {
        int64_t i, j;
        ctr_buckets(s, bkt, n, K, 0);
        for (i = 0; i < n; i++) { j = SA[i] - 1; if (j >= 0 && !t[j]) SA[bkt[s[j]]++] = j; }
        ctr_buckets(s, bkt, n, K, 1);
        for (i = n - 1; i >= 0; i--) { j = SA[i] - 1; if (j >= 0 && t[j]) SA[--bkt[s[j]]] = j; }
    }

    static int ctr_sais(const int64_t *s, int64_t *SA, int64_t n, int64_t K) {
        int64_t i, j;
        if (n == 1) { SA[0] = 0; return 0; }
        uint8_t *t = (uint8_t *)malloc((size_t)n);
        int64_t *bkt = (int64_t *)malloc(sizeof(int64_t) * (size_t)(K + 1));
        if (!t || !bkt) { free(t); free(bkt); return -1; }
        t[n - 1] = 1; t[n - 2] = 0;
        for (i = n - 3; i >= 0; i--)
            t[i] = (s[i] < s[i + 1] || (s[i] == s[i + 1] && t[i + 1])) ? 1 : 0;

        ctr_buckets(s, bkt, n, K, 1);
        for (i = 0; i < n; i++) SA[i] = -1;
        for (i = 1; i < n; i++) if (CTR_LMS(i)) SA[--bkt[s[i]]] = i;
        ctr_induce(t, SA, s, bkt, n, K);

        int64_t n1 = 0;
        for (i = 0; i < n; i++) if (CTR_LMS(SA[i])) SA[n1++] = SA[i];
        for (i = n1; i < n; i++) SA[i] = -1;
        int64_t name = 0, prev = -1;
        for (i = 0; i < n1; i++) {
            int64_t pos = SA[i], d;
            int diff = 0;
            for (d = 0; d < n; d++) {
                if (prev == -1 || s[pos + d] != s[prev + d] || t[pos + d] != t[prev + d]) { diff = 1; break; }
                else if (d > 0 && (CTR_LMS(pos + d) || CTR_LMS(prev + d))) break;
            }
            if (diff) { name++; prev = pos; }
            SA[n1 + pos / 2] = name - 1;
        }
        for (i = n - 1, j = n - 1; i >= n1; i--) if (SA[i] >= 0) SA[j--] = SA[i];

        int64_t *SA1 = SA, *s1 = SA + n - n1;
        if (name < n1) {
            if (ctr_sais(s1, SA1, n1, name - 1) != 0) { free(t); free(bkt); return -1; }
        } else {
            for (i = 0; i < n1; i++) SA1[s1[i]] = i;
        }

        ctr_buckets(s, bkt, n, K, 1);
        for (i = 1, j = 0; i < n; i++) if (CTR_LMS(i)) s1[j++] = i;
        for (i = 0; i < n1; i++) SA1[i] = s1[SA1[i]];
        for (i = n1; i < n; i++) SA[i] = -1;
        for (i = n1 - 1; i >= 0; i--) { j = SA[i]; SA[i] = -1; SA[--bkt[s[j]]] = j; }
        ctr_induce(t, SA, s, bkt, n, K);
        free(t); free(bkt);
        return 0;
    }

    static void ctr_put(uint8_t *out, int64_t *len, uint64_t tok) {
        for (;;) {
            uint8_t b = tok & 0x7F;
            tok >>= 7;
            if (tok) out[(*len)++] = b | 0x80;
            else { out[(*len)++] = b; return; }
        }
    }

    static int64_t ctr_encode_psi(const int64_t *psi, int64_t n, int64_t t,
                                  int64_t *samples, uint64_t *ptrs, uint8_t *out) {
        int64_t len = 0, b, nblocks = (n + t - 1) / t;
        for (b = 0; b < nblocks; b++) {
            int64_t lo = b * t, hi = lo + t < n ? lo + t : n, i, run = 0, prev = psi[lo];
            samples[b] = psi[lo];
            ptrs[b] = (uint64_t)len;
            for (i = lo + 1; i < hi; i++) {
                int64_t gap = psi[i] - prev;
                prev = psi[i];
                if (gap == 1) { run++; continue; }
                if (run) { ctr_put(out, &len, 2 * (uint64_t)(run - 1) + 1); run = 0; }
                ctr_put(out, &len, 2 * (((uint64_t)gap << 1) ^ (uint64_t)(gap >> 63)));
            }
            if (run) ctr_put(out, &len, 2 * (uint64_t)(run - 1) + 1);
        }
        ptrs[nblocks] = (uint64_t)len;
        return len;
    }
    """
    int ctr_popcount(uint64_t x) nogil
    int ctr_select64(uint64_t x, int j) nogil
    uint64_t ctr_read(const uint64_t *w, int64_t pos, int width) nogil
    int ctr_sais(const int64_t *s, int64_t *SA, int64_t n, int64_t K) nogil
    int64_t ctr_encode_psi(const int64_t *psi, int64_t n, int64_t t,
                           int64_t *samples, uint64_t *ptrs, uint8_t *out) nogil

NAME = "compiled"
DEF RRR_B = 15

cdef uint16_t RRR_PAT[1 << RRR_B]
cdef int64_t RRR_CST[RRR_B + 2]
cdef int RRR_W[RRR_B + 1]


def _init_tables():
    cdef Py_ssize_t k
    for k in range(1 << RRR_B):
        RRR_PAT[k] = enc.RRR_PATTERNS[k]
    for k in range(RRR_B + 2):
        RRR_CST[k] = enc.RRR_CLASS_START[k]
    for k in range(RRR_B + 1):
        RRR_W[k] = enc.RRR_WIDTHS[k]


_init_tables()


cdef inline const uint64_t* _p64(const uint64_t[::1] a):
    return &a[0] if a.shape[0] else NULL


def _u64(a):
    return np.ascontiguousarray(a, dtype=np.uint64)


cdef class Bitvector:
    cdef readonly Py_ssize_t m
    cdef readonly Py_ssize_t ones
    cdef dict _params
    cdef dict _arrays

    cdef Py_ssize_t _rank1(self, Py_ssize_t i) noexcept:
        return 0

    cdef Py_ssize_t _select1(self, Py_ssize_t k) noexcept:
        return 0

    cdef Py_ssize_t _select0(self, Py_ssize_t k) noexcept:
        return 0

    cdef int _access(self, Py_ssize_t i) noexcept:
        return <int>(self._rank1(i + 1) - self._rank1(i))

    def __len__(self):
        return self.m

    def rank1(self, Py_ssize_t i):
        if not 0 <= i <= self.m:
            raise PositionOutOfRange(f"rank position {i} outside [0, {self.m}]")
        return self._rank1(i)

    def rank0(self, Py_ssize_t i):
        if not 0 <= i <= self.m:
            raise PositionOutOfRange(f"rank position {i} outside [0, {self.m}]")
        return i - self._rank1(i)

    def select1(self, Py_ssize_t k):
        if not 1 <= k <= self.ones:
            raise RankOutOfRange(f"select1({k}) with {self.ones} ones")
        return self._select1(k) + 1

    def select0(self, Py_ssize_t k):
        if not 1 <= k <= self.m - self.ones:
            raise RankOutOfRange(f"select0({k}) with {self.m - self.ones} zeros")
        return self._select0(k) + 1

    def access(self, Py_ssize_t i):
        if not 1 <= i <= self.m:
            raise PositionOutOfRange(f"access position {i} outside [1, {self.m}]")
        return self._access(i - 1)

    def to_bits(self):
        out = np.empty(self.m, dtype=np.uint8)
        cdef uint8_t[::1] o = out
        cdef Py_ssize_t i
        for i in range(self.m):
            o[i] = self._access(i)
        return out

    def state(self):
        return type(self).flavor, dict(self._params), dict(self._arrays)

    def __repr__(self):
        return f"<{type(self).__name__} m={self.m} ones={self.ones}>"


cdef class PlainBitvector(Bitvector):
    flavor = "plain"
    cdef const uint64_t[::1] _words
    cdef const uint64_t[::1] _sb
    cdef const uint16_t[::1] _blk
    cdef const uint64_t* w
    cdef const uint64_t* sb
    cdef const uint16_t* blk
    cdef Py_ssize_t wpb, nblocks
    cdef readonly int factor

    def __init__(self, m, factor, words, sb, blk):
        self.m = m
        self.factor = factor
        self._params = dict(m=int(m), factor=int(factor))
        self._arrays = dict(words=words, sb=sb, blk=blk)
        self._words = _u64(words)
        self._sb = _u64(sb)
        self._blk = np.ascontiguousarray(blk, dtype=np.uint16)
        self.w = _p64(self._words)
        self.sb = _p64(self._sb)
        self.blk = &self._blk[0]
        self.wpb = factor // 2
        self.nblocks = self._blk.shape[0]
        self.ones = self._rank1(self.m)

    @classmethod
    def from_bits(cls, bits, factor=32):
        params, arrays = enc.encode_plain(bits, factor)
        return cls(**params, **arrays)

    def size_in_bits(self):
        return enc.plain_size_bits(self.m, self.factor)

    cdef Py_ssize_t _rank1(self, Py_ssize_t i) noexcept:
        cdef Py_ssize_t q = i >> 6
        cdef Py_ssize_t b = q // self.wpb
        cdef Py_ssize_t k
        cdef Py_ssize_t r = <Py_ssize_t>self.sb[q >> 10] + self.blk[b]
        for k in range(b * self.wpb, q):
            r += ctr_popcount(self.w[k])
        if i & 63:
            r += ctr_popcount(self.w[q] & ((<uint64_t>1 << (i & 63)) - 1))
        return r

    cdef inline Py_ssize_t _block_ones(self, Py_ssize_t b) noexcept:
        return <Py_ssize_t>self.sb[(b * self.wpb) >> 10] + self.blk[b]

    cdef Py_ssize_t _select1(self, Py_ssize_t k) noexcept:
        cdef Py_ssize_t lo = 0, hi = self.nblocks - 1, mid, q, r
        cdef int c
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if self._block_ones(mid) < k:
                lo = mid
            else:
                hi = mid - 1
        q = lo * self.wpb
        r = self._block_ones(lo)
        while True:
            c = ctr_popcount(self.w[q])
            if r + c >= k:
                return q * 64 + ctr_select64(self.w[q], <int>(k - r))
            r += c
            q += 1

    cdef Py_ssize_t _select0(self, Py_ssize_t k) noexcept:
        cdef Py_ssize_t bpb = self.wpb * 64
        cdef Py_ssize_t lo = 0, hi = self.nblocks - 1, mid, q, r
        cdef uint64_t x
        cdef int c
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if mid * bpb - self._block_ones(mid) < k:
                lo = mid
            else:
                hi = mid - 1
        q = lo * self.wpb
        r = lo * bpb - self._block_ones(lo)
        while True:
            x = ~self.w[q]
            c = ctr_popcount(x)
            if r + c >= k:
                return q * 64 + ctr_select64(x, <int>(k - r))
            r += c
            q += 1

    cdef int _access(self, Py_ssize_t i) noexcept:
        return <int>((self.w[i >> 6] >> (i & 63)) & 1)


cdef class RRRBitvector(Bitvector):
    flavor = "rrr"
    cdef const uint8_t[::1] _cls
    cdef const uint64_t[::1] _off
    cdef const uint64_t[::1] _rs
    cdef const uint64_t[::1] _ps
    cdef const uint8_t* cls
    cdef const uint64_t* off
    cdef const uint64_t* rs
    cdef const uint64_t* ps
    cdef Py_ssize_t nsamples
    cdef readonly int sampling
    cdef Py_ssize_t offset_bits

    def __init__(self, m, sampling, classes, offsets, rank_samples, pos_samples):
        self.m = m
        self.sampling = sampling
        self._params = dict(m=int(m), sampling=int(sampling))
        self._arrays = dict(classes=classes, offsets=offsets, rank_samples=rank_samples, pos_samples=pos_samples)
        self._cls = np.ascontiguousarray(classes, dtype=np.uint8)
        self._off = _u64(offsets)
        self._rs = _u64(rank_samples)
        self._ps = _u64(pos_samples)
        self.cls = &self._cls[0] if self._cls.shape[0] else NULL
        self.off = _p64(self._off)
        self.rs = _p64(self._rs)
        self.ps = _p64(self._ps)
        self.nsamples = self._rs.shape[0]
        cdef Py_ssize_t k, total = 0
        for k in range(self._cls.shape[0]):
            total += RRR_W[self.cls[k]]
        self.offset_bits = total
        self.ones = self._rank1(self.m)

    @classmethod
    def from_bits(cls, bits, sampling=32):
        params, arrays = enc.encode_rrr(bits, sampling)
        return cls(**params, **arrays)

    def size_in_bits(self):
        return enc.rrr_size_bits(self.m, self.sampling, self.offset_bits)

    cdef inline uint64_t _pattern(self, int c, Py_ssize_t pos) noexcept:
        return RRR_PAT[RRR_CST[c] + <Py_ssize_t>ctr_read(self.off, pos, RRR_W[c])]

    cdef Py_ssize_t _rank1(self, Py_ssize_t i) noexcept:
        cdef Py_ssize_t blk = i // RRR_B
        cdef Py_ssize_t rem = i - blk * RRR_B
        cdef Py_ssize_t s = blk // self.sampling
        cdef Py_ssize_t r = <Py_ssize_t>self.rs[s]
        cdef Py_ssize_t p = <Py_ssize_t>self.ps[s]
        cdef Py_ssize_t k
        cdef int c
        for k in range(s * self.sampling, blk):
            c = self.cls[k]
            r += c
            p += RRR_W[c]
        if rem:
            r += ctr_popcount(self._pattern(self.cls[blk], p) & ((<uint64_t>1 << rem) - 1))
        return r

    cdef Py_ssize_t _select(self, Py_ssize_t k, bint ones) noexcept:
        cdef Py_ssize_t t = self.sampling
        cdef Py_ssize_t lo = 0, hi = self.nsamples - 1, mid, b, r, p, before
        cdef int c, cnt
        cdef uint64_t pat
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            before = <Py_ssize_t>self.rs[mid]
            if not ones:
                before = mid * t * RRR_B - before
            if before < k:
                lo = mid
            else:
                hi = mid - 1
        b = lo * t
        r = <Py_ssize_t>self.rs[lo]
        if not ones:
            r = lo * t * RRR_B - r
        p = <Py_ssize_t>self.ps[lo]
        while True:
            c = self.cls[b]
            cnt = c if ones else RRR_B - c
            if r + cnt >= k:
                pat = self._pattern(c, p)
                if not ones:
                    pat ^= (1 << RRR_B) - 1
                return b * RRR_B + ctr_select64(pat, <int>(k - r))
            r += cnt
            p += RRR_W[c]
            b += 1

    cdef Py_ssize_t _select1(self, Py_ssize_t k) noexcept:
        return self._select(k, True)

    cdef Py_ssize_t _select0(self, Py_ssize_t k) noexcept:
        return self._select(k, False)

    cdef int _access(self, Py_ssize_t i) noexcept:
        cdef Py_ssize_t blk = i // RRR_B
        cdef Py_ssize_t s = blk // self.sampling
        cdef Py_ssize_t p = <Py_ssize_t>self.ps[s]
        cdef Py_ssize_t k
        for k in range(s * self.sampling, blk):
            p += RRR_W[self.cls[k]]
        return <int>((self._pattern(self.cls[blk], p) >> (i - blk * RRR_B)) & 1)


cdef class SparseBitvector(Bitvector):
    flavor = "sparse"
    cdef const uint64_t[::1] _low
    cdef const uint64_t[::1] _high
    cdef const uint64_t[::1] _sel1
    cdef const uint64_t[::1] _sel0
    cdef const uint64_t* low
    cdef const uint64_t* high
    cdef const uint64_t* sel1
    cdef const uint64_t* sel0
    cdef readonly int low_width
    cdef readonly Py_ssize_t high_len

    def __init__(self, m, ones, low_width, high_len, low, high, sel1, sel0):
        self.m = m
        self.ones = ones
        self.low_width = low_width
        self.high_len = high_len
        self._params = dict(m=int(m), ones=int(ones), low_width=int(low_width), high_len=int(high_len))
        self._arrays = dict(low=low, high=high, sel1=sel1, sel0=sel0)
        self._low = _u64(low)
        self._high = _u64(high)
        self._sel1 = _u64(sel1)
        self._sel0 = _u64(sel0)
        self.low = _p64(self._low)
        self.high = _p64(self._high)
        self.sel1 = _p64(self._sel1)
        self.sel0 = _p64(self._sel0)

    @classmethod
    def from_bits(cls, bits):
        params, arrays = enc.encode_sparse(bits)
        return cls(**params, **arrays)

    @classmethod
    def from_positions(cls, positions, m):
        params, arrays = enc.encode_sparse(positions=positions, m=m)
        return cls(**params, **arrays)

    def size_in_bits(self):
        return enc.sparse_size_bits(self.ones, self.low_width, self.high_len,
                                    self._sel1.shape[0] + self._sel0.shape[0])

    cdef inline Py_ssize_t _lowbits(self, Py_ssize_t j) noexcept:
        return <Py_ssize_t>ctr_read(self.low, j * self.low_width, self.low_width)

    cdef Py_ssize_t _high_select(self, Py_ssize_t k, bint ones) noexcept:
        cdef Py_ssize_t t = (k - 1) >> 6
        cdef Py_ssize_t s0 = <Py_ssize_t>(self.sel1[t] if ones else self.sel0[t])
        cdef Py_ssize_t r = k - t * 64
        cdef Py_ssize_t q = s0 >> 6
        cdef uint64_t x = self.high[q] if ones else ~self.high[q]
        cdef int c
        x &= ~(<uint64_t>0) << (s0 & 63)
        while True:
            c = ctr_popcount(x)
            if c >= r:
                return q * 64 + ctr_select64(x, <int>r)
            r -= c
            q += 1
            x = self.high[q] if ones else ~self.high[q]

    cdef Py_ssize_t _select1(self, Py_ssize_t k) noexcept:
        cdef Py_ssize_t h = self._high_select(k, True)
        return ((h - (k - 1)) << self.low_width) | self._lowbits(k - 1)

    cdef Py_ssize_t _rank1(self, Py_ssize_t i) noexcept:
        if self.ones == 0:
            return 0
        cdef Py_ssize_t hb = i >> self.low_width
        cdef Py_ssize_t j, q, z
        if hb == 0:
            j = 0
            q = 0
        else:
            z = self._high_select(hb, False)
            j = z + 1 - hb
            q = z + 1
        cdef Py_ssize_t base = hb << self.low_width
        while j < self.ones and (self.high[q >> 6] >> (q & 63)) & 1:
            if (base | self._lowbits(j)) < i:
                j += 1
                q += 1
            else:
                break
        return j

    cdef Py_ssize_t _select0(self, Py_ssize_t k) noexcept:
        cdef Py_ssize_t lo = 0, hi = self.ones, mid
        while lo < hi:
            mid = (lo + hi) >> 1
            if self._select1(mid + 1) - mid < k:
                lo = mid + 1
            else:
                hi = mid
        return k - 1 + lo


cdef class PsiArray:
    """Sampled, gap-encoded permutation; values and indices 0-based inside."""
    cdef readonly Py_ssize_t n
    cdef readonly Py_ssize_t sample_rate
    cdef dict _arrays
    cdef const int64_t[::1] _samples
    cdef const uint64_t[::1] _ptrs
    cdef const uint8_t[::1] _stream
    cdef const int64_t* samples
    cdef const uint64_t* ptrs
    cdef const uint8_t* stream
    cdef Py_ssize_t nblocks

    def __init__(self, n, sample_rate, samples, ptrs, stream):
        self.n = n
        self.sample_rate = sample_rate
        self._arrays = dict(samples=samples, ptrs=ptrs, stream=stream)
        self._samples = np.ascontiguousarray(samples, dtype=np.int64)
        self._ptrs = _u64(ptrs)
        st = np.ascontiguousarray(stream, dtype=np.uint8)
        if st.shape[0] == 0:
            st = np.zeros(1, dtype=np.uint8)
        self._stream = st
        self.nblocks = self._samples.shape[0]
        self.samples = &self._samples[0] if self.nblocks else NULL
        self.ptrs = _p64(self._ptrs)
        self.stream = &self._stream[0]

    @classmethod
    def from_values(cls, psi0, sample_rate):
        samples, ptrs, stream = encode_psi(psi0, sample_rate)
        return cls(len(psi0), sample_rate, samples, ptrs, stream)

    def state(self):
        return dict(n=int(self.n), sample_rate=int(self.sample_rate)), dict(self._arrays)

    def __len__(self):
        return self.n

    def size_in_bits(self):
        return enc.psi_size_bits(self.n, self.nblocks, <Py_ssize_t>self.ptrs[self.nblocks])

    cdef inline uint64_t _token(self, Py_ssize_t *p) noexcept:
        cdef uint64_t tok = 0
        cdef int shift = 0
        cdef uint8_t byte
        while True:
            byte = self.stream[p[0]]
            p[0] += 1
            tok |= (<uint64_t>(byte & 0x7F)) << shift
            shift += 7
            if byte < 0x80:
                return tok

    cdef Py_ssize_t _psi(self, Py_ssize_t i) noexcept:
        cdef Py_ssize_t b = i // self.sample_rate
        cdef Py_ssize_t steps = i - b * self.sample_rate
        cdef int64_t val = self.samples[b]
        cdef Py_ssize_t p = <Py_ssize_t>self.ptrs[b]
        cdef uint64_t tok, z
        cdef Py_ssize_t run
        while steps:
            tok = self._token(&p)
            if tok & 1:
                run = <Py_ssize_t>(tok >> 1) + 1
                if run >= steps:
                    return val + steps
                val += run
                steps -= run
            else:
                z = tok >> 1
                val += <int64_t>(z >> 1) ^ -(<int64_t>(z & 1))
                steps -= 1
        return val

    def psi_at(self, Py_ssize_t i):
        if not 1 <= i <= self.n:
            raise PositionOutOfRange(f"psi position {i} outside [1, {self.n}]")
        return self._psi(i - 1) + 1

    def decode_all(self):
        out = np.empty(self.n, dtype=np.int64)
        cdef int64_t[::1] o = out
        cdef Py_ssize_t b, i, lo, hi, p, run, k
        cdef int64_t val
        cdef uint64_t tok, z
        for b in range(self.nblocks):
            lo = b * self.sample_rate
            hi = min(self.n, lo + self.sample_rate)
            val = self.samples[b]
            o[lo] = val + 1
            p = <Py_ssize_t>self.ptrs[b]
            i = lo + 1
            while i < hi:
                tok = self._token(&p)
                if tok & 1:
                    run = <Py_ssize_t>(tok >> 1) + 1
                    for k in range(run):
                        val += 1
                        o[i] = val + 1
                        i += 1
                else:
                    z = tok >> 1
                    val += <int64_t>(z >> 1) ^ -(<int64_t>(z & 1))
                    o[i] = val + 1
                    i += 1
        return out

    cpdef Py_ssize_t lower_bound_increasing(self, Py_ssize_t a, Py_ssize_t b, Py_ssize_t v):
        """First i in [a, b] with psi[i] >= v, for psi increasing on [a, b]; b+1 if none."""
        cdef Py_ssize_t a0 = a - 1, b0 = b - 1
        cdef int64_t v0 = v - 1
        if a0 > b0:
            return b + 1
        cdef Py_ssize_t t = self.sample_rate
        cdef Py_ssize_t ba = a0 // t
        cdef Py_ssize_t lo = ba + 1, hi = b0 // t, mid, best = ba
        while lo <= hi:
            mid = (lo + hi) >> 1
            if self.samples[mid] < v0:
                best = mid
                lo = mid + 1
            else:
                hi = mid - 1
        cdef Py_ssize_t base = best * t
        cdef Py_ssize_t end = min(b0, min(self.n, base + t) - 1)
        cdef int64_t val = self.samples[best]
        cdef Py_ssize_t i = base, p = <Py_ssize_t>self.ptrs[best], run, start, q
        cdef uint64_t tok, z
        start = a0 if best == ba else base
        while True:
            if i >= start and val >= v0:
                return i + 1
            if i >= end:
                break
            tok = self._token(&p)
            if tok & 1:
                run = <Py_ssize_t>(tok >> 1) + 1
                # run covers positions i+1..i+run with values val+1..val+run
                q = max(i + 1, max(start, i + <Py_ssize_t>(v0 - val)))
                if q <= i + run and q <= end:
                    return q + 1
                i += run
                val += run
                if i >= end:
                    break
            else:
                z = tok >> 1
                val += <int64_t>(z >> 1) ^ -(<int64_t>(z & 1))
                i += 1
        cdef Py_ssize_t nxt = base + t
        return nxt + 1 if nxt <= b0 else b + 1

    cpdef Py_ssize_t lower_bound_monotone(self, Py_ssize_t a, Py_ssize_t b, Py_ssize_t v):
        """First i in [a, b] with psi[i] >= v when that predicate is monotone in i."""
        cdef Py_ssize_t lo = a - 1, hi = b, mid
        cdef Py_ssize_t v0 = v - 1
        while lo < hi:
            mid = (lo + hi) >> 1
            if self._psi(mid) < v0:
                lo = mid + 1
            else:
                hi = mid
        return lo + 1


cdef class WaveletMatrix:
    kind = "wm"
    cdef readonly Py_ssize_t n
    cdef readonly Py_ssize_t sigma
    cdef readonly Py_ssize_t nlevels
    cdef readonly list levels
    cdef Py_ssize_t z[64]

    def __init__(self, n, sigma, zeros, levels):
        self.n = n
        self.sigma = sigma
        self.levels = list(levels)
        self.nlevels = len(self.levels)
        if self.nlevels > 63:
            raise ValueError("too many levels")
        cdef Py_ssize_t k
        for k in range(self.nlevels):
            self.z[k] = int(zeros[k])

    def state(self):
        zeros = np.array([self.z[k] for k in range(self.nlevels)], dtype=np.uint64)
        return dict(n=int(self.n), sigma=int(self.sigma)), dict(zeros=zeros), self.levels

    def __len__(self):
        return self.n

    def size_in_bits(self):
        return sum(bv.size_in_bits() for bv in self.levels) + self.nlevels * enc.bit_length(self.n)

    cdef _check_range(self, Py_ssize_t i, Py_ssize_t j, Py_ssize_t a, Py_ssize_t b):
        if not (1 <= i <= j <= self.n):
            raise RangeInvalid(f"position range [{i}, {j}] invalid for n={self.n}")
        if not (0 <= a <= b < self.sigma):
            raise RangeInvalid(f"symbol range [{a}, {b}] invalid for sigma={self.sigma}")

    def access(self, Py_ssize_t i):
        if not 1 <= i <= self.n:
            raise PositionOutOfRange(f"position {i} outside [1, {self.n}]")
        cdef Py_ssize_t p = i - 1, c = 0, r1, lvl
        cdef int bit
        cdef Bitvector bv
        for lvl in range(self.nlevels):
            bv = <Bitvector>self.levels[lvl]
            bit = bv._access(p)
            c = (c << 1) | bit
            r1 = bv._rank1(p)
            p = self.z[lvl] + r1 if bit else p - r1
        return c

    cdef Py_ssize_t _rank(self, Py_ssize_t c, Py_ssize_t i):
        cdef Py_ssize_t s = 0, p = i, lvl, L = self.nlevels
        cdef Bitvector bv
        for lvl in range(L):
            bv = <Bitvector>self.levels[lvl]
            if (c >> (L - 1 - lvl)) & 1:
                s = self.z[lvl] + bv._rank1(s)
                p = self.z[lvl] + bv._rank1(p)
            else:
                s -= bv._rank1(s)
                p -= bv._rank1(p)
        return p - s

    def rank(self, Py_ssize_t c, Py_ssize_t i):
        if not 0 <= c < self.sigma:
            raise SymbolOutOfRange(f"symbol {c} outside [0, {self.sigma})")
        if not 0 <= i <= self.n:
            raise PositionOutOfRange(f"position {i} outside [0, {self.n}]")
        return self._rank(c, i)

    def select(self, Py_ssize_t c, Py_ssize_t k):
        if not 0 <= c < self.sigma:
            raise SymbolOutOfRange(f"symbol {c} outside [0, {self.sigma})")
        cdef Py_ssize_t total = self._rank(c, self.n)
        if not 1 <= k <= total:
            raise RankOutOfRange(f"select({c}, {k}) with {total} occurrences")
        cdef Py_ssize_t L = self.nlevels, s = 0, lvl, p
        cdef Bitvector bv
        for lvl in range(L):
            bv = <Bitvector>self.levels[lvl]
            if (c >> (L - 1 - lvl)) & 1:
                s = self.z[lvl] + bv._rank1(s)
            else:
                s -= bv._rank1(s)
        p = s + k - 1
        for lvl in range(L - 1, -1, -1):
            bv = <Bitvector>self.levels[lvl]
            if (c >> (L - 1 - lvl)) & 1:
                p = bv._select1(p - self.z[lvl] + 1)
            else:
                p = bv._select0(p + 1)
        return p + 1

    cdef Py_ssize_t _less(self, Py_ssize_t s, Py_ssize_t e, Py_ssize_t v):
        cdef Py_ssize_t L = self.nlevels, res = 0, lvl, r1s, r1e
        cdef Bitvector bv
        if v <= 0:
            return 0
        if v >= (<Py_ssize_t>1) << L:
            return e - s
        for lvl in range(L):
            bv = <Bitvector>self.levels[lvl]
            r1s = bv._rank1(s)
            r1e = bv._rank1(e)
            if (v >> (L - 1 - lvl)) & 1:
                res += (e - r1e) - (s - r1s)
                s = self.z[lvl] + r1s
                e = self.z[lvl] + r1e
            else:
                s -= r1s
                e -= r1e
            if s >= e:
                break
        return res

    def count(self, Py_ssize_t i, Py_ssize_t j, Py_ssize_t a, Py_ssize_t b):
        self._check_range(i, j, a, b)
        return self._less(i - 1, j, b + 1) - self._less(i - 1, j, a)

    def count_split(self, Py_ssize_t i, Py_ssize_t j, Py_ssize_t t1, Py_ssize_t t2):
        """(values < t1, values in [t1, t2]) inside positions [i, j]: two count passes."""
        self._check_range(i, j, t1, t2)
        cdef Py_ssize_t below = self._less(i - 1, j, t1)
        return below, self._less(i - 1, j, t2 + 1) - below


cdef class WaveletTreeHT:
    kind = "wtht"
    cdef readonly Py_ssize_t n
    cdef readonly Py_ssize_t sigma
    cdef readonly Py_ssize_t root
    cdef readonly list levels
    cdef dict _arrays
    cdef const int64_t[::1] _codes, _lens, _dep, _off, _ones, _lo, _mid, _hi, _left, _right
    cdef Py_ssize_t max_depth
    cdef public object code

    def __init__(self, n, sigma, root, codes, code_lens, node_depth, node_off, node_ones,
                 node_lo, node_mid, node_hi, node_left, node_right, levels):
        self.n = n
        self.sigma = sigma
        self.root = root
        self.levels = list(levels)
        self._arrays = dict(
            codes=codes, code_lens=code_lens, node_depth=node_depth, node_off=node_off,
            node_ones=node_ones, node_lo=node_lo, node_mid=node_mid, node_hi=node_hi,
            node_left=node_left, node_right=node_right,
        )
        i64 = lambda a: np.ascontiguousarray(a, dtype=np.int64)
        self._codes = i64(codes)
        self._lens = i64(code_lens)
        self._dep = i64(node_depth)
        self._off = i64(node_off)
        self._ones = i64(node_ones)
        self._lo = i64(node_lo)
        self._mid = i64(node_mid)
        self._hi = i64(node_hi)
        self._left = i64(node_left)
        self._right = i64(node_right)
        self.max_depth = len(self.levels)

    def state(self):
        return dict(n=int(self.n), sigma=int(self.sigma), root=int(self.root)), dict(self._arrays), self.levels

    def __len__(self):
        return self.n

    def size_in_bits(self):
        nodes = self._dep.shape[0]
        per_node = 2 * enc.bit_length(self.n) + 3 * enc.bit_length(self.sigma) + 2 * enc.bit_length(nodes + self.sigma)
        table = nodes * per_node + self.sigma * (max(np.asarray(self._lens).tolist(), default=0) + 6)
        return sum(bv.size_in_bits() for bv in self.levels) + table

    cdef _check_range(self, Py_ssize_t i, Py_ssize_t j, Py_ssize_t a, Py_ssize_t b):
        if not (1 <= i <= j <= self.n):
            raise RangeInvalid(f"position range [{i}, {j}] invalid for n={self.n}")
        if not (0 <= a <= b < self.sigma):
            raise RangeInvalid(f"symbol range [{a}, {b}] invalid for sigma={self.sigma}")

    cdef inline Py_ssize_t _r1(self, Py_ssize_t v, Py_ssize_t x):
        cdef Bitvector bv = <Bitvector>self.levels[self._dep[v]]
        return bv._rank1(self._off[v] + x) - self._ones[v]

    def access(self, Py_ssize_t i):
        if not 1 <= i <= self.n:
            raise PositionOutOfRange(f"position {i} outside [1, {self.n}]")
        cdef Py_ssize_t v = self.root, p = i - 1, g, r1
        cdef Bitvector bv
        while v >= 0:
            bv = <Bitvector>self.levels[self._dep[v]]
            g = self._off[v] + p
            r1 = bv._rank1(g) - self._ones[v]
            if bv._access(g):
                p = r1
                v = self._right[v]
            else:
                p -= r1
                v = self._left[v]
        return -v - 1

    cdef Py_ssize_t _rank(self, Py_ssize_t c, Py_ssize_t i):
        cdef Py_ssize_t v = self.root, p = i, d = 0, r1
        cdef int64_t code = self._codes[c], length = self._lens[c]
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

    def rank(self, Py_ssize_t c, Py_ssize_t i):
        if not 0 <= c < self.sigma:
            raise SymbolOutOfRange(f"symbol {c} outside [0, {self.sigma})")
        if not 0 <= i <= self.n:
            raise PositionOutOfRange(f"position {i} outside [0, {self.n}]")
        return self._rank(c, i)

    def select(self, Py_ssize_t c, Py_ssize_t k):
        if not 0 <= c < self.sigma:
            raise SymbolOutOfRange(f"symbol {c} outside [0, {self.sigma})")
        cdef Py_ssize_t total = self._rank(c, self.n)
        if not 1 <= k <= total:
            raise RankOutOfRange(f"select({c}, {k}) with {total} occurrences")
        cdef int64_t code = self._codes[c], length = self._lens[c]
        cdef list path = []
        cdef Py_ssize_t v = self.root, d, bit, p, g, off
        cdef Bitvector bv
        for d in range(length):
            bit = (code >> (length - 1 - d)) & 1
            path.append((v, bit))
            v = self._right[v] if bit else self._left[v]
        p = k
        for v, bit in reversed(path):
            bv = <Bitvector>self.levels[self._dep[v]]
            off = self._off[v]
            if bit:
                g = bv._select1(self._ones[v] + p)
            else:
                g = bv._select0(off - self._ones[v] + p)
            p = g - off + 1
        return p

    cdef _walk(self, Py_ssize_t s, Py_ssize_t e, Py_ssize_t t1, Py_ssize_t t2):
        """Single traversal returning (values < t1, values in [t1, t2]) in [s, e)."""
        cdef Py_ssize_t below = 0, inside = 0, c
        cdef Py_ssize_t root = self.root
        if root < 0:
            c = -root - 1
            if c < t1:
                return e - s, 0
            return 0, (e - s if c <= t2 else 0)
        cdef Py_ssize_t lo = self._lo[root], hi = self._hi[root]
        if hi < t1:
            return e - s, 0
        if lo > t2:
            return 0, 0
        if t1 <= lo and hi <= t2:
            return 0, e - s
        cdef Py_ssize_t local[3 * 64]
        cdef Py_ssize_t cap = 2 * self.max_depth + 4
        cdef Py_ssize_t *stack = local
        if cap > 64:
            stack = <Py_ssize_t*>malloc(3 * cap * sizeof(Py_ssize_t))
            if stack == NULL:
                raise MemoryError()
        cdef Py_ssize_t top = 0, v, r1s, r1e, mid, child, cs, ce, clo, chi, side
        stack[0] = root
        stack[1] = s
        stack[2] = e
        top = 1
        while top:
            top -= 1
            v = stack[3 * top]
            s = stack[3 * top + 1]
            e = stack[3 * top + 2]
            r1s = self._r1(v, s)
            r1e = self._r1(v, e)
            lo = self._lo[v]
            mid = self._mid[v]
            hi = self._hi[v]
            for side in range(2):
                if side == 0:
                    child = self._left[v]
                    cs = s - r1s
                    ce = e - r1e
                    clo = lo
                    chi = mid
                else:
                    child = self._right[v]
                    cs = r1s
                    ce = r1e
                    clo = mid + 1
                    chi = hi
                if cs >= ce or clo > t2:
                    continue
                if chi < t1:
                    below += ce - cs
                elif t1 <= clo and chi <= t2:
                    inside += ce - cs
                elif child >= 0:
                    stack[3 * top] = child
                    stack[3 * top + 1] = cs
                    stack[3 * top + 2] = ce
                    top += 1
        if stack != local:
            free(stack)
        return below, inside

    def count(self, Py_ssize_t i, Py_ssize_t j, Py_ssize_t a, Py_ssize_t b):
        self._check_range(i, j, a, b)
        return self._walk(i - 1, j, a, b)[1]

    def count_split(self, Py_ssize_t i, Py_ssize_t j, Py_ssize_t t1, Py_ssize_t t2):
        self._check_range(i, j, t1, t2)
        return self._walk(i - 1, j, t1, t2)


def suffix_array(s, alphabet_size=None):
    """SA-IS; s must end with a unique smallest symbol (0)."""
    cdef int64_t[::1] sv = np.ascontiguousarray(s, dtype=np.int64)
    cdef Py_ssize_t n = sv.shape[0]
    out = np.empty(n, dtype=np.int64)
    if n == 0:
        return out
    cdef int64_t[::1] sa = out
    cdef int64_t K = int(np.max(np.asarray(sv))) if alphabet_size is None else alphabet_size - 1
    cdef int rc
    with nogil:
        rc = ctr_sais(&sv[0], &sa[0], n, K)
    if rc != 0:
        raise MemoryError("suffix sorting ran out of memory")
    return out


def encode_psi(psi, Py_ssize_t sample_rate):
    cdef int64_t[::1] pv = np.ascontiguousarray(psi, dtype=np.int64)
    cdef Py_ssize_t n = pv.shape[0]
    cdef Py_ssize_t nblocks = (n + sample_rate - 1) // sample_rate
    samples = np.zeros(nblocks, dtype=np.int64)
    ptrs = np.zeros(nblocks + 1, dtype=np.uint64)
    buf = np.empty(max(1, 10 * n), dtype=np.uint8)
    cdef int64_t[::1] sm = samples
    cdef uint64_t[::1] pt = ptrs
    cdef uint8_t[::1] bf = buf
    if n == 0:
        return samples, ptrs, np.zeros(0, dtype=np.uint8)
    cdef int64_t used
    with nogil:
        used = ctr_encode_psi(&pv[0], n, sample_rate, &sm[0], &pt[0], &bf[0])
    return samples, ptrs, buf[:used].copy()
