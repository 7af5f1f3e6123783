"""Compressed suffix array over the terminator-augmented trip sequence.

The Psi entries of the trip terminators are redirected to the first node of
their own trip, so following Psi from a terminator walks the trip cyclically.
"""
import numpy as np

from . import _backend
from .errors import UnsupportedPattern

TERM = 0  # the collapsed `$` symbol in V and in patterns
T_PSI_CHOICES = (32, 128, 512)


def suffix_order(store, core=None):
    """0-based suffix array of the store's sequence, terminators kept distinct."""
    core = core or _backend.core
    sym = store.suffix_symbols()
    return core.suffix_array(sym, store.z + store.sigma_s + 1)


def cyclic_psi(store, sa):
    """0-based Psi with the terminator entries closed over their own trip."""
    n, z = store.n, store.z
    isa = np.empty(n, dtype=np.int64)
    isa[sa] = np.arange(n, dtype=np.int64)
    psi = isa[(sa + 1) % n]
    psi[1:z + 1] = isa[store.starts()]
    return psi, isa


class SpatialIndex:
    def __init__(self, psi, D, V, n, z, sigma_s, t_psi):
        self.psi = psi
        self.D = D
        self.V = np.asarray(V, dtype=np.int64)
        self.n, self.z, self.sigma_s, self.t_psi = int(n), int(z), int(sigma_s), int(t_psi)
        self.node_to_p = np.zeros(self.sigma_s + 1, dtype=np.int64)
        self.node_to_p[self.V[1:]] = np.arange(2, len(self.V) + 1)
        self._starts = [D.select1(p) for p in range(1, len(self.V) + 1)] + [self.n + 1]
        self._p = self.node_to_p.tolist()

    @property
    def vocab_size(self):
        return len(self.V)

    def psi_at(self, i):
        return self.psi.psi_at(i)

    def symbol_at(self, i):
        """Node id (or 0 for `$`) of the first symbol of suffix i."""
        return int(self.V[self.D.rank1(i) - 1])

    def p_of(self, x):
        """Vocabulary index of node x (1-based; V[1] is `$`), or 0 if absent."""
        if 1 <= x <= self.sigma_s:
            return self._p[x]
        return 0

    def vocab_range(self, p):
        return self._starts[p - 1], self._starts[p] - 1

    def node_range(self, x):
        p = self.p_of(x)
        if not p:
            return None
        return self.vocab_range(p)

    def frequency(self, x):
        r = self.node_range(x)
        return 0 if r is None else r[1] - r[0] + 1

    def bsearch(self, pattern):
        """Suffix range [l, r] whose cyclic expansion spells the pattern, else None.

        Pattern symbols are node ids with 0 (or '$') for the terminator. `$` may
        appear only as the last symbol or right before a single trailing node.
        """
        pat = [TERM if s == "$" else int(s) for s in pattern]
        if not pat:
            raise ValueError("empty pattern")
        last = pat[-1]
        if last == TERM:
            l, r = 2, self.z + 1
            full = False
        else:
            rng = self.node_range(last)
            if rng is None:
                return None
            l, r = rng
            full = True
        for c in reversed(pat[:-1]):
            if c == TERM:
                if not full:
                    raise UnsupportedPattern("`$` must precede a single node")
                a, b = 2, self.z + 1
                nl = self.psi.lower_bound_monotone(a, b, l)
                nr = self.psi.lower_bound_monotone(nl, b, r + 1) - 1
            else:
                rng = self.node_range(c)
                if rng is None:
                    return None
                a, b = rng
                nl = self.psi.lower_bound_increasing(a, b, l)
                nr = self.psi.lower_bound_increasing(nl, b, r + 1) - 1
            if nl > nr:
                return None
            l, r = nl, nr
            full = False
        return l, r

    def trip_nodes(self, t):
        """Reconstruct the t-th stored trip (1-based) by following Psi."""
        i = self.psi_at(t + 1)
        out = []
        while i > self.z + 1:
            out.append(self.symbol_at(i))
            i = self.psi_at(i)
        return out

    def size_in_bits(self):
        return self.psi.size_in_bits() + self.D.size_in_bits() + len(self.V) * max(1, int(self.sigma_s).bit_length())

    def state(self):
        return dict(t_psi=self.t_psi, n=self.n, z=self.z, sigma_s=self.sigma_s)


def build_spatial(store, t_psi=32, sa=None, core=None):
    core = core or _backend.core
    if sa is None:
        sa = suffix_order(store, core)
    psi, _ = cyclic_psi(store, sa)
    first = store.S[sa]
    D_bits = np.ones(store.n, dtype=np.uint8)
    D_bits[1:] = first[1:] != first[:-1]
    V = np.concatenate([[TERM], np.unique(store.S[store.S > 0])])
    D = core.SparseBitvector.from_bits(D_bits)
    return SpatialIndex(core.PsiArray.from_values(psi, t_psi), D, V, store.n, store.z, store.sigma_s, t_psi)
