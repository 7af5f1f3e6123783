"""CtrIndex: the spatial CSA plus the temporal wavelet structure, and every query."""
import heapq
from collections import namedtuple
from dataclasses import asdict, dataclass

from . import _backend
from .align import align_times
from .bitvector import parse_flavor
from .csa import T_PSI_CHOICES, TERM, build_spatial, suffix_order
from .errors import ConfigurationUnsupported, WindowInvalid
from .trips import RawTrip, TimeDiscretizer, build_store
from .wavelet import build_temporal

TimeWindow = namedtuple("TimeWindow", "t1 t2")
TripsEstimate = namedtuple("TripsEstimate", "starts_based usage_based")


@dataclass
class BuildConfig:
    interval_minutes: int = 5
    mode: str = "linear"
    origin: int = None
    sigma_t: int = None
    day_types: int = 8
    day_type_table: dict = None
    t_psi: int = 32
    time_struct: str = "wtht"
    bitvector: str = "plain"
    sigma_s: int = None

    def validate(self):
        if self.t_psi not in T_PSI_CHOICES:
            raise ConfigurationUnsupported(f"t_psi must be one of {T_PSI_CHOICES}, got {self.t_psi}")
        if self.time_struct not in ("wtht", "wm"):
            raise ConfigurationUnsupported(f"unknown temporal structure {self.time_struct!r}")
        if self.bitvector not in ("plain", "rrr32", "rrr64", "rrr128"):
            raise ConfigurationUnsupported(f"unknown bitvector flavor {self.bitvector!r}")
        parse_flavor(self.bitvector)
        return self

    def discretizer(self):
        return TimeDiscretizer(self.interval_minutes, self.mode, self.origin, self.sigma_t,
                               self.day_types, self.day_type_table)


def as_window(window, sigma_t):
    if window is None:
        return None
    t1, t2 = (int(x) for x in window)
    if not 0 <= t1 <= t2 < sigma_t:
        raise WindowInvalid(f"window [{t1}, {t2}] invalid for sigma_t={sigma_t}")
    return TimeWindow(t1, t2)


class QueryMixin:
    """Shared top-k ordering and the text protocol dispatch live on both engines."""

    def window(self, window):
        return as_window(window, self.sigma_t)

    def used_nodes(self):
        raise NotImplementedError


class CtrIndex(QueryMixin):
    def __init__(self, spatial, temporal, config, stats=None):
        if spatial.n != temporal.n:
            raise ValueError("spatial and temporal structures disagree on n")
        self.spatial = spatial
        self.temporal = temporal
        self.config = config
        self.n, self.z = spatial.n, spatial.z
        self.sigma_s = spatial.sigma_s
        self.sigma_t = temporal.sigma
        self.stats = stats or {}

    # -- construction ----------------------------------------------------------
    @classmethod
    def build(cls, trips, config=None, core=None, keep_store=False, **overrides):
        """Build from RawTrips (discretized per config) or a TripStore / (nodes, codes) pairs."""
        config = config or BuildConfig()
        if overrides:
            config = BuildConfig(**{**asdict(config), **overrides})
        config.validate()
        core = core or _backend.core
        if hasattr(trips, "Icode"):
            store = trips
        else:
            trips = list(trips)
            d = config.discretizer() if trips and isinstance(trips[0], RawTrip) else None
            store = build_store(trips, d, config.sigma_s, None if d else config.sigma_t)
        if store.discretizer is not None:
            # freeze the fitted origin/alphabet so a reload discretizes the same way
            d = store.discretizer
            config = BuildConfig(**{**asdict(config), "origin": d.origin, "sigma_t": store.sigma_t})
        else:
            config = BuildConfig(**{**asdict(config), "sigma_t": store.sigma_t})
        config.sigma_s = store.sigma_s
        sa = suffix_order(store, core)
        spatial = build_spatial(store, config.t_psi, sa, core)
        aligned = align_times(store, sa)
        temporal = build_temporal(aligned.icode_psi, store.sigma_t, config.time_struct, config.bitvector, core)
        idx = cls(spatial, temporal, config)
        idx.stats = idx.describe()
        if keep_store:
            idx.store = store
            idx.sa = sa
            idx.icode_psi = aligned.icode_psi
        return idx

    def describe(self):
        sp = self.spatial.size_in_bits()
        tp = sum(bv.size_in_bits() for bv in self.temporal.levels)
        tt = self.temporal.size_in_bits()
        sb = self.n * max(1, self.sigma_s.bit_length())
        tb = self.n * max(1, (self.sigma_t - 1).bit_length())
        return dict(
            n=self.n, z=self.z, sigma_s=self.sigma_s, sigma_t=self.sigma_t,
            spatial_bits=sp, temporal_payload_bits=tp, temporal_bits=tt,
            spatial_baseline_bits=sb, temporal_baseline_bits=tb,
            spatial_ratio=sp / sb, temporal_ratio=tt / tb,
        )

    # -- spatial ---------------------------------------------------------------
    def _count(self, rng, w):
        if rng is None:
            return 0
        l, r = rng
        if w is None:
            return r - l + 1
        return self.temporal.count(l, r, w.t1, w.t2)

    def starts_with_x(self, x, window=None):
        w = self.window(window)
        if not self.spatial.p_of(x):
            return 0
        return self._count(self.spatial.bsearch([TERM, x]), w)

    def ends_with_x(self, x, window=None):
        w = self.window(window)
        if not self.spatial.p_of(x):
            return 0
        return self._count(self.spatial.bsearch([x, TERM]), w)

    def uses_x(self, x, window=None):
        w = self.window(window)
        return self._count(self.spatial.node_range(x), w)

    def _xy_range(self, x, y):
        if not (self.spatial.p_of(x) and self.spatial.p_of(y)):
            return None
        return self.spatial.bsearch([y, TERM, x])

    def from_x_to_y(self, x, y):
        return self._count(self._xy_range(x, y), None)

    def _xy_split(self, x, y, w):
        """(l, below, inside) for the Y$X range: trips starting before / inside the window."""
        rng = self._xy_range(x, y)
        if rng is None:
            return None
        l, r = rng
        alpha = self.spatial.psi_at(l)
        beta = alpha + r - l
        below, inside = self.temporal.count_split(alpha, beta, w.t1, w.t2)
        return l, below, inside

    def from_x_to_y_strong(self, x, y, window):
        w = self.window(window)
        if w is None:
            raise WindowInvalid("strong query needs a time window")
        got = self._xy_split(x, y, w)
        if got is None or got[2] == 0:
            return 0
        l, below, inside = got
        lp = l + below
        return self.temporal.count(lp, lp + inside - 1, w.t1, w.t2)

    def from_x_to_y_weak(self, x, y, window):
        w = self.window(window)
        if w is None:
            raise WindowInvalid("weak query needs a time window")
        got = self._xy_split(x, y, w)
        if got is None:
            return 0
        l, below, inside = got
        total = inside
        if below:
            total += self.temporal.count(l, l + below - 1, w.t1, self.sigma_t - 1)
        return total

    # -- temporal --------------------------------------------------------------
    def starts_t(self, window):
        w = self.window(window)
        return self.temporal.count(2, self.z + 1, w.t1, w.t2)

    def uses_t(self, window):
        w = self.window(window)
        return self.temporal.count(self.z + 2, self.n, w.t1, w.t2)

    def trips_t_estimate(self, window):
        mean_len = (self.n - self.z - 1) / self.z
        return TripsEstimate(self.starts_t(window), self.uses_t(window) / mean_len)

    # -- top-k -----------------------------------------------------------------
    def used_nodes(self):
        return [int(v) for v in self.spatial.V[1:]]

    def top_k(self, k, strategy="bin", window=None):
        w = self.window(window)
        if k < 1:
            raise ValueError("k must be at least 1")
        sp = self.spatial
        nv = sp.vocab_size
        if strategy == "seq":
            return _seq_topk(k, ((int(sp.V[p - 1]), self._count(sp.vocab_range(p), w)) for p in range(2, nv + 1)))
        if strategy != "bin":
            raise ValueError(f"unknown top-k strategy {strategy!r}")

        def seg(i, j):
            return sp._starts[i - 1], sp._starts[j] - 1

        return self._bin_topk(k, 2, nv, seg, w)

    def top_k_starts(self, k, strategy="bin", window=None):
        w = self.window(window)
        if k < 1:
            raise ValueError("k must be at least 1")
        sp = self.spatial
        nv = sp.vocab_size
        if strategy == "seq":
            return _seq_topk(k, ((int(sp.V[p - 1]), self.starts_with_x(int(sp.V[p - 1]), w)) for p in range(2, nv + 1)))
        if strategy != "bin":
            raise ValueError(f"unknown top-k strategy {strategy!r}")
        lb = sp.psi.lower_bound_monotone
        a, b = 2, self.z + 1

        def seg(i, j):
            lo = lb(a, b, sp._starts[i - 1])
            return lo, lb(lo, b, sp._starts[j]) - 1

        return self._bin_topk(k, 2, nv, seg, w)

    def _bin_topk(self, k, first, last, seg, w):
        """Binary partition of vocabulary indices [first, last] driven by a max-priority queue."""
        out = []
        if first > last:
            return out
        l, r = seg(first, last)
        pri = self._count((l, r), w) if l <= r else 0
        heap = [(-pri, first, last, l, r)] if pri else []
        V = self.spatial.V
        while heap and len(out) < k:
            negp, i, j, l, r = heapq.heappop(heap)
            if i == j:
                out.append((int(V[i - 1]), -negp))
                continue
            m = i + (j - i + 1) // 2
            ll, lr = seg(i, m - 1)
            q = lr + 1
            left = self._count((l, q - 1), w) if l <= q - 1 else 0
            right = -negp - left
            if left:
                heapq.heappush(heap, (-left, i, m - 1, l, q - 1))
            if right:
                heapq.heappush(heap, (-right, m, j, q, r))
        return out

    # -- text protocol -----------------------------------------------------------
    def run(self, line):
        from .protocol import execute
        return execute(self, line)


def _seq_topk(k, items):
    """Size-k min-heap over (count, node) pairs; result by count desc, node asc."""
    heap = []
    for node, cnt in items:
        if cnt <= 0:
            continue
        key = (cnt, -node)
        if len(heap) < k:
            heapq.heappush(heap, key)
        elif key > heap[0]:
            heapq.heapreplace(heap, key)
    return [(-neg, cnt) for cnt, neg in sorted(heap, key=lambda t: (-t[0], -t[1]))]
