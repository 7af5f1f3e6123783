"""Brute-force answers by linear scan over the trips; the reference for testing."""
from .query import QueryMixin, TripsEstimate
from .errors import WindowInvalid


class Oracle(QueryMixin):
    """`trips` is a sequence of (nodes, codes) pairs in any order."""

    def __init__(self, trips, sigma_s=None, sigma_t=None):
        self.trips = [(tuple(n), tuple(c)) for n, c in trips]
        self.z = len(self.trips)
        self.n = self.z + 1 + sum(len(n) for n, _ in self.trips)
        self.sigma_s = sigma_s if sigma_s is not None else max(max(n) for n, _ in self.trips)
        self.sigma_t = sigma_t if sigma_t is not None else max(max(c) for _, c in self.trips) + 1

    @classmethod
    def from_store(cls, store):
        return cls(store.trips, store.sigma_s, store.sigma_t)

    @staticmethod
    def _in(code, w):
        return w is None or w.t1 <= code <= w.t2

    def starts_with_x(self, x, window=None):
        w = self.window(window)
        return sum(1 for n, c in self.trips if n[0] == x and self._in(c[0], w))

    def ends_with_x(self, x, window=None):
        w = self.window(window)
        return sum(1 for n, c in self.trips if n[-1] == x and self._in(c[-1], w))

    def uses_x(self, x, window=None):
        w = self.window(window)
        return sum(1 for n, c in self.trips for a, t in zip(n, c) if a == x and self._in(t, w))

    def from_x_to_y(self, x, y):
        return sum(1 for n, _ in self.trips if n[0] == x and n[-1] == y)

    def from_x_to_y_strong(self, x, y, window):
        w = self.window(window)
        if w is None:
            raise WindowInvalid("strong query needs a time window")
        return sum(1 for n, c in self.trips
                   if n[0] == x and n[-1] == y and w.t1 <= c[0] <= w.t2 and w.t1 <= c[-1] <= w.t2)

    def from_x_to_y_weak(self, x, y, window):
        w = self.window(window)
        if w is None:
            raise WindowInvalid("weak query needs a time window")
        return sum(1 for n, c in self.trips if n[0] == x and n[-1] == y and c[0] <= w.t2 and c[-1] >= w.t1)

    def starts_t(self, window):
        w = self.window(window)
        return sum(1 for _, c in self.trips if w.t1 <= c[0] <= w.t2)

    def uses_t(self, window):
        w = self.window(window)
        return sum(1 for _, c in self.trips for t in c if w.t1 <= t <= w.t2)

    def trips_t_estimate(self, window):
        mean_len = (self.n - self.z - 1) / self.z
        return TripsEstimate(self.starts_t(window), self.uses_t(window) / mean_len)

    def _rank(self, k, counts):
        items = sorted(((node, cnt) for node, cnt in counts.items() if cnt > 0), key=lambda t: (-t[1], t[0]))
        return items[:k]

    def top_k(self, k, strategy="seq", window=None):
        w = self.window(window)
        if k < 1:
            raise ValueError("k must be at least 1")
        counts = {}
        for n, c in self.trips:
            for a, t in zip(n, c):
                if self._in(t, w):
                    counts[a] = counts.get(a, 0) + 1
        return self._rank(k, counts)

    def top_k_starts(self, k, strategy="seq", window=None):
        w = self.window(window)
        if k < 1:
            raise ValueError("k must be at least 1")
        counts = {}
        for n, c in self.trips:
            if self._in(c[0], w):
                counts[n[0]] = counts.get(n[0], 0) + 1
        return self._rank(k, counts)

    def run(self, line):
        from .protocol import execute
        return execute(self, line)
