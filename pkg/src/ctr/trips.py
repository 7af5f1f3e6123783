"""Trips: parsing, time discretization, canonical sorting and concatenation."""
import datetime as _dt
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyDataset,
    MalformedLine,
    NonMonotoneTimestamps,
    TimestampOutOfRange,
    TripTooShort,
)

DAY = 86400
MODES = ("linear", "cyclic-day", "cyclic-week", "day-types")
WEEKDAYS = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")


@dataclass(frozen=True)
class RawTrip:
    nodes: tuple
    timestamps: tuple

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(x) for x in self.nodes))
        object.__setattr__(self, "timestamps", tuple(int(x) for x in self.timestamps))
        if len(self.nodes) != len(self.timestamps):
            raise ValueError("nodes and timestamps differ in length")
        if len(self.nodes) < 2:
            raise TripTooShort(f"a trip needs at least 2 nodes, got {len(self.nodes)}")
        if any(x < 1 for x in self.nodes):
            raise ValueError("node ids must be positive integers")
        if any(t < 0 for t in self.timestamps):
            raise TimestampOutOfRange("timestamps must be non-negative")
        ts = self.timestamps
        for k in range(1, len(ts)):
            if ts[k] < ts[k - 1]:
                raise NonMonotoneTimestamps(f"timestamp {ts[k]} after {ts[k - 1]}")

    def __len__(self):
        return len(self.nodes)


def parse_line(line, lineno=0):
    nodes, stamps = [], []
    for tok in line.split():
        node, sep, ts = tok.partition(":")
        if not sep or not node.isdigit() or not ts.isdigit():
            raise MalformedLine(lineno, tok)
        nodes.append(int(node))
        stamps.append(int(ts))
    if any(x == 0 for x in nodes):
        raise MalformedLine(lineno, line.strip(), "node ids start at 1")
    try:
        return RawTrip(nodes, stamps)
    except (NonMonotoneTimestamps, TripTooShort) as exc:
        raise type(exc)(f"line {lineno}: {exc}") from None


def parse_trips(stream):
    """Read the trip file format; accepts a text stream or a string."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    trips = []
    for lineno, line in enumerate(stream, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        trips.append(parse_line(s, lineno))
    return trips


def read_trips(path):
    with open(path, encoding="utf-8") as fh:
        return parse_trips(fh)


def format_trip(trip):
    return " ".join(f"{n}:{t}" for n, t in zip(trip.nodes, trip.timestamps))


def write_trips(trips, fh):
    for t in trips:
        fh.write(format_trip(t))
        fh.write("\n")


# -- time discretization -------------------------------------------------------

def weekday(day):
    """Monday=0 for a day count since 1970-01-01 (a Thursday)."""
    return (day + 3) % 7


def default_day_type(day):
    """Eight day classes: season (high = June..September) x {Mon-Thu, Fri, Sat, Sun}."""
    date = _dt.date(1970, 1, 1) + _dt.timedelta(days=int(day))
    season = 1 if 6 <= date.month <= 9 else 0
    wd = weekday(day)
    kind = 0 if wd < 4 else wd - 3
    return season * 4 + kind


@dataclass
class TimeDiscretizer:
    interval_minutes: int = 5
    mode: str = "linear"
    origin: int = None          # linear mode only; None = fitted to the data
    sigma: int = None           # explicit alphabet size (linear mode)
    day_types: int = 8
    day_type_table: dict = field(default=None)

    def __post_init__(self):
        if self.interval_minutes is None or int(self.interval_minutes) < 1:
            raise ValueError("interval_minutes must be a positive integer")
        self.interval_minutes = int(self.interval_minutes)
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.mode != "linear" and (1440 % self.interval_minutes):
            raise ValueError("cyclic modes need an interval that divides 24 h")
        if self.day_type_table is not None:
            for key, cls in self.day_type_table.items():
                if not 0 <= int(cls) < self.day_types:
                    raise ValueError(f"day class {cls} for {key!r} outside [0, {self.day_types})")

    @property
    def step(self):
        return self.interval_minutes * 60

    @property
    def per_day(self):
        return DAY // self.step

    @property
    def classes(self):
        return {"linear": 1, "cyclic-day": 1, "cyclic-week": 7, "day-types": self.day_types}[self.mode]

    @property
    def sigma_t(self):
        if self.mode == "linear":
            if self.sigma is None:
                raise ValueError("linear discretizer has no alphabet size until fitted")
            return self.sigma
        return self.classes * self.per_day

    def day_class(self, day):
        if self.mode == "cyclic-day":
            return 0
        if self.mode == "cyclic-week":
            return weekday(day)
        table = self.day_type_table
        if table:
            date = (_dt.date(1970, 1, 1) + _dt.timedelta(days=int(day))).isoformat()
            for key in (date, WEEKDAYS[weekday(day)], "default"):
                if key in table:
                    return int(table[key])
        return default_day_type(day)

    def fit(self, trips):
        """Fix a data-dependent origin and alphabet for linear mode."""
        if self.mode != "linear":
            return self
        lo = min(t.timestamps[0] for t in trips)
        hi = max(t.timestamps[-1] for t in trips)
        origin = self.origin if self.origin is not None else (lo // self.step) * self.step
        sigma = self.sigma if self.sigma is not None else (hi - origin) // self.step + 1
        out = TimeDiscretizer(self.interval_minutes, self.mode, origin, sigma, self.day_types, self.day_type_table)
        return out

    def discretize(self, trip):
        ts = trip.timestamps if isinstance(trip, RawTrip) else tuple(trip)
        if self.mode == "linear":
            if self.origin is None:
                raise ValueError("linear discretizer needs an origin; call fit() first")
            codes = [(t - self.origin) // self.step for t in ts]
            if codes[0] < 0:
                raise TimestampOutOfRange(f"timestamp {ts[0]} before origin {self.origin}")
            if self.sigma is not None and codes[-1] >= self.sigma:
                raise TimestampOutOfRange(f"timestamp {ts[-1]} beyond {self.sigma} intervals")
            return codes
        # codes are taken relative to the day of the trip's first instant; later
        # instants past midnight stay in that day's last interval
        day = ts[0] // DAY
        base = self.day_class(day) * self.per_day
        top = self.per_day - 1
        start = day * DAY
        return [base + min((t - start) // self.step, top) for t in ts]

    def describe(self):
        return dict(
            interval_minutes=self.interval_minutes,
            mode=self.mode,
            origin=self.origin,
            sigma=self.sigma,
            day_types=self.day_types,
            day_type_table=self.day_type_table,
        )

    @classmethod
    def from_description(cls, d):
        return cls(**d)

    @classmethod
    def from_config(cls, path):
        """Key-value file: `key = value` lines, `#` comments; day_type_table names a JSON file."""
        kw = {}
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, val = line.partition("=")
                if not sep:
                    key, _, val = line.partition(":")
                kw[key.strip()] = val.strip()
        return cls.from_options(**kw)

    @classmethod
    def from_options(cls, interval_minutes=5, mode="linear", origin=None, sigma=None,
                     day_types=8, day_type_table=None):
        table = day_type_table
        if isinstance(table, str):
            with open(table, encoding="utf-8") as fh:
                table = json.load(fh)
        as_int = lambda v: None if v in (None, "", "auto") else int(v)
        return cls(int(interval_minutes), mode, as_int(origin), as_int(sigma), int(day_types), table)


# -- sorted store --------------------------------------------------------------

def sort_key(nodes, codes):
    return (nodes[0], nodes[-1], codes[0], tuple(nodes[1:]))


@dataclass
class TripStore:
    trips: list          # sorted (nodes, codes) pairs
    sigma_s: int
    sigma_t: int
    S: np.ndarray        # nodes with 0 for every terminator
    Icode: np.ndarray
    z: int
    n: int
    discretizer: TimeDiscretizer = None

    def starts(self):
        """0-based position in S of each trip's first node."""
        lens = np.array([len(t[0]) + 1 for t in self.trips], dtype=np.int64)
        return np.concatenate([[0], np.cumsum(lens)[:-1]])

    def suffix_symbols(self):
        """S with terminator i -> i, trailing terminator -> 0, node k -> z + k."""
        out = self.S + self.z
        ends = self.starts() + np.array([len(t[0]) for t in self.trips], dtype=np.int64)
        out[ends] = np.arange(1, self.z + 1)
        out[-1] = 0
        return out

    def raw_trips(self):
        return [(list(n), list(c)) for n, c in self.trips]


def build_store(trips, d=None, sigma_s=None, sigma_t=None):
    """Discretize (unless codes are given), sort and concatenate trips.

    `trips` holds RawTrip objects (needs a discretizer) or (nodes, codes) pairs.
    """
    trips = list(trips)
    if not trips:
        raise EmptyDataset("no trips to index")
    if isinstance(trips[0], RawTrip):
        if d is None:
            raise ValueError("raw trips need a TimeDiscretizer")
        d = d.fit(trips)
        pairs = [(t.nodes, tuple(d.discretize(t))) for t in trips]
        if sigma_t is None:
            sigma_t = d.sigma_t
    else:
        pairs = []
        for nodes, codes in trips:
            nodes, codes = tuple(int(x) for x in nodes), tuple(int(x) for x in codes)
            if len(nodes) < 2:
                raise TripTooShort("a trip needs at least 2 nodes")
            if len(nodes) != len(codes):
                raise ValueError("nodes and codes differ in length")
            pairs.append((nodes, codes))
    order = sorted(range(len(pairs)), key=lambda i: sort_key(*pairs[i]))
    pairs = [pairs[i] for i in order]

    max_node = max(max(nodes) for nodes, _ in pairs)
    max_code = max(max(codes) for _, codes in pairs)
    if min(min(codes) for _, codes in pairs) < 0:
        raise TimestampOutOfRange("negative time code")
    sigma_s = max_node if sigma_s is None else int(sigma_s)
    if max_node > sigma_s:
        raise ValueError(f"node {max_node} exceeds sigma_s={sigma_s}")
    sigma_t = max_code + 1 if sigma_t is None else int(sigma_t)
    if max_code >= sigma_t:
        raise TimestampOutOfRange(f"time code {max_code} outside [0, {sigma_t})")

    z = len(pairs)
    n = z + 1 + sum(len(p[0]) for p in pairs)
    S = np.zeros(n, dtype=np.int64)
    Icode = np.zeros(n, dtype=np.int64)
    pos = 0
    for nodes, codes in pairs:
        l = len(nodes)
        S[pos:pos + l] = nodes
        Icode[pos:pos + l] = codes
        Icode[pos + l] = codes[0]
        pos += l + 1
    return TripStore(pairs, sigma_s, sigma_t, S, Icode, z, n, d)
