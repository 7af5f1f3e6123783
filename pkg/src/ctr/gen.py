"""Synthetic trips over a Madrid-like line network, with three start-time profiles."""
import datetime as _dt
import json
import random
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import ModelInvalid
from .trips import DAY, RawTrip

RUSH_WINDOWS = {
    "morning": (7 * 3600, 9 * 3600 + 1800),
    "lunch": (13 * 3600, 14 * 3600 + 1800),
    "evening": (17 * 3600 + 1800, 20 * 3600),
}
# probabilities of (morning, evening, lunch, anywhere in the day)
PROFILES = {
    "uniform": (0.0, 0.0, 0.0, 1.0),
    "skewed": (0.30, 0.45, 0.05, 0.20),
    "very-skewed": (0.40, 0.50, 0.08, 0.02),
}
STEP_SECONDS = (60, 240)


@dataclass
class NetworkModel:
    lines: list
    switch_probs: tuple = (0.5, 0.1, 0.05, 0.02)
    length_n: int = 29
    length_p: float = 9.81 / 29
    min_length: int = 2
    name: str = "custom"
    node_lines: dict = field(init=False, repr=False)

    def __post_init__(self):
        if not self.lines:
            raise ModelInvalid("network has no lines")
        self.lines = [[int(x) for x in line] for line in self.lines]
        for k, line in enumerate(self.lines):
            if len(line) < 2:
                raise ModelInvalid(f"line {k} has fewer than 2 nodes")
            if len(set(line)) != len(line):
                raise ModelInvalid(f"line {k} visits a node twice")
            if min(line) < 1:
                raise ModelInvalid("node ids must be positive")
        self.switch_probs = tuple(float(p) for p in self.switch_probs)
        if any(not 0 <= p <= 1 for p in self.switch_probs):
            raise ModelInvalid("switch probabilities must lie in [0, 1]")
        if not 0 <= self.length_p <= 1 or self.length_n < 0 or self.min_length < 2:
            raise ModelInvalid("bad trip length distribution")
        self.node_lines = {}
        for k, line in enumerate(self.lines):
            for pos, node in enumerate(line):
                self.node_lines.setdefault(node, []).append((k, pos))

    @property
    def max_switches(self):
        return len(self.switch_probs)

    @property
    def sigma_s(self):
        return max(self.node_lines)

    @property
    def max_length(self):
        return self.min_length + self.length_n

    def to_json(self):
        return dict(name=self.name, lines=self.lines, switch_probs=list(self.switch_probs),
                    length_n=self.length_n, length_p=self.length_p, min_length=self.min_length)

    @classmethod
    def from_json(cls, d):
        return cls(d["lines"], tuple(d.get("switch_probs", (0.5, 0.1, 0.05, 0.02))),
                   d.get("length_n", 29), d.get("length_p", 9.81 / 29), d.get("min_length", 2),
                   d.get("name", "custom"))

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def default_network():
    """The shipped 23-line / 313-node network."""
    text = resources.files("ctr").joinpath("data/madrid_like.json").read_text(encoding="utf-8")
    return NetworkModel.from_json(json.loads(text))


def synthetic_network(nlines=23, nnodes=313, seed=7, length_range=(20, 30)):
    """Random line layout: every node owned by one line, lines topped up with transfer nodes.

    Used once to produce data/madrid_like.json; kept for regenerating it.
    """
    rng = random.Random(seed)
    nodes = list(range(1, nnodes + 1))
    rng.shuffle(nodes)
    own = [nodes[k::nlines] for k in range(nlines)]
    lines = []
    for k in range(nlines):
        line = list(own[k])
        target = rng.randint(*length_range)
        pool = [x for j in range(nlines) if j != k for x in own[j]]
        while len(line) < target:
            x = rng.choice(pool)
            if x not in line:
                line.insert(rng.randint(0, len(line)), x)
        lines.append(line)
    return NetworkModel(lines, name=f"synthetic-{nlines}x{nnodes}")


def _connected(model):
    seen = {model.lines[0][0]}
    todo = [model.lines[0][0]]
    while todo:
        x = todo.pop()
        for k, pos in model.node_lines[x]:
            for q in (pos - 1, pos + 1):
                if 0 <= q < len(model.lines[k]) and model.lines[k][q] not in seen:
                    seen.add(model.lines[k][q])
                    todo.append(model.lines[k][q])
    return len(seen) == len(model.node_lines)


def _walk(model, target, rng):
    lines = model.lines
    k = rng.randrange(len(lines))
    line = lines[k]
    pos = rng.randrange(len(line))
    # head for the longer side of the line so short lines truncate less
    step = 1 if len(line) - 1 - pos >= pos else -1
    trip = [line[pos]]
    seen = {line[pos]}
    switches = 0

    def options(node):
        out = []
        for kk, pp in model.node_lines[node]:
            if kk == k:
                continue
            for d in (1, -1):
                q = pp + d
                if 0 <= q < len(lines[kk]) and lines[kk][q] not in seen:
                    out.append((kk, pp, d))
        return out

    while len(trip) < target:
        node = trip[-1]
        if len(trip) > 1 and switches < model.max_switches and len(model.node_lines[node]) > 1:
            if rng.random() < model.switch_probs[switches]:
                opts = options(node)
                if opts:
                    k, pos, step = opts[rng.randrange(len(opts))]
                    switches += 1
        q = pos + step
        if not (0 <= q < len(lines[k])) or lines[k][q] in seen:
            # dead end: a transfer station may still continue on another line
            opts = options(node) if switches < model.max_switches else []
            if not opts:
                break
            k, pos, step = opts[rng.randrange(len(opts))]
            switches += 1
            q = pos + step
        pos = q
        trip.append(lines[k][pos])
        seen.add(lines[k][pos])
    return trip


def generate_paths(model, count, seed=0):
    """Node sequences only; lengths 2 + Binomial(length_n, length_p), cut short at dead ends."""
    if count < 0:
        raise ValueError("count must be non-negative")
    if not _connected(model) and len(model.lines) > 1:
        raise ModelInvalid("network is not connected")
    nprng = np.random.default_rng(seed)
    targets = model.min_length + nprng.binomial(model.length_n, model.length_p, size=count)
    rng = random.Random(int(nprng.integers(2**63)))
    paths = []
    for target in targets:
        path = _walk(model, int(target), rng)
        while len(path) < 2:
            path = _walk(model, int(target), rng)
        paths.append(path)
    return paths


@dataclass
class TimeDistribution:
    kind: str = "uniform"
    windows: dict = field(default_factory=lambda: dict(RUSH_WINDOWS))

    def __post_init__(self):
        if self.kind not in PROFILES:
            raise ModelInvalid(f"unknown time distribution {self.kind!r}; expected one of {tuple(PROFILES)}")

    @property
    def probabilities(self):
        return PROFILES[self.kind]

    def sample_seconds(self, count, rng):
        """Start offsets into the day, drawn per class probabilities."""
        cls = rng.choice(4, size=count, p=self.probabilities)
        out = rng.integers(0, DAY, size=count)
        for c, name in enumerate(("morning", "evening", "lunch")):
            sel = cls == c
            lo, hi = self.windows[name]
            out[sel] = rng.integers(lo, hi, size=int(sel.sum()))
        return out, cls


@dataclass
class DayModel:
    """Calendar days trips are spread over, uniformly."""
    first_day: str = "2023-01-01"
    ndays: int = 365

    def sample_days(self, count, rng):
        d0 = (_dt.date.fromisoformat(self.first_day) - _dt.date(1970, 1, 1)).days
        return d0 + rng.integers(0, self.ndays, size=count)


def generate_times(paths, dist, day_model=None, seed=0, last_slack=True):
    """Per-trip epoch timestamps: start by profile, then +60..240 s per node."""
    day_model = day_model or DayModel()
    rng = np.random.default_rng(seed)
    z = len(paths)
    days = day_model.sample_days(z, rng)
    secs, _ = dist.sample_seconds(z, rng)
    lens = np.array([len(p) for p in paths], dtype=np.int64)
    steps = rng.integers(STEP_SECONDS[0], STEP_SECONDS[1] + 1, size=int(lens.sum()))
    out = []
    pos = 0
    for i, p in enumerate(paths):
        l = len(p)
        inc = steps[pos:pos + l].copy()
        inc[0] = 0
        pos += l
        start = int(days[i]) * DAY + int(secs[i])
        out.append((start + np.cumsum(inc)).tolist())
    return out


def generate_trips(model=None, count=1000, dist="uniform", seed=0, day_model=None):
    model = model or default_network()
    if isinstance(dist, str):
        dist = TimeDistribution(dist)
    paths = generate_paths(model, count, seed)
    times = generate_times(paths, dist, day_model, seed + 1)
    return [RawTrip(p, t) for p, t in zip(paths, times)]
