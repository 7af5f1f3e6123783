"""Line-oriented query protocol shared by the index, the oracle and the CLI.

    starts-with-x X [t1 t2]      ends-with-x X [t1 t2]      uses-x X [t1 t2]
    from-x-to-y X Y              from-x-to-y-strong X Y t1 t2
    from-x-to-y-weak X Y t1 t2   starts-t t1 t2   uses-t t1 t2   trips-t t1 t2
    top-k K seq|bin [t1 t2]      top-k-starts K seq|bin [t1 t2]
"""
from .errors import QuerySyntaxError

# name -> (positional int args, accepts optional window, window required)
COMMANDS = {
    "starts-with-x": (1, True, False),
    "ends-with-x": (1, True, False),
    "uses-x": (1, True, False),
    "from-x-to-y": (2, False, False),
    "from-x-to-y-strong": (2, True, True),
    "from-x-to-y-weak": (2, True, True),
    "starts-t": (0, True, True),
    "uses-t": (0, True, True),
    "trips-t": (0, True, True),
    "top-k": (1, True, False),
    "top-k-starts": (1, True, False),
}


def parse(line):
    """-> (name, args, strategy, window) with window None or (t1, t2)."""
    parts = line.split()
    if not parts:
        raise QuerySyntaxError("empty query")
    name, rest = parts[0], parts[1:]
    if name not in COMMANDS:
        raise QuerySyntaxError(f"unknown query {name!r}")
    nargs, windowed, required = COMMANDS[name]
    strategy = None
    if name.startswith("top-k"):
        if len(rest) < 2 or rest[1] not in ("seq", "bin"):
            raise QuerySyntaxError(f"{name} needs K and a strategy (seq|bin)")
        strategy = rest.pop(1)
    try:
        nums = [int(x) for x in rest]
    except ValueError:
        raise QuerySyntaxError(f"non-integer argument in {line.strip()!r}") from None
    args, extra = nums[:nargs], nums[nargs:]
    if len(args) < nargs:
        raise QuerySyntaxError(f"{name} needs {nargs} argument(s)")
    if extra and not windowed or len(extra) not in ((0, 2) if not required else (2,)):
        raise QuerySyntaxError(f"bad argument count for {name}")
    window = tuple(extra) if extra else None
    return name, args, strategy, window


def call(engine, name, args, strategy, window):
    if name == "starts-with-x":
        return engine.starts_with_x(args[0], window)
    if name == "ends-with-x":
        return engine.ends_with_x(args[0], window)
    if name == "uses-x":
        return engine.uses_x(args[0], window)
    if name == "from-x-to-y":
        return engine.from_x_to_y(*args)
    if name == "from-x-to-y-strong":
        return engine.from_x_to_y_strong(*args, window)
    if name == "from-x-to-y-weak":
        return engine.from_x_to_y_weak(*args, window)
    if name == "starts-t":
        return engine.starts_t(window)
    if name == "uses-t":
        return engine.uses_t(window)
    if name == "trips-t":
        return engine.trips_t_estimate(window)
    if name == "top-k":
        return engine.top_k(args[0], strategy, window)
    return engine.top_k_starts(args[0], strategy, window)


def format_result(name, result):
    if name == "trips-t":
        return f"{result[0]} {result[1]:.6f}"
    if name.startswith("top-k"):
        return " ".join(f"{node}:{cnt}" for node, cnt in result)
    return str(result)


def execute(engine, line):
    name, args, strategy, window = parse(line)
    return format_result(name, call(engine, name, args, strategy, window))


def random_window(rng, sigma_t, max_width=None):
    width = rng.randint(1, max_width or sigma_t)
    width = min(width, sigma_t)
    t1 = rng.randint(0, sigma_t - width)
    return t1, t1 + width - 1


def random_queries(rng, trips, sigma_s, sigma_t, per_class, max_width=None, max_k=None):
    """Protocol lines for every query class; `rng` is a random.Random.

    Nodes are drawn from [1, sigma_s + 1] so unknown ids get exercised;
    half of the pair queries use the endpoints of an actual trip.
    """
    lines = []
    node = lambda: rng.randint(1, sigma_s + 1)
    win = lambda: "%d %d" % random_window(rng, sigma_t, max_width)
    max_k = max_k or sigma_s + 1

    def pair():
        if rng.random() < 0.5:
            nodes = trips[rng.randrange(len(trips))][0]
            return nodes[0], nodes[-1]
        return node(), node()

    for _ in range(per_class):
        x = node()
        lines.append(f"starts-with-x {x}")
        lines.append(f"starts-with-x {node()} {win()}")
        lines.append(f"ends-with-x {node()}")
        lines.append(f"ends-with-x {node()} {win()}")
        lines.append(f"uses-x {node()}")
        lines.append(f"uses-x {node()} {win()}")
        a, b = pair()
        lines.append(f"from-x-to-y {a} {b}")
        a, b = pair()
        lines.append(f"from-x-to-y-strong {a} {b} {win()}")
        a, b = pair()
        lines.append(f"from-x-to-y-weak {a} {b} {win()}")
        lines.append(f"starts-t {win()}")
        lines.append(f"uses-t {win()}")
        lines.append(f"trips-t {win()}")
        strat = rng.choice(("seq", "bin"))
        k = rng.randint(1, max_k)
        lines.append(f"top-k {k} {strat}" + (f" {win()}" if rng.random() < 0.5 else ""))
        k = rng.randint(1, max_k)
        lines.append(f"top-k-starts {k} {strat}" + (f" {win()}" if rng.random() < 0.5 else ""))
    return lines
