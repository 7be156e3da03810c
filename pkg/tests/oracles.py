"""Independent straight-line re-implementations used as test oracles.

Nothing here imports the engine's node classes: the simulators below walk
the synchronization pseudocode directly over plain lists so that engine
traces can be checked tick-for-tick against a second, separate path.
"""

import math

DONE = 1.0 - 1e-9


def _clamp(v):
    if v < 0.0:
        return 0.0
    if v > 1.0:
        return 1.0
    return v


def simulate_abs(alphas, barriers, dt, max_ticks):
    """Deterministic barrier-synchronized parallel of linear actions.

    Returns rows (k, t, progress tuple, status tuple, ticked index set,
    root status) with statuses as 'S'/'R'/'F' strings; row 0 is the
    initial snapshot.
    """
    n = len(alphas)
    p = [0.0] * n
    status = ["R"] * n
    rows = [(0, 0.0, tuple(p), tuple(status), frozenset(), "R")]
    for k in range(1, max_ticks + 1):
        lo = min([1.0] + p)
        barrier = math.inf
        for b in barriers:
            if b > lo:
                barrier = b
                break
        ticked = frozenset(i for i in range(n) if p[i] <= barrier)
        for i in ticked:
            p[i] = _clamp(p[i] + alphas[i])
            status[i] = "S" if p[i] >= DONE else "R"
        root = "S" if all(s == "S" for s in status) else "R"
        rows.append((k, k * dt, tuple(p), tuple(status), ticked, root))
        if root != "R":
            break
    return rows


def simulate_rel(alphas, delta, dt, max_ticks):
    """Deterministic lead-threshold parallel of linear actions."""
    n = len(alphas)
    p = [0.0] * n
    status = ["R"] * n
    rows = [(0, 0.0, tuple(p), tuple(status), frozenset(), "R")]
    for k in range(1, max_ticks + 1):
        lo = min([1.0] + p)
        ticked = frozenset(i for i in range(n) if p[i] <= lo + delta)
        for i in ticked:
            p[i] = _clamp(p[i] + alphas[i])
            status[i] = "S" if p[i] >= DONE else "R"
        root = "S" if all(s == "S" for s in status) else "R"
        rows.append((k, k * dt, tuple(p), tuple(status), ticked, root))
        if root != "R":
            break
    return rows


def brute_force_progress_distance(progress_rows, k1, k2):
    """Ordered-pair double sum with the /2, straight off the definition."""
    total = 0.0
    for k in range(k1, k2 + 1):
        p = progress_rows[k]
        for i in range(len(p)):
            for j in range(len(p)):
                total += abs(p[i] - p[j]) / 2.0
    return total


def sort_based_summary(values):
    """Five-number summary via explicit sorted ranks, linear interpolation."""
    data = sorted(values)
    n = len(data)

    def quantile(q):
        idx = q * (n - 1)
        lo = math.floor(idx)
        hi = math.ceil(idx)
        frac = idx - lo
        return data[lo] * (1.0 - frac) + data[hi] * frac

    return (data[0], quantile(0.25), quantile(0.5), quantile(0.75), data[-1])
