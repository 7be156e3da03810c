"""Synchronization and predictability metrics over trial traces."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .nodes import Status


@dataclass(frozen=True)
class ProgressDistance:
    value: float
    window: tuple


@dataclass(frozen=True)
class PredictabilityDistance:
    value: float
    p_bar: float
    t_expected: float
    samples: tuple


@dataclass(frozen=True)
class MetricsSummary:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    n: int


def default_window(trace):
    """[1, k*] where k* is the first tick with a non-Running root.

    Falls back to the truncation tick when the episode never finished.
    """
    for entry in trace.entries:
        if entry.k >= 1 and entry.root_status is not Status.RUNNING:
            return (1, entry.k)
    return (1, trace.entries[-1].k)


def progress_distance(trace, k1, k2):
    """Sum of pairwise absolute progress gaps over ticks k1..k2 inclusive."""
    if not (0 <= k1 <= k2 <= trace.entries[-1].k):
        raise ValueError(f"window [{k1}, {k2}] outside trace")
    n = len(trace.child_ids)
    total = 0.0
    for entry in trace.entries[k1:k2 + 1]:
        p = entry.progress
        for i in range(n):
            pi = p[i]
            for j in range(i + 1, n):
                total += abs(pi - p[j])
    return ProgressDistance(value=total, window=(k1, k2))


def hit_time(trace, child, p_bar):
    """Time of the sample closest to p_bar; earliest tick wins ties."""
    if not trace.entries:
        raise ValueError("empty trace")
    best_t = trace.entries[0].t
    best_gap = math.inf
    for entry in trace.entries:
        gap = abs(entry.progress[child] - p_bar)
        if gap < best_gap:
            best_gap = gap
            best_t = entry.t
    return best_t


def predictability_distance(traces, child, p_bar, t_expected):
    """Mean hit time over a trial batch, relative to the expected time."""
    if not traces:
        raise ValueError("empty trial batch")
    samples = tuple(hit_time(trace, child, p_bar) for trace in traces)
    return PredictabilityDistance(
        value=math.fsum(samples) / len(samples) - t_expected,
        p_bar=p_bar,
        t_expected=t_expected,
        samples=samples,
    )


def summarize(values):
    """Five-number summary; quartiles by linear interpolation between ranks."""
    if len(values) == 0:
        raise ValueError("cannot summarize an empty list")
    arr = np.asarray(values, dtype=float)
    q1, med, q3 = np.quantile(arr, [0.25, 0.5, 0.75], method="linear")
    return MetricsSummary(
        min=float(arr.min()),
        q1=float(q1),
        median=float(med),
        q3=float(q3),
        max=float(arr.max()),
        n=len(values),
    )


def step_length_bound(trace, child, bound, eps=1e-12):
    """True iff every ticked-cycle increment of `child` stays within bound."""
    child_id = trace.child_ids[child]
    prev = trace.entries[0].progress[child]
    for entry in trace.entries[1:]:
        cur = entry.progress[child]
        if child_id in entry.ticked and abs(cur - prev) > bound + eps:
            return False
        prev = cur
    return True
