"""Progress-distance, predictability-distance, and batch statistics."""

import dataclasses
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syncbt import (default_window, hit_time, predictability_distance,
                    progress_distance, run_episode, step_length_bound,
                    summarize)

import oracles
from helpers import make_trace, plain_factory


def linear_rows(increments, ticks):
    rows = []
    for k in range(ticks + 1):
        rows.append(tuple(min(1.0, k * inc) for inc in increments))
    return rows


progress_vectors = st.lists(
    st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=2, max_size=4),
    min_size=2, max_size=30,
).filter(lambda rows: len({len(r) for r in rows}) == 1)


# --- progress distance ---------------------------------------------------

def test_single_child_distance_zero():
    trace = make_trace(linear_rows([0.1], 10))
    assert progress_distance(trace, 0, 10).value == 0.0


def test_equal_progress_contributes_zero():
    trace = make_trace([(0.3, 0.3), (0.5, 0.5), (1.0, 1.0)])
    assert progress_distance(trace, 0, 2).value == 0.0


def test_two_linear_children_closed_form():
    # +0.01 / +0.02 per tick; the fast child freezes at 1.0 after k = 50
    trace = make_trace(linear_rows([0.01, 0.02], 100))
    result = progress_distance(trace, 1, 100)
    assert result.value == pytest.approx(25.0, abs=1e-9)
    brute = oracles.brute_force_progress_distance(
        [e.progress for e in trace.entries], 1, 100)
    assert result.value == pytest.approx(brute, abs=1e-12)


@given(progress_vectors)
@settings(max_examples=100, deadline=None)
def test_distance_matches_brute_force(rows):
    trace = make_trace(rows)
    got = progress_distance(trace, 0, len(rows) - 1).value
    want = oracles.brute_force_progress_distance(rows, 0, len(rows) - 1)
    assert got == pytest.approx(want, abs=1e-12)
    assert got >= 0.0


@given(progress_vectors)
@settings(max_examples=100, deadline=None)
def test_distance_additivity_and_symmetry(rows):
    trace = make_trace(rows)
    last = len(rows) - 1
    mid = last // 2
    total = progress_distance(trace, 0, last).value
    if mid < last:
        left = progress_distance(trace, 0, mid).value
        right = progress_distance(trace, mid + 1, last).value
        assert total == pytest.approx(left + right, abs=1e-12)
    permuted = make_trace([tuple(reversed(r)) for r in rows])
    assert progress_distance(permuted, 0, last).value == \
        pytest.approx(total, abs=1e-12)


def test_distance_zero_iff_identical():
    trace = make_trace([(0.1, 0.1), (0.2, 0.2000001)])
    assert progress_distance(trace, 0, 1).value > 0.0


def test_window_validation():
    trace = make_trace(linear_rows([0.5, 0.5], 2))
    with pytest.raises(ValueError):
        progress_distance(trace, 0, 3)
    with pytest.raises(ValueError):
        progress_distance(trace, 2, 1)
    with pytest.raises(ValueError):
        progress_distance(trace, -1, 1)


def test_default_window_ends_at_completion():
    trace = run_episode(plain_factory((0.01, 0.02)), 1.0, 10_000, 0)
    assert default_window(trace) == (1, 100)


# --- hit time and predictability -----------------------------------------

def test_hit_time_profile():
    trace = make_trace(linear_rows([0.1], 10))
    assert hit_time(trace, 0, 0.6) == 6.0
    assert hit_time(trace, 0, 0.0) == 0.0


def test_hit_time_matches_linear_scan():
    trace = run_episode(plain_factory((0.02,), omega=0.05), 1.0, 10_000, 11)
    p_bar = 0.37
    best_t, best_gap = None, math.inf
    for entry in trace.entries:
        gap = abs(entry.progress[0] - p_bar)
        if gap < best_gap:
            best_gap, best_t = gap, entry.t
    assert hit_time(trace, 0, p_bar) == best_t


def test_hit_time_tie_prefers_earliest():
    trace = make_trace([(0.4,), (0.6,), (0.6,)])
    assert hit_time(trace, 0, 0.5) == 0.0  # 0.4 and 0.6 tie; k=0 wins


def test_predictability_zero_on_ideal_profile():
    traces = [make_trace(linear_rows([0.1], 10)) for _ in range(5)]
    result = predictability_distance(traces, 0, 0.6, t_expected=6.0)
    assert result.value == 0.0
    assert result.samples == (6.0,) * 5


def test_predictability_mean_identity():
    traces = [make_trace(linear_rows([inc], 40)) for inc in (0.05, 0.1, 0.2)]
    result = predictability_distance(traces, 0, 0.6, t_expected=6.0)
    assert result.value == pytest.approx(
        (12.0 + 6.0 + 3.0) / 3.0 - 6.0, abs=1e-12)


def test_predictability_time_shift_linearity():
    traces = [make_trace(linear_rows([inc], 40)) for inc in (0.05, 0.1, 0.2)]
    base = predictability_distance(traces, 0, 0.6, 6.0).value
    shift = 2.5
    shifted = []
    for trace in traces:
        entries = [dataclasses.replace(e, t=e.t + shift) for e in trace.entries]
        shifted.append(dataclasses.replace(trace, entries=entries))
    assert predictability_distance(shifted, 0, 0.6, 6.0).value == \
        pytest.approx(base + shift, abs=1e-12)


# --- summaries ------------------------------------------------------------

def test_summary_single_value():
    s = summarize([5.0])
    assert (s.min, s.q1, s.median, s.q3, s.max, s.n) == (5, 5, 5, 5, 5, 1)


def test_summary_even_median():
    assert summarize([1.0, 2.0, 3.0, 4.0]).median == 2.5


def test_summary_matches_sort_oracle():
    rng = random.Random(0)
    values = [rng.uniform(-50, 50) for _ in range(1000)]
    s = summarize(values)
    want = oracles.sort_based_summary(values)
    got = (s.min, s.q1, s.median, s.q3, s.max)
    assert got == pytest.approx(want, abs=1e-12)
    assert s.min <= s.q1 <= s.median <= s.q3 <= s.max


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200))
@settings(max_examples=200, deadline=None)
def test_summary_permutation_invariant(values):
    rng = random.Random(1)
    shuffled = list(values)
    rng.shuffle(shuffled)
    assert summarize(values) == summarize(shuffled)


def test_summary_rejects_empty():
    with pytest.raises(ValueError):
        summarize([])


# --- step-length bound ----------------------------------------------------

def test_step_length_bound_deterministic():
    trace = run_episode(plain_factory((0.01,)), 1.0, 1000, 0)
    assert step_length_bound(trace, 0, 0.01)
    fast = run_episode(plain_factory((0.02,)), 1.0, 1000, 0)
    assert not step_length_bound(fast, 0, 0.01)


def test_step_length_bound_noisy():
    for seed in range(50):
        trace = run_episode(plain_factory((0.02,), omega=0.05), 1.0, 10_000, seed)
        assert step_length_bound(trace, 0, 0.07)
