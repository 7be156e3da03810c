"""Progress-aware leaf behaviors.

All progress values are normalized to [0, 1]. Leaves draw noise only on
cycles where they actually receive a tick, so pausing a leaf freezes both
its progress and its random stream.
"""

from __future__ import annotations

import math

from .nodes import Node, Status

# an action succeeds once its progress is within EPS_DONE of 1
EPS_DONE = 1e-9


def clamp(value):
    if value < 0.0:
        return 0.0
    if value > 1.0:
        return 1.0
    return value


def progress_of(leaf):
    """Current progress of a progress-aware leaf; pure read."""
    try:
        return leaf.progress
    except AttributeError:
        raise TypeError(f"node {leaf.id!r} is not progress-aware") from None


class Condition(Node):
    """Evaluates a predicate; returns Success or Failure, never Running."""

    __slots__ = ("predicate",)

    def __init__(self, node_id, predicate):
        super().__init__(node_id)
        if isinstance(predicate, bool):
            value = predicate
            predicate = lambda: value
        self.predicate = predicate

    def _tick(self, ctx):
        return Status.SUCCESS if self.predicate() else Status.FAILURE


class NoisyLinearAction(Node):
    """Progress grows by a fixed increment plus uniform noise per tick.

    p_k = clamp(p_{k-1} + alpha + u),  u ~ U[-omega_bar, +omega_bar]
    """

    __slots__ = ("alpha", "omega_bar", "progress", "_rng")

    def __init__(self, node_id, alpha, omega_bar, rng):
        super().__init__(node_id)
        if not alpha > 0.0:
            raise ValueError("alpha must be positive")
        if omega_bar < 0.0:
            raise ValueError("omega_bar must be non-negative")
        self.alpha = alpha
        self.omega_bar = omega_bar
        self.progress = 0.0
        self._rng = rng

    def _tick(self, ctx):
        w = self.omega_bar
        u = self._rng.uniform(-w, w) if w > 0.0 else 0.0
        self.progress = clamp(self.progress + self.alpha + u)
        return Status.SUCCESS if self.progress >= 1.0 - EPS_DONE else Status.RUNNING

    def _halt(self):
        self.progress = 0.0


class ProfileAction(Node):
    """Deterministic progress-over-time profile, indexed by own tick count."""

    __slots__ = ("_profile", "ticks", "progress")

    def __init__(self, node_id, profile):
        super().__init__(node_id)
        self._profile = profile
        self.ticks = 0
        self.progress = profile(0)

    def _tick(self, ctx):
        self.ticks += 1
        self.progress = self._profile(self.ticks)
        return Status.SUCCESS if self.progress >= 1.0 - EPS_DONE else Status.RUNNING

    def _halt(self):
        self.ticks = 0
        self.progress = self._profile(0)


def straight_profile(increment):
    """Linear profile: p(k) = min(k * increment, 1)."""
    if not increment > 0.0:
        raise ValueError("increment must be positive")

    def profile(k):
        return min(k * increment, 1.0)

    return profile


def sigmoid_profile(midpoint, steepness):
    """Logistic S-curve rescaled to p(0) = 0, p(midpoint) = 0.5, p(2m) = 1.

    Clamped to 1 past 2*midpoint so the profile completes in finite time.
    """
    if not (midpoint > 0 and steepness > 0.0):
        raise ValueError("midpoint and steepness must be positive")

    def raw(k):
        return 1.0 / (1.0 + math.exp(-steepness * (k - midpoint)))

    lo = raw(0)
    span = raw(2 * midpoint) - lo

    def profile(k):
        if k >= 2 * midpoint:
            return 1.0
        return clamp((raw(k) - lo) / span)

    return profile


class PerpetualAction(Node):
    """No finite duration; progress is a binary on-track indicator.

    Holds an abstract reference error: each tick removes correction_rate
    (floored at 0) and adds a uniform drift draw in [0, drift_rate].
    Progress is 1 while the error is within error_bound, 0 otherwise.
    Never returns Success.
    """

    __slots__ = ("error_bound", "drift_rate", "correction_rate", "error",
                 "_initial_error", "progress", "_rng")

    def __init__(self, node_id, error_bound, drift_rate, correction_rate,
                 rng, initial_error=0.0):
        super().__init__(node_id)
        if error_bound < 0.0 or drift_rate < 0.0 or correction_rate < 0.0:
            raise ValueError("perpetual parameters must be non-negative")
        if initial_error < 0.0:
            raise ValueError("initial error must be non-negative")
        self.error_bound = error_bound
        self.drift_rate = drift_rate
        self.correction_rate = correction_rate
        self.error = initial_error
        self._initial_error = initial_error
        self.progress = 1.0 if initial_error <= error_bound else 0.0
        self._rng = rng

    def _tick(self, ctx):
        error = max(0.0, self.error - self.correction_rate)
        error += self._rng.uniform(0.0, self.drift_rate)
        self.error = error
        self.progress = 1.0 if error <= self.error_bound else 0.0
        return Status.RUNNING

    def _halt(self):
        self.error = self._initial_error
        self.progress = 1.0 if self._initial_error <= self.error_bound else 0.0
