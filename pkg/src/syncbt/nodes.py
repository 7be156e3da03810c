"""Tree nodes and tick propagation.

Composites: Sequence, Fallback, Parallel, plus the two synchronized
parallels (barrier-based and lead-threshold-based). Leaves live in
:mod:`syncbt.progress`.

A node that stops receiving ticks because an ancestor short-circuited is
*halted*: its internal state resets. A child of a synchronized parallel
that is withheld a tick is merely *paused*: state and progress are kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class Status(Enum):
    SUCCESS = "Success"
    RUNNING = "Running"
    FAILURE = "Failure"

    def __str__(self):
        return self.value


class TreeConfigError(Exception):
    """Raised at tree construction for invalid wiring (not at tick time)."""


@dataclass
class TickContext:
    """Per-cycle bookkeeping passed down the tree."""

    k: int
    t: float
    dt: float
    ticked: set = field(default_factory=set)


class Node:
    __slots__ = ("id", "last_status")

    def __init__(self, node_id):
        self.id = node_id
        self.last_status = Status.RUNNING

    def tick(self, ctx):
        ctx.ticked.add(self.id)
        status = self._tick(ctx)
        self.last_status = status
        return status

    def _tick(self, ctx):
        raise NotImplementedError

    def halt(self):
        """Abort: reset transient state, recursively."""
        self.last_status = Status.RUNNING
        self._halt()

    def _halt(self):
        pass

    @property
    def children(self):
        return ()


class Composite(Node):
    __slots__ = ("_children",)

    def __init__(self, node_id, children):
        super().__init__(node_id)
        if not children:
            raise TreeConfigError(f"composite {node_id!r} needs at least one child")
        self._children = tuple(children)

    @property
    def children(self):
        return self._children

    def _halt(self):
        for c in self._children:
            c.halt()


class Sequence(Composite):
    """Ticks children left to right; short-circuits on non-Success."""

    __slots__ = ()

    def _tick(self, ctx):
        for i, child in enumerate(self._children):
            status = child.tick(ctx)
            if status is not Status.SUCCESS:
                for later in self._children[i + 1:]:
                    later.halt()
                return status
        return Status.SUCCESS


class Fallback(Composite):
    """Ticks children left to right; short-circuits on non-Failure."""

    __slots__ = ()

    def _tick(self, ctx):
        for i, child in enumerate(self._children):
            status = child.tick(ctx)
            if status is not Status.FAILURE:
                for later in self._children[i + 1:]:
                    later.halt()
                return status
        return Status.FAILURE


def _aggregate(statuses):
    if all(s is Status.SUCCESS for s in statuses):
        return Status.SUCCESS
    if any(s is Status.FAILURE for s in statuses):
        return Status.FAILURE
    return Status.RUNNING


class Parallel(Composite):
    """Ticks every child each cycle."""

    __slots__ = ()

    def _tick(self, ctx):
        return _aggregate([c.tick(ctx) for c in self._children])


def min_progress(children):
    """Minimum current progress over the children, folded from 1."""
    lo = 1.0
    for c in children:
        p = c.progress
        if p < lo:
            lo = p
    return lo


def _require_progress_aware(node_id, children):
    for c in children:
        if not hasattr(c, "progress"):
            raise TreeConfigError(
                f"child {c.id!r} of synchronized parallel {node_id!r} "
                "has no progress function"
            )


class SyncParallelBase(Composite):
    __slots__ = ("_statuses",)

    def __init__(self, node_id, children):
        super().__init__(node_id, children)
        _require_progress_aware(node_id, children)
        self._statuses = [Status.RUNNING] * len(self._children)

    def _halt(self):
        self._statuses = [Status.RUNNING] * len(self._children)
        super()._halt()


class AbsSyncParallel(SyncParallelBase):
    """Parallel with fixed progress barriers.

    A child past the current barrier is paused (no tick, state kept) until
    every sibling has reached that barrier. Child statuses persist from
    their last real tick; a paused child therefore stays Running until it
    is ticked again.
    """

    __slots__ = ("barriers", "current_barrier")

    def __init__(self, node_id, children, barriers):
        super().__init__(node_id, children)
        barriers = tuple(barriers)
        for a, b in zip(barriers, barriers[1:]):
            if not a < b:
                raise TreeConfigError("barriers must be strictly increasing")
        if barriers and not (0.0 < barriers[0] and barriers[-1] <= 1.0):
            raise TreeConfigError("barriers must lie in (0, 1]")
        self.barriers = barriers
        self.current_barrier = None

    def _tick(self, ctx):
        lo = min_progress(self._children)
        barrier = math.inf
        for b in self.barriers:
            if b > lo:
                barrier = b
                break
        self.current_barrier = barrier
        for i, child in enumerate(self._children):
            if child.progress <= barrier:
                self._statuses[i] = child.tick(ctx)
        return _aggregate(self._statuses)

    def _halt(self):
        self.current_barrier = None
        super()._halt()


class RelSyncParallel(SyncParallelBase):
    """Parallel bounding each child's lead over the slowest sibling."""

    __slots__ = ("delta",)

    def __init__(self, node_id, children, delta):
        super().__init__(node_id, children)
        if not 0.0 <= delta <= 1.0:
            raise TreeConfigError("delta must lie in [0, 1]")
        self.delta = delta

    def _tick(self, ctx):
        lo = min_progress(self._children)
        cutoff = lo + self.delta
        for i, child in enumerate(self._children):
            if child.progress <= cutoff:
                self._statuses[i] = child.tick(ctx)
        return _aggregate(self._statuses)
