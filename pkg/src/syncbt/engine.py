"""Discrete-time execution loop and trial traces.

One root tick per time step; t_k is always computed as k * dt so traces
carry no accumulated float drift. Identical (tree, dt, max_ticks, seed)
yields a bit-identical trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .nodes import Status, TickContext


class TickResult(NamedTuple):
    status: Status
    ticked: frozenset


@dataclass(frozen=True)
class TraceEntry:
    k: int
    t: float
    progress: tuple          # per progress-aware leaf, trace.child_ids order
    status: tuple            # per progress-aware leaf, persisted last status
    root_status: Status
    ticked: frozenset        # node ids ticked this cycle


@dataclass
class TrialTrace:
    child_ids: tuple
    entries: list
    seed: int
    truncated: bool

    @property
    def num_ticks(self):
        return self.entries[-1].k

    def last_k(self):
        return self.entries[-1].k


def collect_progress_leaves(root):
    """Progress-aware leaves in left-to-right (preorder) order."""
    leaves = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.children:
            stack.extend(reversed(node.children))
        elif hasattr(node, "progress"):
            leaves.append(node)
    return leaves


def tick_once(root, k, dt):
    ctx = TickContext(k=k, t=k * dt, dt=dt)
    status = root.tick(ctx)
    return TickResult(status, frozenset(ctx.ticked))


def _snapshot(k, dt, leaves, root_status, ticked):
    return TraceEntry(
        k=k,
        t=k * dt,
        progress=tuple(leaf.progress for leaf in leaves),
        status=tuple(leaf.last_status for leaf in leaves),
        root_status=root_status,
        ticked=ticked,
    )


def run_episode(tree, dt, max_ticks, seed):
    """Run one seeded episode until the root finishes or max_ticks elapse.

    `tree` is either a factory with an instantiate(seed) method or a plain
    callable seed -> root node. The returned trace starts with a k=0
    snapshot of the initial state and then holds one entry per tick.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if max_ticks < 1:
        raise ValueError("max_ticks must be at least 1")
    instantiate = getattr(tree, "instantiate", tree)
    root = instantiate(seed)
    leaves = collect_progress_leaves(root)

    entries = [_snapshot(0, dt, leaves, Status.RUNNING, frozenset())]
    status = Status.RUNNING
    for k in range(1, max_ticks + 1):
        status, ticked = tick_once(root, k, dt)
        entries.append(_snapshot(k, dt, leaves, status, ticked))
        if status is not Status.RUNNING:
            break
    return TrialTrace(
        child_ids=tuple(leaf.id for leaf in leaves),
        entries=entries,
        seed=seed,
        truncated=status is Status.RUNNING,
    )
