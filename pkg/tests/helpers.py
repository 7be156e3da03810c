"""Shared test scaffolding: stub nodes, programmatic tree factories."""

import random
from pathlib import Path

from syncbt import (AbsSyncParallel, NoisyLinearAction, Parallel,
                    RelSyncParallel, Status, derive_seed)
from syncbt.engine import TraceEntry, TrialTrace
from syncbt.nodes import Node

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

STATUS_BY_LETTER = {"S": Status.SUCCESS, "R": Status.RUNNING, "F": Status.FAILURE}


class StubNode(Node):
    """Leaf that replays a scripted status sequence (last one repeats)."""

    def __init__(self, node_id, statuses):
        super().__init__(node_id)
        self.statuses = [STATUS_BY_LETTER.get(s, s) for s in statuses]
        self.calls = 0
        self.halts = 0

    def _tick(self, ctx):
        status = self.statuses[min(self.calls, len(self.statuses) - 1)]
        self.calls += 1
        return status

    def _halt(self):
        self.halts += 1


def leaf_rng(seed, leaf_id):
    return random.Random(derive_seed(seed, "leaf", leaf_id))


def noisy_leaves(alphas, omega, seed):
    return [
        NoisyLinearAction(f"a{i + 1}", alpha, omega, leaf_rng(seed, f"a{i + 1}"))
        for i, alpha in enumerate(alphas)
    ]


def abs_factory(alphas, barriers, omega=0.0):
    def build(seed):
        return AbsSyncParallel("root", noisy_leaves(alphas, omega, seed), barriers)
    return build


def rel_factory(alphas, delta, omega=0.0):
    def build(seed):
        return RelSyncParallel("root", noisy_leaves(alphas, omega, seed), delta)
    return build


def plain_factory(alphas, omega=0.0):
    def build(seed):
        return Parallel("root", noisy_leaves(alphas, omega, seed))
    return build


def make_trace(progress_rows, dt=1.0, child_ids=None, finish_last=True):
    """Synthetic trace from raw progress rows (row 0 is the k=0 snapshot)."""
    n = len(progress_rows[0])
    child_ids = child_ids or tuple(f"c{i}" for i in range(n))
    entries = []
    last = len(progress_rows) - 1
    for k, row in enumerate(progress_rows):
        root = Status.SUCCESS if (finish_last and k == last) else Status.RUNNING
        entries.append(TraceEntry(
            k=k, t=k * dt,
            progress=tuple(row),
            status=tuple(Status.RUNNING for _ in row),
            root_status=root,
            ticked=frozenset(child_ids) if k else frozenset(),
        ))
    return TrialTrace(child_ids=tuple(child_ids), entries=entries,
                      seed=0, truncated=False)


def engine_rows(trace):
    """Engine trace as oracle-shaped rows for tick-for-tick comparison."""
    letter = {Status.SUCCESS: "S", Status.RUNNING: "R", Status.FAILURE: "F"}
    ids = trace.child_ids
    rows = []
    for entry in trace.entries:
        ticked = frozenset(i for i, cid in enumerate(ids) if cid in entry.ticked)
        rows.append((entry.k, entry.t, entry.progress,
                     tuple(letter[s] for s in entry.status),
                     ticked, letter[entry.root_status]))
    return rows
