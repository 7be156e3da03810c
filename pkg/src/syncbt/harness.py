"""Seeded Monte-Carlo batch runner and parameter-sweep driver.

Seeds are derived with a counter-based scheme (sha256 over base seed,
sweep point, and trial index), so trials are independent of batch size
and sweep points are independent of the rest of the grid. Each leaf gets
its own random stream keyed by leaf id, so adding a leaf to a tree does
not perturb the draws of the others.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from . import dsl
from .engine import run_episode
from .metrics import default_window, hit_time, progress_distance, summarize
from .nodes import AbsSyncParallel, Fallback, Parallel, RelSyncParallel, Sequence
from .progress import (Condition, NoisyLinearAction, PerpetualAction,
                       ProfileAction, sigmoid_profile, straight_profile)


def derive_seed(*parts):
    """Stable 64-bit seed from arbitrary repr-able parts."""
    blob = "|".join(repr(p) for p in parts).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def equidistant_barriers(n):
    """n evenly spaced barriers ending at 1.0; empty for n = 0."""
    if n < 0:
        raise ValueError("barrier count must be non-negative")
    return tuple((i + 1) / n for i in range(n))


def _build_leaf(spec, episode_seed):
    rng = random.Random(derive_seed(episode_seed, "leaf", spec.id))
    if spec.kind == "condition":
        return Condition(spec.id, spec.params.get("value", True))
    model = spec.params.get("model", "noisy_linear")
    p = spec.params
    if model == "noisy_linear":
        return NoisyLinearAction(spec.id, p["alpha"], p.get("omega", 0.0), rng)
    if model == "profile_straight":
        return ProfileAction(spec.id, straight_profile(p["increment"]))
    if model == "profile_sigmoid":
        return ProfileAction(spec.id, sigmoid_profile(p["midpoint"], p["steepness"]))
    if model == "perpetual":
        return PerpetualAction(spec.id, p["bound"], p["drift"], p["correction"],
                               rng, p.get("initial_error", 0.0))
    raise ValueError(f"unknown progress model {model!r}")


_COMPOSITES = {
    "sequence": Sequence,
    "fallback": Fallback,
    "parallel": Parallel,
}


def _build_node(spec, episode_seed):
    if spec.is_leaf:
        return _build_leaf(spec, episode_seed)
    children = [_build_node(c, episode_seed) for c in spec.children]
    if spec.kind == "parallel_abs":
        return AbsSyncParallel(spec.id, children, spec.params["barriers"])
    if spec.kind == "parallel_rel":
        return RelSyncParallel(spec.id, children, spec.params["delta"])
    return _COMPOSITES[spec.kind](spec.id, children)


class TreeFactory:
    """Builds a fresh tree instance per episode from a parsed definition."""

    def __init__(self, root_spec):
        self.spec = root_spec

    def instantiate(self, seed):
        return _build_node(self.spec, seed)


def compile_tree(root_spec):
    return TreeFactory(root_spec)


@dataclass
class ExperimentConfig:
    tree: dsl.NodeSpec
    trials: int = 1
    base_seed: int = 0
    dt: float = 1.0
    max_ticks: int = 10_000
    metric: str = "progress_distance"
    window: tuple | None = None  # None = auto (first non-Running root tick)
    p_bar: float | None = None
    t_expected: float | None = None
    child: str | None = None
    sweep: list = field(default_factory=list)  # [(path, (values...)), ...]

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        for path, values in self.sweep:
            if not values:
                raise ValueError(f"empty sweep grid for {path!r}")


def config_from_document(doc, **overrides):
    exp = dict(doc.experiment or {})
    kwargs = {
        "trials": exp.get("trials", 1),
        "base_seed": exp.get("base_seed", 0),
        "dt": exp.get("dt", 1.0),
        "max_ticks": exp.get("max_ticks", 10_000),
        "metric": exp.get("metric", "progress_distance"),
        "p_bar": exp.get("p_bar"),
        "t_expected": exp.get("t_expected"),
        "child": exp.get("child"),
        "sweep": list(exp.get("sweep", [])),
    }
    window = (doc.experiment or {}).get("window")
    if window and window != "auto":
        k1, _, k2 = window.partition(":")
        kwargs["window"] = (int(k1), int(k2))
    kwargs.update(overrides)
    return ExperimentConfig(tree=doc.root, **kwargs)


def _nodes_with_param(root_spec, param):
    found = []
    stack = [root_spec]
    while stack:
        node = stack.pop()
        stack.extend(node.children)
        if param in node.params or (
                node.kind == "action" and param in _leaf_param_names(node)):
            found.append(node)
    return found


def _leaf_param_names(spec):
    model = spec.params.get("model", "noisy_linear")
    required, optional = dsl.MODELS.get(model, ((), ()))
    return set(required) | set(optional)


def apply_point(root_spec, point):
    """Return a copy of the tree definition with sweep-point values applied.

    Paths are '<node id>.<param>'; '*' matches every node accepting the
    parameter. A numeric value for a 'barriers' parameter is interpreted
    as an equidistant barrier count.
    """
    spec = _clone(root_spec)
    for path, value in point.items():
        node_id, _, param = path.rpartition(".")
        if not node_id:
            raise ValueError(f"sweep path {path!r} must be '<node>.<param>'")
        if node_id == "*":
            targets = _nodes_with_param(spec, param)
        else:
            targets = [n for n in _iter_nodes(spec) if n.id == node_id]
        if not targets:
            raise ValueError(f"sweep path {path!r} does not resolve in the tree")
        for node in targets:
            if param == "barriers":
                node.params[param] = (value if isinstance(value, tuple)
                                      else equidistant_barriers(int(value)))
            else:
                node.params[param] = value
    return spec


def _iter_nodes(spec):
    stack = [spec]
    while stack:
        node = stack.pop()
        stack.extend(node.children)
        yield node


def _clone(spec):
    return replace(spec,
                   params=dict(spec.params),
                   children=[_clone(c) for c in spec.children])


def _point_key(point):
    return tuple(sorted(point.items()))


def trial_seed(base_seed, point, trial):
    return derive_seed(base_seed, _point_key(point), trial)


def _trial_value(config, trace):
    if config.metric == "progress_distance":
        window = config.window or default_window(trace)
        return progress_distance(trace, *window).value
    if config.metric == "predictability_distance":
        if config.child is None or config.p_bar is None or config.t_expected is None:
            raise ValueError("predictability_distance needs child, p_bar, t_expected")
        child = trace.child_ids.index(config.child)
        return hit_time(trace, child, config.p_bar) - config.t_expected
    raise ValueError(f"unknown metric {config.metric!r}")


def run_batch(config, point=None):
    """One metric value per trial at a single sweep point."""
    point = point or {}
    factory = compile_tree(apply_point(config.tree, point))
    values = []
    for trial in range(config.trials):
        seed = trial_seed(config.base_seed, point, trial)
        trace = run_episode(factory, config.dt, config.max_ticks, seed)
        values.append(_trial_value(config, trace))
    return values


@dataclass(frozen=True)
class SweepPoint:
    params: dict
    summary: "MetricsSummary"
    values: tuple


@dataclass(frozen=True)
class SweepResult:
    param_paths: tuple
    points: tuple


def sweep_grid(config):
    if not config.sweep:
        return [{}]
    paths = [path for path, _ in config.sweep]
    grids = [values for _, values in config.sweep]
    return [dict(zip(paths, combo)) for combo in itertools.product(*grids)]


def run_sweep(config, jobs=1):
    """run_batch at every grid point, summarized; points are independent."""
    points = sweep_grid(config)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(run_batch, [config] * len(points), points))
    else:
        batches = [run_batch(config, point) for point in points]
    return SweepResult(
        param_paths=tuple(path for path, _ in config.sweep),
        points=tuple(
            SweepPoint(params=point, summary=summarize(values), values=tuple(values))
            for point, values in zip(points, batches)
        ),
    )
