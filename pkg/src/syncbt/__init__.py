"""Behavior-tree execution with synchronized parallel nodes.

Provides the classical tick-driven node set, barrier-based and
lead-threshold-based synchronized parallels, progress-model leaves, a
seeded Monte-Carlo sweep harness, synchronization/predictability
metrics, and a small text format for tree and experiment definitions.
"""

__version__ = "0.1.0"

from .nodes import (AbsSyncParallel, Fallback, Parallel, RelSyncParallel,
                    Sequence, Status, TickContext, TreeConfigError,
                    min_progress)
from .progress import (Condition, NoisyLinearAction, PerpetualAction,
                       ProfileAction, progress_of, sigmoid_profile,
                       straight_profile)
from .engine import TrialTrace, TraceEntry, TickResult, run_episode
from .metrics import (MetricsSummary, PredictabilityDistance,
                      ProgressDistance, default_window, hit_time,
                      predictability_distance, progress_distance,
                      step_length_bound, summarize)
from .harness import (ExperimentConfig, SweepPoint, SweepResult,
                      compile_tree, config_from_document, derive_seed,
                      equidistant_barriers, run_batch, run_sweep)
from .dsl import (Diagnostic, NodeSpec, ParseError, TreeDocument,
                  parse_tree, print_tree, validate_semantics)

__all__ = [name for name in dir() if not name.startswith("_")]
