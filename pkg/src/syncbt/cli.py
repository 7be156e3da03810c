"""Command-line entry point.

Subcommands:
  run    tick a tree once per time step and emit the episode trace
  sweep  run a Monte-Carlo parameter sweep and write a result bundle
  check  print semantic diagnostics for a tree file

Exit codes: 0 success, 1 failure (root Failure / error diagnostics),
2 truncation, 64 parse or validation error, 66 unwritable output dir.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, dsl, harness
from .engine import run_episode
from .nodes import Status

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_TRUNCATED = 2
EXIT_PARSE = 64
EXIT_OUTDIR = 66

TRACE_HEADER = ["k", "t", "child_id", "progress", "status", "ticked"]
RAW_HEADER_SUFFIX = ["trial", "value"]


def _default_seed():
    return int(os.environ.get("SYNCBT_SEED", "0"))


def _load_document(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise dsl.ParseError(f"cannot read {path}: {exc}", 1, 1)
    return dsl.parse_tree(text)


def _trace_rows(trace):
    for entry in trace.entries:
        for i, child_id in enumerate(trace.child_ids):
            yield [
                entry.k,
                repr(entry.t),
                child_id,
                repr(entry.progress[i]),
                str(entry.status[i]),
                int(child_id in entry.ticked),
            ]


def _write_trace_csv(trace, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    writer.writerows(_trace_rows(trace))


def _write_trace_json(trace, stream):
    payload = {
        "seed": trace.seed,
        "truncated": trace.truncated,
        "child_ids": list(trace.child_ids),
        "entries": [
            {
                "k": e.k,
                "t": e.t,
                "progress": list(e.progress),
                "status": [str(s) for s in e.status],
                "root_status": str(e.root_status),
                "ticked": sorted(e.ticked),
            }
            for e in trace.entries
        ],
    }
    json.dump(payload, stream, indent=2, sort_keys=True)
    stream.write("\n")


def cmd_run(args):
    try:
        doc = _load_document(args.tree_file)
        diagnostics = dsl.validate_semantics(doc)
        errors = [d for d in diagnostics if d.level == "error"]
        if errors:
            for d in errors:
                print(f"error: line {d.line}, col {d.col}: {d.message}",
                      file=sys.stderr)
            return EXIT_PARSE
        factory = harness.compile_tree(doc.root)
    except dsl.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    trace = run_episode(factory, args.dt, args.max_ticks, args.seed)
    buffer = io.StringIO()
    if args.format == "json":
        _write_trace_json(trace, buffer)
    else:
        _write_trace_csv(trace, buffer)
    if args.out:
        Path(args.out).write_text(buffer.getvalue())
    else:
        sys.stdout.write(buffer.getvalue())

    if trace.truncated:
        return EXIT_TRUNCATED
    final = trace.entries[-1].root_status
    return EXIT_OK if final is Status.SUCCESS else EXIT_FAILURE


def _raw_csv_text(result):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(result.param_paths) + RAW_HEADER_SUFFIX)
    for point in result.points:
        prefix = [point.params[p] for p in result.param_paths]
        for trial, value in enumerate(point.values):
            writer.writerow(prefix + [trial, repr(value)])
    return buffer.getvalue()


def _summary_payload(result):
    return [
        {
            "params": {p: point.params[p] for p in result.param_paths},
            "min": point.summary.min,
            "q1": point.summary.q1,
            "median": point.summary.median,
            "q3": point.summary.q3,
            "max": point.summary.max,
            "n": point.summary.n,
        }
        for point in result.points
    ]


def cmd_sweep(args):
    try:
        doc = _load_document(args.config_file)
        errors = [d for d in dsl.validate_semantics(doc) if d.level == "error"]
        if errors:
            for d in errors:
                print(f"error: line {d.line}, col {d.col}: {d.message}",
                      file=sys.stderr)
            return EXIT_PARSE
        overrides = {}
        if args.trials is not None:
            overrides["trials"] = args.trials
        if args.seed is not None:
            overrides["base_seed"] = args.seed
        config = harness.config_from_document(doc, **overrides)
    except (dsl.ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        print(f"error: output directory not writable: {exc}", file=sys.stderr)
        return EXIT_OUTDIR

    result = harness.run_sweep(config, jobs=args.jobs)

    (out_dir / "raw.csv").write_text(_raw_csv_text(result))
    (out_dir / "summary.json").write_text(
        json.dumps(_summary_payload(result), indent=2, sort_keys=True) + "\n")
    manifest = {
        "tool": "syncbt",
        "version": __version__,
        "config": doc.source,
        "base_seed": config.base_seed,
        "trials": config.trials,
        "dt": config.dt,
        "max_ticks": config.max_ticks,
        "metric": config.metric,
        "sweep": [[path, list(values)] for path, values in config.sweep],
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    if not args.no_plot:
        from . import report
        report.render_boxplots(result, out_dir, config.metric)
    return EXIT_OK


def cmd_check(args):
    try:
        doc = _load_document(args.tree_file)
    except dsl.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    diagnostics = dsl.validate_semantics(doc)
    for d in diagnostics:
        print(f"{d.level}: line {d.line}, col {d.col}: {d.message}")
    if not diagnostics:
        print("ok")
    errors = any(d.level == "error" for d in diagnostics)
    return EXIT_FAILURE if errors else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="syncbt",
        description="Behavior trees with synchronized parallel execution.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a single episode")
    p_run.add_argument("tree_file")
    p_run.add_argument("--seed", type=int, default=_default_seed())
    p_run.add_argument("--dt", type=float, default=1.0)
    p_run.add_argument("--max-ticks", type=int, default=10_000)
    p_run.add_argument("--out", help="trace file (default: stdout)")
    p_run.add_argument("--format", choices=["csv", "json"], default="csv")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a Monte-Carlo parameter sweep")
    p_sweep.add_argument("config_file")
    p_sweep.add_argument("--out", required=True, help="output bundle directory")
    p_sweep.add_argument("--trials", type=int, default=None)
    p_sweep.add_argument("--seed", type=int, default=None,
                         help="override the config base seed")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--no-plot", action="store_true",
                         help="skip boxplot figure rendering")
    p_sweep.set_defaults(func=cmd_sweep)

    p_check = sub.add_parser("check", help="validate a tree file")
    p_check.add_argument("tree_file")
    p_check.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
