"""Boxplot figures for sweep results.

One figure per combination of the secondary sweep parameters; the first
sweep parameter provides the x axis. Boxes are drawn from the five
summary statistics (min, q1, median, q3, max), matching the numbers in
the delimited output exactly.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _sanitize(text):
    return "".join(c if c.isalnum() or c in "._-" else "_" for c in str(text))


def render_boxplots(result, out_dir, metric_name):
    """Write one PNG per figure into out_dir; returns the written paths."""
    paths = result.param_paths
    primary = paths[0] if paths else None
    secondary = paths[1:]

    groups = {}
    for point in result.points:
        key = tuple((p, point.params[p]) for p in secondary)
        groups.setdefault(key, []).append(point)

    written = []
    for key, points in sorted(groups.items()):
        fig, ax = plt.subplots(figsize=(5, 4))
        stats = []
        for point in points:
            s = point.summary
            stats.append({
                "label": str(point.params.get(primary, "")) if primary else "",
                "whislo": s.min, "q1": s.q1, "med": s.median,
                "q3": s.q3, "whishi": s.max, "fliers": [],
            })
        ax.bxp(stats, showfliers=False)
        ax.set_ylabel(metric_name)
        if primary:
            ax.set_xlabel(primary)
        title = ", ".join(f"{p} = {v}" for p, v in key)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        suffix = "_".join(f"{_sanitize(p)}_{_sanitize(v)}" for p, v in key) or "all"
        path = out_dir / f"boxplot_{suffix}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
