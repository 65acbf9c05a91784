"""Rendering of per-Hamiltonian iteration-count comparisons.

Reads the results CSV produced by the learning harness and draws one bar
group per hypothesis with one bar per mode: a solid bar up to the mean
number of iterations over successful runs, a translucent band spanning
+/- one standard deviation, and a hatched bar with an infinity annotation
for (mode, hypothesis) groups that never converged.  Statistics are always
recomputed from the raw rows so the figure is auditable against the CSV.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

REQUIRED_COLUMNS = (
    "mode",
    "set",
    "true_index",
    "true_label",
    "trial",
    "seed",
    "threshold",
    "iterations",
    "status",
    "wall_time_ms",
)

# accept the command-line spellings of the modes as aliases
MODE_ALIASES = {
    "baseline-search": "baseline",
    "grid-adaptive": "grid_adaptive",
}

MODE_COLORS = {
    "baseline": "#c44e52",
    "grid_adaptive": "#dd8452",
    "optimized": "#4c72b0",
}


class SchemaError(ValueError):
    """The CSV does not have the expected columns."""


class EmptyCsvError(ValueError):
    """The CSV has no data rows (after filtering)."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    output_image: str
    threshold: Optional[float] = None
    modes: Optional[tuple[str, ...]] = None
    title: str = "Iterations to convergence per Hamiltonian"

    def normalized_modes(self) -> Optional[tuple[str, ...]]:
        if self.modes is None:
            return None
        return tuple(MODE_ALIASES.get(m, m) for m in self.modes)


@dataclass(frozen=True)
class GroupStats:
    """Statistics for one (mode, hypothesis) bar, recomputed from rows."""

    mode: str
    label: str
    mean: Optional[float]  # None when no trial converged
    std: Optional[float]
    failures: int
    trials: int


def load_rows(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in REQUIRED_COLUMNS:
            if column not in header:
                raise SchemaError(f"missing required column {column!r} in {path}")
        rows = list(reader)
    if not rows:
        raise EmptyCsvError(f"no data rows in {path}")
    return rows


def _filter(rows: list[dict], spec: PlotSpec) -> list[dict]:
    modes = spec.normalized_modes()
    out = []
    for row in rows:
        if spec.threshold is not None and float(row["threshold"]) != spec.threshold:
            continue
        if modes is not None and row["mode"] not in modes:
            continue
        out.append(row)
    if not out:
        raise EmptyCsvError(
            f"no rows left after filtering (threshold={spec.threshold}, "
            f"modes={modes})"
        )
    return out


def compute_stats(rows: list[dict]) -> tuple[list[str], list[str], list[GroupStats]]:
    """Per-(mode, hypothesis) statistics.

    Returns (labels in first-seen true_index order, modes in first-seen
    order, flat list of GroupStats).  Mean/std cover successful runs only;
    a group with zero successes gets mean = std = None.
    """
    labels: list[str] = []
    modes: list[str] = []
    buckets: dict[tuple[str, str], list[Optional[int]]] = {}
    for row in rows:
        label, mode = row["true_label"], row["mode"]
        if label not in labels:
            labels.append(label)
        if mode not in modes:
            modes.append(mode)
        iters = int(row["iterations"]) if row["status"] == "success" else None
        buckets.setdefault((mode, label), []).append(iters)

    stats = []
    for mode in modes:
        for label in labels:
            runs = buckets.get((mode, label), [])
            good = [x for x in runs if x is not None]
            stats.append(
                GroupStats(
                    mode=mode,
                    label=label,
                    mean=float(np.mean(good)) if good else None,
                    std=float(np.std(good)) if good else None,
                    failures=len(runs) - len(good),
                    trials=len(runs),
                )
            )
    return labels, modes, stats


def render_comparison(spec: PlotSpec) -> str:
    """Draw the grouped bar chart and write it to ``spec.output_image``."""
    rows = _filter(load_rows(spec.input_csv), spec)
    labels, modes, stats = compute_stats(rows)
    by_key = {(s.mode, s.label): s for s in stats}

    finite_means = [s.mean + (s.std or 0.0) for s in stats if s.mean is not None]
    # hatched failure bars need some height; use the data scale when available
    fail_height = 1.15 * max(finite_means) if finite_means else 1.0

    fig, ax = plt.subplots(figsize=(1.8 + 1.6 * len(labels), 4.5))
    group_width = 0.8
    bar_width = group_width / len(modes)
    xs = np.arange(len(labels))

    for m, mode in enumerate(modes):
        offsets = xs - group_width / 2 + (m + 0.5) * bar_width
        color = MODE_COLORS.get(mode, f"C{m}")
        for x, label in zip(offsets, labels):
            s = by_key[(mode, label)]
            if s.mean is None:
                ax.bar(x, fail_height, bar_width * 0.9, color="white",
                       edgecolor=color, hatch="///", linewidth=1.2)
                ax.annotate("∞", (x, fail_height), ha="center",
                            va="bottom", fontsize=14, color=color)
            else:
                ax.bar(x, s.mean, bar_width * 0.9, color=color,
                       label=mode if label == labels[0] else None)
                if s.std:
                    ax.bar(x, 2 * s.std, bar_width * 0.9, bottom=s.mean - s.std,
                           color=color, alpha=0.3, linewidth=0)
        if all(by_key[(mode, lbl)].mean is None for lbl in labels):
            # legend entry for a fully failed mode
            ax.bar([], [], color="white", edgecolor=color, hatch="///", label=mode)

    ax.set_xticks(xs)
    ax.set_xticklabels(labels)
    ax.set_xlabel("Hamiltonian")
    ax.set_ylabel("iterations to convergence")
    ax.set_title(spec.title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output_image, dpi=150)
    plt.close(fig)
    return spec.output_image
