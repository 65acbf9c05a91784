"""Full learning runs: single trials, seeded suites, and static-grid scans.

Modes:
  baseline      -- one static (alpha, beta, theta, phi) for the whole run,
                   evolution time from the PGH rule each iteration;
  grid_adaptive -- exhaustive grid search re-run every iteration;
  optimized     -- simulated annealing re-run every iteration.
Both adaptive modes minimize the conditional-entropy cost under the
current weights.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import fastpath
from .bayes import (
    DegenerateEvidenceError,
    RunStatus,
    Status,
    bayes_update,
    check_status,
    init_weights,
    pgh_pair,
)
from .info import conditional_entropy_cost, joint_distribution
from .model import (
    PI,
    TWO_PI,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    ControlParams,
    HypothesisSet,
    outcome_probs_all,
    sample_outcome,
)
from .optimize import AnnealConfig, GridSpec, ParamRanges, anneal, grid_search
from .rng import RandomStream, seed_split

MODE_BASELINE = "baseline"
MODE_GRID_ADAPTIVE = "grid_adaptive"
MODE_OPTIMIZED = "optimized"
MODES = (MODE_BASELINE, MODE_GRID_ADAPTIVE, MODE_OPTIMIZED)

DEFAULT_THRESHOLD = 0.99
STRICT_THRESHOLD = 0.9999
DEFAULT_CAP = 1000
DEFAULT_TRIALS = 20

CSV_COLUMNS = (
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


def set_a() -> HypothesisSet:
    """Pauli operators and scaled versions: sx, 2sx, sz, 2sz."""
    return HypothesisSet(
        [
            ("sx", SIGMA_X),
            ("2sx", 2 * SIGMA_X),
            ("sz", SIGMA_Z),
            ("2sz", 2 * SIGMA_Z),
        ]
    )


def set_b() -> HypothesisSet:
    """Six mixed-Pauli / shifted candidates that defeat any static strategy."""
    had = (4 / math.sqrt(2)) * np.array([[1, 1], [1, -1]], dtype=np.complex128)
    return HypothesisSet(
        [
            ("B1", SIGMA_X + SIGMA_Z),
            ("B2", np.diag([1.2, -0.8]).astype(np.complex128)),
            ("B3", 2 * SIGMA_Y + np.diag([1.0, 2.0]).astype(np.complex128)),
            ("B4", had),
            ("B5", SIGMA_X + had),
            ("B6", np.array([[1, 2], [2, -1]], dtype=np.complex128)),
        ]
    )


def get_preset(name: str) -> tuple[str, HypothesisSet]:
    key = name.upper()
    if key == "A":
        return "A", set_a()
    if key == "B":
        return "B", set_b()
    raise ValueError(f"unknown preset {name!r} (expected A or B)")


@dataclass(frozen=True)
class StaticAngles:
    """A fixed baseline configuration (t comes from PGH each iteration)."""

    alpha: float
    beta: float
    theta: float
    phi: float

    def with_time(self, t: float) -> ControlParams:
        return ControlParams(
            alpha=self.alpha, beta=self.beta, theta=self.theta, phi=self.phi, t=t
        )


@dataclass(frozen=True)
class RunRecord:
    mode: str
    set_name: str
    true_index: int
    true_label: str
    trial: int
    seed: int
    threshold: float
    iterations: Optional[int]  # None unless status == success
    status: str
    wall_time_ms: int

    def key_fields(self) -> tuple:
        """Everything except wall time, for determinism comparisons."""
        return (
            self.mode,
            self.set_name,
            self.true_index,
            self.true_label,
            self.trial,
            self.seed,
            self.threshold,
            self.iterations,
            self.status,
        )


@dataclass(frozen=True)
class HypothesisStats:
    label: str
    mean: Optional[float]
    std: Optional[float]
    failures: int
    trials: int


@dataclass(frozen=True)
class ModeSummary:
    per_hypothesis: list[HypothesisStats]
    total_mean: Optional[float]


@dataclass
class SuiteSummary:
    set_name: str
    threshold: float
    trials: int
    modes: dict[str, ModeSummary] = field(default_factory=dict)


def _cost_fn(hset: HypothesisSet, w: np.ndarray):
    def cost(params: ControlParams) -> float:
        return conditional_entropy_cost(joint_distribution(hset, w, params))

    return cost


def run_single(
    hset: HypothesisSet,
    true_index: int,
    mode: str,
    seed: int,
    *,
    set_name: str = "custom",
    trial: int = 0,
    threshold: float = DEFAULT_THRESHOLD,
    cap: int = DEFAULT_CAP,
    static_angles: Optional[StaticAngles] = None,
    grid: Optional[GridSpec] = None,
    anneal_config: Optional[AnnealConfig] = None,
    trajectory: Optional[list] = None,
) -> RunRecord:
    """One learning run: iterate choose-params / measure / update until the
    status leaves Running.  ``trajectory``, when supplied, collects the
    weight vector after every update."""
    if not 0 <= true_index < len(hset):
        raise ValueError(f"true_index {true_index} out of range for N={len(hset)}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == MODE_BASELINE and static_angles is None:
        raise ValueError("baseline mode requires static_angles")
    if grid is None:
        grid = GridSpec()
    if anneal_config is None:
        anneal_config = AnnealConfig()

    rng = RandomStream(seed)
    w = init_weights(hset)
    ranges = ParamRanges(t_max=hset.t_max)
    norms = hset.pair_norms
    probs_cache: dict[tuple[int, int], np.ndarray] = {}

    started = time.perf_counter()
    status = RunStatus(Status.RUNNING)
    for k in range(1, cap + 1):
        if mode == MODE_BASELINE:
            i, j = pgh_pair(hset, w, rng)
            pair = (min(i, j), max(i, j))
            probs = probs_cache.get(pair)
            if probs is None:
                t = 1.0 / float(norms[i, j])
                probs = outcome_probs_all(hset, static_angles.with_time(t))
                probs_cache[pair] = probs
        elif mode == MODE_GRID_ADAPTIVE:
            params, _ = grid_search(_cost_fn(hset, w), grid, ranges, sweep_time=True)
            probs = outcome_probs_all(hset, params)
        else:
            params, _ = anneal(_cost_fn(hset, w), ranges, anneal_config, rng)
            probs = outcome_probs_all(hset, params)

        outcome = sample_outcome(probs[true_index], rng)
        likelihoods = probs[:, outcome]
        try:
            w = bayes_update(w, likelihoods)
        except DegenerateEvidenceError:
            status = RunStatus(Status.WRONG_CONVERGENCE, iterations=k)
            break
        if trajectory is not None:
            trajectory.append(w.copy())
        status = check_status(w, true_index, threshold, k, cap)
        if status.kind is not Status.RUNNING:
            break

    wall_ms = int(round((time.perf_counter() - started) * 1000))
    return RunRecord(
        mode=mode,
        set_name=set_name,
        true_index=true_index,
        true_label=hset.labels[true_index],
        trial=trial,
        seed=seed,
        threshold=threshold,
        iterations=status.iterations if status.kind is Status.SUCCESS else None,
        status=status.kind.value,
        wall_time_ms=wall_ms,
    )


def summarize(
    records: list[RunRecord], set_name: str, threshold: float, trials: int,
    labels: list[str],
) -> SuiteSummary:
    """Aggregate records into per-(mode, hypothesis) mean/std/failures.

    Failed runs (wrong convergence or cap exhaustion) are excluded from the
    mean/std but counted; a mode's total_mean is undefined when any
    hypothesis never succeeded."""
    summary = SuiteSummary(set_name=set_name, threshold=threshold, trials=trials)
    for mode in sorted({r.mode for r in records}):
        stats = []
        total: Optional[float] = 0.0
        for f, label in enumerate(labels):
            runs = [r for r in records if r.mode == mode and r.true_index == f]
            its = np.array(
                [r.iterations for r in runs if r.status == Status.SUCCESS.value],
                dtype=float,
            )
            failures = len(runs) - len(its)
            if len(its) == 0:
                stats.append(HypothesisStats(label, None, None, failures, len(runs)))
                total = None
            else:
                stats.append(
                    HypothesisStats(
                        label,
                        float(its.mean()),
                        float(its.std()),  # population std
                        failures,
                        len(runs),
                    )
                )
                if total is not None:
                    total += float(its.mean())
        summary.modes[mode] = ModeSummary(per_hypothesis=stats, total_mean=total)
    return summary


def run_suite(
    hset: HypothesisSet,
    mode: str,
    trials: int = DEFAULT_TRIALS,
    base_seed: int = 0,
    *,
    set_name: str = "custom",
    threshold: float = DEFAULT_THRESHOLD,
    cap: int = DEFAULT_CAP,
    static_angles: Optional[StaticAngles] = None,
    grid: Optional[GridSpec] = None,
    anneal_config: Optional[AnnealConfig] = None,
    use_fast_baseline: bool = True,
) -> tuple[list[RunRecord], SuiteSummary]:
    """Run ``trials`` seeded runs per true hypothesis and aggregate.

    Per-trial seeds come from ``seed_split(base_seed, f, k)``, so results
    are independent of scheduling order.  Baseline suites go through the
    compiled kernel (bit-identical to ``run_single``) unless disabled.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    records: list[RunRecord] = []
    if mode == MODE_BASELINE and use_fast_baseline and fastpath.AVAILABLE:
        records = fastpath.run_baseline_suite(
            hset,
            static_angles,
            trials,
            base_seed,
            set_name=set_name,
            threshold=threshold,
            cap=cap,
        )
    else:
        for f in range(len(hset)):
            for k in range(trials):
                records.append(
                    run_single(
                        hset,
                        f,
                        mode,
                        seed_split(base_seed, f, k),
                        set_name=set_name,
                        trial=k,
                        threshold=threshold,
                        cap=cap,
                        static_angles=static_angles,
                        grid=grid,
                        anneal_config=anneal_config,
                    )
                )
    summary = summarize(records, set_name, threshold, trials, hset.labels)
    return records, summary


def static_angle_grid(grid: GridSpec) -> list[StaticAngles]:
    """Lexicographic (alpha, beta, theta, phi) grid of static configurations."""
    pts = grid.points_per_angle
    alphas = np.linspace(0.0, PI, pts, endpoint=False)
    betas = np.linspace(0.0, TWO_PI, pts, endpoint=False)
    thetas = np.linspace(0.0, PI, pts, endpoint=False)
    phis = np.linspace(0.0, TWO_PI, pts, endpoint=False)
    return [
        StaticAngles(alpha=float(a), beta=float(b), theta=float(th), phi=float(ph))
        for a, b, th, ph in itertools.product(alphas, betas, thetas, phis)
    ]


def scan_static_configs(
    hset: HypothesisSet,
    grid: GridSpec,
    trials: int = DEFAULT_TRIALS,
    base_seed: int = 0,
    *,
    set_name: str = "custom",
    threshold: float = DEFAULT_THRESHOLD,
    cap: int = DEFAULT_CAP,
    use_fast_baseline: bool = True,
) -> list[tuple[StaticAngles, SuiteSummary]]:
    """Baseline suite for every static configuration on the angle grid.

    Every configuration sees the same seed set, so comparisons across
    configurations share their randomness."""
    out = []
    for angles in static_angle_grid(grid):
        _, summary = run_suite(
            hset,
            MODE_BASELINE,
            trials,
            base_seed,
            set_name=set_name,
            threshold=threshold,
            cap=cap,
            static_angles=angles,
            use_fast_baseline=use_fast_baseline,
        )
        out.append((angles, summary))
    return out


def _total_rank(summary: SuiteSummary) -> float:
    total = summary.modes[MODE_BASELINE].total_mean
    return math.inf if total is None else total


def best_static_baseline(
    hset: HypothesisSet,
    grid: GridSpec,
    trials: int = DEFAULT_TRIALS,
    base_seed: int = 0,
    *,
    set_name: str = "custom",
    threshold: float = DEFAULT_THRESHOLD,
    cap: int = DEFAULT_CAP,
    scan: Optional[list[tuple[StaticAngles, SuiteSummary]]] = None,
) -> tuple[StaticAngles, SuiteSummary]:
    """Static configuration minimizing the total mean iteration count.

    Fully failed configurations rank below every finite total; ties keep
    the first grid point.  A precomputed ``scan`` may be reused.
    """
    if scan is None:
        scan = scan_static_configs(
            hset, grid, trials, base_seed,
            set_name=set_name, threshold=threshold, cap=cap,
        )
    best_angles, best_summary = scan[0]
    for angles, summary in scan[1:]:
        if _total_rank(summary) < _total_rank(best_summary):
            best_angles, best_summary = angles, summary
    return best_angles, best_summary


def summary_to_dict(summary: SuiteSummary, config: Optional[dict] = None) -> dict:
    payload = {
        "set": summary.set_name,
        "threshold": summary.threshold,
        "trials": summary.trials,
        "modes": {
            mode: {
                "per_hypothesis": [
                    {
                        "label": h.label,
                        "mean": h.mean,
                        "std": h.std,
                        "failures": h.failures,
                    }
                    for h in ms.per_hypothesis
                ],
                "total_mean": ms.total_mean,
            }
            for mode, ms in summary.modes.items()
        },
    }
    if config is not None:
        payload["config"] = config
    return payload


def summary_from_dict(payload: dict) -> SuiteSummary:
    summary = SuiteSummary(
        set_name=payload["set"],
        threshold=payload["threshold"],
        trials=payload["trials"],
    )
    for mode, ms in payload["modes"].items():
        summary.modes[mode] = ModeSummary(
            per_hypothesis=[
                HypothesisStats(
                    label=h["label"],
                    mean=h["mean"],
                    std=h["std"],
                    failures=h["failures"],
                    trials=payload["trials"],
                )
                for h in ms["per_hypothesis"]
            ],
            total_mean=ms["total_mean"],
        )
    return summary


def emit_results(
    records: list[RunRecord],
    summary: SuiteSummary,
    csv_path,
    json_path,
    config: Optional[dict] = None,
) -> None:
    """Write the per-run CSV and the summary JSON (idempotent overwrite)."""
    try:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in records:
                writer.writerow(
                    [
                        r.mode,
                        r.set_name,
                        r.true_index,
                        r.true_label,
                        r.trial,
                        r.seed,
                        r.threshold,
                        "" if r.iterations is None else r.iterations,
                        r.status,
                        r.wall_time_ms,
                    ]
                )
    except OSError as exc:
        raise OSError(f"failed writing CSV to {csv_path}: {exc}") from exc
    try:
        with open(json_path, "w") as fh:
            json.dump(summary_to_dict(summary, config), fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed writing JSON to {json_path}: {exc}") from exc
