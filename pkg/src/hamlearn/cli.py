"""Command-line front end.

Subcommands:
  run      -- one suite (optimized / grid-adaptive / baseline-search)
  compare  -- all three modes on the same set and seed, combined CSV
  cost     -- evaluate the conditional-entropy cost / MI at given params

Exit codes: 0 on completion (failed runs are data, not errors), 2 for bad
flags or paths, 1 for internal faults.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import harness
from .info import conditional_entropy_cost, joint_distribution, mutual_information
from .model import ControlParams, HypothesisSet
from .optimize import AnnealConfig, GridSpec

CLI_MODES = {
    "baseline-search": harness.MODE_BASELINE,
    "grid-adaptive": harness.MODE_GRID_ADAPTIVE,
    "optimized": harness.MODE_OPTIMIZED,
}


class CliError(Exception):
    """Configuration problem; maps to exit code 2."""


def _add_set_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--set", default="A", choices=["A", "B", "custom"])
    p.add_argument("--hypotheses", help="JSON file for --set custom")


def _add_suite_flags(p: argparse.ArgumentParser) -> None:
    _add_set_flags(p)
    p.add_argument("--trials", type=int, default=harness.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=harness.DEFAULT_THRESHOLD)
    p.add_argument("--cap", type=int, default=harness.DEFAULT_CAP)
    p.add_argument("--grid-points", type=int, default=5)
    p.add_argument("--anneal-iters", type=int, default=200)
    p.add_argument("--anneal-neighbors", type=int, default=8)
    p.add_argument("--anneal-t0", type=float, default=1.0)
    p.add_argument("--cooling-rate", type=float, default=0.9)
    p.add_argument("--out", default="results", help="output path prefix")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qle", description="Bayesian Hamiltonian learning experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one suite and write CSV/JSON")
    _add_suite_flags(p_run)
    p_run.add_argument(
        "--mode",
        required=True,
        choices=sorted(CLI_MODES),
    )

    p_cmp = sub.add_parser("compare", help="run all three modes on one set")
    _add_suite_flags(p_cmp)

    p_cost = sub.add_parser("cost", help="evaluate cost/MI at fixed params")
    _add_set_flags(p_cost)
    p_cost.add_argument("--alpha", type=float, required=True)
    p_cost.add_argument("--beta", type=float, required=True)
    p_cost.add_argument("--theta", type=float, required=True)
    p_cost.add_argument("--phi", type=float, required=True)
    p_cost.add_argument("--t", type=float, required=True)
    p_cost.add_argument("--weights", help="comma-separated; default uniform")

    return parser


def _load_set(args) -> tuple[str, HypothesisSet]:
    if args.set == "custom":
        if not args.hypotheses:
            raise CliError("--set custom requires --hypotheses <path>")
        try:
            return "custom", HypothesisSet.from_json(args.hypotheses)
        except OSError as exc:
            raise CliError(f"cannot read {args.hypotheses}: {exc}") from exc
        except (ValueError, KeyError) as exc:
            raise CliError(f"invalid hypothesis file: {exc}") from exc
    return harness.get_preset(args.set)


def _validate_suite_flags(args) -> None:
    if args.trials < 1:
        raise CliError("--trials must be >= 1")
    if not 0.5 < args.threshold < 1:
        raise CliError("--threshold must lie in (0.5, 1)")
    if args.cap < 1:
        raise CliError("--cap must be >= 1")
    if args.grid_points < 1:
        raise CliError("--grid-points must be >= 1")
    try:
        AnnealConfig(
            initial_temperature=args.anneal_t0,
            cooling_rate=args.cooling_rate,
            outer_iterations=args.anneal_iters,
            neighbors_per_step=args.anneal_neighbors,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _suite_config(args, set_name: str) -> dict:
    return {
        "set": set_name,
        "trials": args.trials,
        "seed": args.seed,
        "threshold": args.threshold,
        "cap": args.cap,
        "grid_points": args.grid_points,
        "anneal_iters": args.anneal_iters,
        "anneal_neighbors": args.anneal_neighbors,
        "anneal_t0": args.anneal_t0,
        "cooling_rate": args.cooling_rate,
        "out": args.out,
        "mode": getattr(args, "mode", "compare"),
    }


def _anneal_config(args) -> AnnealConfig:
    return AnnealConfig(
        initial_temperature=args.anneal_t0,
        cooling_rate=args.cooling_rate,
        outer_iterations=args.anneal_iters,
        neighbors_per_step=args.anneal_neighbors,
    )


def _run_mode(args, set_name, hset, cli_mode):
    """Run one mode; baseline-search scans the static grid first."""
    mode = CLI_MODES[cli_mode]
    grid = GridSpec(points_per_angle=args.grid_points)
    if mode == harness.MODE_BASELINE:
        angles, _ = harness.best_static_baseline(
            hset, grid, args.trials, args.seed,
            set_name=set_name, threshold=args.threshold, cap=args.cap,
        )
        return harness.run_suite(
            hset, mode, args.trials, args.seed,
            set_name=set_name, threshold=args.threshold, cap=args.cap,
            static_angles=angles,
        )
    return harness.run_suite(
        hset, mode, args.trials, args.seed,
        set_name=set_name, threshold=args.threshold, cap=args.cap,
        grid=grid, anneal_config=_anneal_config(args),
    )


def _print_summary(summary: harness.SuiteSummary) -> None:
    print(f"set={summary.set_name} threshold={summary.threshold} trials={summary.trials}")
    for mode, ms in summary.modes.items():
        total = "FAILED" if ms.total_mean is None else f"{ms.total_mean:.2f}"
        print(f"mode {mode}: total_mean={total}")
        for h in ms.per_hypothesis:
            mean = "FAILED" if h.mean is None else f"{h.mean:.2f}"
            std = "-" if h.std is None else f"{h.std:.2f}"
            print(
                f"  {h.label:>12}  mean={mean:>8}  std={std:>8}  "
                f"failures={h.failures}/{h.trials}"
            )


def _emit(args, set_name, records, summary) -> None:
    try:
        harness.emit_results(
            records, summary, f"{args.out}.csv", f"{args.out}.json",
            config=_suite_config(args, set_name),
        )
    except OSError as exc:  # bad --out path is a configuration error
        raise CliError(str(exc)) from exc


def cmd_run(args) -> int:
    _validate_suite_flags(args)
    set_name, hset = _load_set(args)
    records, summary = _run_mode(args, set_name, hset, args.mode)
    _emit(args, set_name, records, summary)
    _print_summary(summary)
    print(f"wrote {args.out}.csv and {args.out}.json")
    return 0


def cmd_compare(args) -> int:
    _validate_suite_flags(args)
    set_name, hset = _load_set(args)
    all_records = []
    combined = harness.SuiteSummary(
        set_name=set_name, threshold=args.threshold, trials=args.trials
    )
    for cli_mode in ("baseline-search", "grid-adaptive", "optimized"):
        records, summary = _run_mode(args, set_name, hset, cli_mode)
        all_records.extend(records)
        combined.modes.update(summary.modes)
    _emit(args, set_name, all_records, combined)
    _print_summary(combined)
    print(f"wrote {args.out}.csv and {args.out}.json")
    return 0


def cmd_cost(args) -> int:
    set_name, hset = _load_set(args)
    if args.weights is None:
        weights = np.full(len(hset), 1.0 / len(hset))
    else:
        try:
            weights = np.array([float(x) for x in args.weights.split(",")])
        except ValueError as exc:
            raise CliError(f"bad --weights: {exc}") from exc
        if len(weights) != len(hset):
            raise CliError(
                f"--weights needs {len(hset)} entries for set {set_name}"
            )
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
            raise CliError("--weights must be on the probability simplex")
    try:
        params = ControlParams.wrapped(
            args.alpha, args.beta, args.theta, args.phi, args.t, t_max=hset.t_max
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    table = joint_distribution(hset, weights, params)
    print(f"conditional_entropy_cost = {conditional_entropy_cost(table):.12f}")
    print(f"mutual_information       = {mutual_information(table):.12f}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"run": cmd_run, "compare": cmd_compare, "cost": cmd_cost}
    try:
        return handlers[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal fault
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
