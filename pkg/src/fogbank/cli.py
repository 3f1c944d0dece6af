"""Command-line entry point: solve, sweep, oracle-check, validate, export-lp."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import reporting, sweep
from .bnb import OPTIMAL, Solution, SolveStats, SolverOptions, solve_scenario
from .harness import oracle_check
from .milp import build_milp, evaluate_power, export_lp
from .model import ConfigError, ModelConfig, default_config, load_config, make_scenario

VARIANT_FLAGS = {
    "cc": "CCOnly",
    "cf": "CloudFog",
    "low": "LowDensity",
    "high": "HighDensity",
}
STRATEGY_FLAGS = {"single": "Single", "distributed": "Distributed"}


def _add_scenario_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=sorted(VARIANT_FLAGS), required=True)
    p.add_argument("--strategy", choices=sorted(STRATEGY_FLAGS), required=True)
    p.add_argument("--workload", type=float, required=True, metavar="MIPS")
    p.add_argument("--tasks", type=int, default=None, metavar="N")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, default=None, metavar="PATH")
    p.add_argument("--seed", type=int, default=None, metavar="N")
    p.add_argument("--out", type=Path, default=None, metavar="PATH")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gap-abs", type=float, default=1e-9, metavar="X")
    p.add_argument("--gap-rel", type=float, default=1e-9, metavar="X")
    p.add_argument("--node-limit", type=int, default=1_000_000, metavar="N")
    p.add_argument("--time-limit-ms", type=float, default=None, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fogbank",
        description="Energy-aware task placement for a cloud-supported vehicular fog.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one scenario, emit solution JSON")
    _add_scenario_flags(p)
    _add_common_flags(p)
    _add_solver_flags(p)
    p.add_argument("--profile", action="store_true",
                   help="keep measured runtimes in the output (breaks byte determinism)")

    p = sub.add_parser("sweep", help="run the full grid, emit CSV")
    _add_common_flags(p)
    _add_solver_flags(p)
    p.add_argument("--workers", type=int, default=1, metavar="N")
    p.add_argument("--profile", action="store_true",
                   help="keep measured runtimes in the output (breaks byte determinism)")

    p = sub.add_parser("oracle-check", help="compare the solver against brute-force oracles")
    p.add_argument("--trials", type=int, default=200, metavar="N")
    p.add_argument("--seed", type=int, default=42, metavar="N")
    p.add_argument("--max-tasks", type=int, default=5, metavar="N")
    _add_solver_flags(p)

    p = sub.add_parser("validate", help="re-check a solution JSON against its scenario")
    p.add_argument("--solution", type=Path, required=True, metavar="PATH")
    _add_scenario_flags(p)
    _add_common_flags(p)

    p = sub.add_parser("export-lp", help="write the scenario MILP in LP text format")
    _add_scenario_flags(p)
    _add_common_flags(p)
    return parser


def _load_config(args) -> ModelConfig:
    if args.config is not None:
        config = load_config(args.config.read_text())
    else:
        config = default_config()
    if getattr(args, "seed", None) is not None:
        config = dataclasses.replace(config, seed=args.seed)
    return config


def _opts(args) -> SolverOptions:
    return SolverOptions(
        gap_abs=args.gap_abs,
        gap_rel=args.gap_rel,
        node_limit=args.node_limit,
        time_limit_ms=args.time_limit_ms,
    )


def _write(args, data: bytes) -> None:
    if args.out is not None:
        args.out.write_bytes(data)
    else:
        sys.stdout.buffer.write(data)


def _scenario(args, config: ModelConfig):
    return make_scenario(
        config,
        VARIANT_FLAGS[args.variant],
        STRATEGY_FLAGS[args.strategy],
        args.workload,
        task_count=args.tasks,
    )


def _cmd_solve(args) -> int:
    config = _load_config(args)
    scenario = _scenario(args, config)
    solution = solve_scenario(scenario, _opts(args))
    if not args.profile:
        solution.stats.runtime_ms = 0.0
    _write(args, reporting.emit_solution_json(solution))
    return 0 if solution.status == OPTIMAL else 1


def _cmd_sweep(args) -> int:
    config = _load_config(args)
    rows = sweep.run_sweep(
        config, _opts(args), workers=args.workers, record_runtime=args.profile
    )
    _write(args, reporting.emit_csv(rows))
    return 0


def _cmd_oracle_check(args) -> int:
    result = oracle_check(
        args.trials, args.seed, max_tasks=args.max_tasks, opts=_opts(args)
    )
    print(
        f"oracle-check: {result.trials} trials, {result.compared} optima compared, "
        f"{result.infeasible_agreements} infeasible agreements, "
        f"max relative gap {result.max_rel_gap:.3e}"
    )
    for failure in result.failures:
        print(f"FAIL {failure}", file=sys.stderr)
    return 0 if result.ok else 1


def _cmd_validate(args) -> int:
    config = _load_config(args)
    scenario = _scenario(args, config)
    doc = json.loads(args.solution.read_text())
    allocation = {
        (entry["task"], entry["server"]): float(entry["mips"])
        for entry in doc.get("allocation", [])
    }
    solution = Solution(
        status=doc.get("status", OPTIMAL),
        objective_w=float(doc.get("objective_w") or 0.0),
        allocation=allocation,
        activations=tuple(doc.get("activations", [])),
        breakdown=None,
        stats=SolveStats(),
    )
    report = reporting.validate(solution, scenario)
    if report.ok:
        print("validation: ok")
        return 0
    for v in report.violations:
        print(
            f"violation {v.constraint}: lhs={v.lhs:g} rhs={v.rhs:g} slack={v.slack:g}",
            file=sys.stderr,
        )
    return 1


def _cmd_export_lp(args) -> int:
    config = _load_config(args)
    scenario = _scenario(args, config)
    instance = build_milp(scenario)
    _write(args, export_lp(instance).encode())
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        handler = {
            "solve": _cmd_solve,
            "sweep": _cmd_sweep,
            "oracle-check": _cmd_oracle_check,
            "validate": _cmd_validate,
            "export-lp": _cmd_export_lp,
        }[args.command]
        return handler(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
