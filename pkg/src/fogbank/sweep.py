"""Experiment grid: workload sweep x four variants x two strategies."""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from typing import Optional

from . import reporting
from .bnb import OPTIMAL, SolverOptions, solve_scenario
from .model import STRATEGIES, VARIANTS, ModelConfig, make_scenario
from .simplex import NumericalFailure


@dataclass
class SweepRow:
    variant: str
    strategy: str
    workload_mips: float
    status: str
    total_w: float
    processing_w: float
    networking_w: float
    alloc_cc: float
    alloc_lf: float
    alloc_nf: float
    alloc_vf1: float
    alloc_vf2: float
    alloc_vf3: float
    alloc_vf4: float
    bb_nodes: int
    runtime_ms: float


def solve_point(
    config: ModelConfig,
    variant: str,
    strategy: str,
    workload_mips: float,
    opts: SolverOptions = SolverOptions(),
):
    """Build and solve one grid cell; returns (scenario, solution)."""
    scenario = make_scenario(config, variant, strategy, workload_mips)
    return scenario, solve_scenario(scenario, opts)


def row_from(
    variant: str,
    strategy: str,
    workload_mips: float,
    scenario,
    solution,
    *,
    record_runtime: bool = False,
) -> SweepRow:
    """Aggregate one solved cell into a SweepRow.

    ``runtime_ms`` is zeroed unless ``record_runtime`` is set, so that sweep
    output is byte-identical across runs and worker counts; wall-clock
    figures stay available through the solver stats when requested.
    """
    if solution.status == OPTIMAL:
        report = reporting.validate(solution, scenario)
        if not report.ok:
            raise RuntimeError(
                f"solver output failed validation at ({variant}, {strategy}, "
                f"{workload_mips:g}): {report.violations}"
            )
        nodes = reporting.node_breakdown(solution)
        vfs = reporting.vf_breakdown(solution)
        bd = solution.breakdown
        total, processing, networking = bd.total_w, bd.processing_w, bd.networking_w
    else:
        nodes = {"CC": 0.0, "LF": 0.0, "NF": 0.0, "VF": 0.0}
        vfs = {}
        total = processing = networking = 0.0

    def vf(i: int) -> float:
        return vfs.get(f"vf{i}", 0.0)

    return SweepRow(
        variant=variant,
        strategy=strategy,
        workload_mips=float(workload_mips),
        status=solution.status,
        total_w=total,
        processing_w=processing,
        networking_w=networking,
        alloc_cc=nodes["CC"],
        alloc_lf=nodes["LF"],
        alloc_nf=nodes["NF"],
        alloc_vf1=vf(1),
        alloc_vf2=vf(2),
        alloc_vf3=vf(3),
        alloc_vf4=vf(4),
        bb_nodes=solution.stats.bb_nodes,
        runtime_ms=solution.stats.runtime_ms if record_runtime else 0.0,
    )


def run_point(
    config: ModelConfig,
    variant: str,
    strategy: str,
    workload_mips: float,
    opts: SolverOptions = SolverOptions(),
    *,
    record_runtime: bool = False,
) -> SweepRow:
    """Solve one grid point and aggregate its allocation per node class."""
    scenario, solution = solve_point(config, variant, strategy, workload_mips, opts)
    return row_from(
        variant, strategy, workload_mips, scenario, solution,
        record_runtime=record_runtime,
    )


def grid(config: ModelConfig) -> list[tuple[str, str, float]]:
    """Fixed output order: variant-major, then strategy, then workload."""
    return [
        (variant, strategy, workload)
        for variant in VARIANTS
        for strategy in STRATEGIES
        for workload in config.sweep.workloads()
    ]


def _run_cell(args) -> SweepRow:
    config, variant, strategy, workload, opts, record_runtime = args
    return run_point(
        config, variant, strategy, workload, opts, record_runtime=record_runtime
    )


def run_sweep(
    config: ModelConfig,
    opts: SolverOptions = SolverOptions(),
    *,
    workers: int = 1,
    record_runtime: bool = False,
) -> list[SweepRow]:
    """Run the full grid; output order is fixed regardless of worker count."""
    cells = grid(config)
    jobs = [(config, v, s, w, opts, record_runtime) for v, s, w in cells]
    if workers <= 1:
        results = []
        for job in jobs:
            try:
                results.append(_run_cell(job))
            except NumericalFailure as exc:
                raise NumericalFailure(
                    f"numerical failure at ({job[1]}, {job[2]}, {job[3]:g}): {exc}"
                ) from exc
        return results
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_cell, job) for job in jobs]
        results = []
        for job, fut in zip(jobs, futures):
            try:
                results.append(fut.result())
            except NumericalFailure as exc:
                raise NumericalFailure(
                    f"numerical failure at ({job[1]}, {job[2]}, {job[3]:g}): {exc}"
                ) from exc
        return results
