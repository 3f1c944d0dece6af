"""Acceptance gate: one test per primary criterion.

Run with ``pytest -v``; each test below is one criterion and reports one
pass/fail line.  The full default sweep is solved once (module fixture) and
shared by the sweep-level criteria; observed magnitudes are printed alongside
the asserted signs.
"""

import time

import pytest

from fogbank.bnb import OPTIMAL, SolverOptions, solve_scenario
from fogbank.harness import oracle_check
from fogbank.milp import evaluate_power
from fogbank.model import default_config, make_scenario
from fogbank.reporting import emit_csv
from fogbank.sweep import grid, row_from, run_sweep, solve_point

WORKLOADS = tuple(500.0 * i for i in range(1, 11))
VARIANTS = ("CCOnly", "CloudFog", "LowDensity", "HighDensity")


class SweepData:
    def __init__(self):
        self.config = default_config()
        opts = SolverOptions()
        start = time.perf_counter()
        self.rows = []
        self.solutions = {}
        for variant, strategy, workload in grid(self.config):
            scenario, solution = solve_point(
                self.config, variant, strategy, workload, opts
            )
            self.solutions[variant, strategy, workload] = (scenario, solution)
            self.rows.append(row_from(variant, strategy, workload, scenario, solution))
        self.elapsed_s = time.perf_counter() - start

    def total(self, variant, strategy, workload):
        row = next(
            r for r in self.rows
            if (r.variant, r.strategy, r.workload_mips) == (variant, strategy, workload)
        )
        assert row.status == "Optimal", f"{variant}/{strategy}/{workload:g} not Optimal"
        return row


@pytest.fixture(scope="module")
def sweep():
    return SweepData()


def test_oracle_exactness():
    """B&B matches brute-force oracles over 200 seeded random instances."""
    start = time.perf_counter()
    result = oracle_check(trials=200, seed=42)
    elapsed = time.perf_counter() - start
    print(f"oracle exactness: max relative gap {result.max_rel_gap:.3e}, "
          f"{result.compared} compared, {result.infeasible_agreements} infeasible "
          f"agreements, {elapsed:.1f}s")
    assert result.ok, result.failures
    assert result.max_rel_gap <= 1e-6
    assert elapsed < 60.0


def test_dominance_distributed_vs_single(sweep):
    """Distributed total power <= Single on all 40 matched pairs."""
    worst_saving = 0.0
    for variant in VARIANTS:
        for workload in WORKLOADS:
            single = sweep.total(variant, "Single", workload)
            distributed = sweep.total(variant, "Distributed", workload)
            assert distributed.total_w <= single.total_w + 1e-9, (
                f"{variant}@{workload:g}: distributed {distributed.total_w} "
                f"> single {single.total_w}"
            )
            saving = 1.0 - distributed.total_w / single.total_w
            worst_saving = max(worst_saving, saving)
    print(f"dominance: holds on 40 pairs; largest distributed saving "
          f"{100 * worst_saving:.1f}% (paper reports up to 17%)")


def test_density_monotonicity(sweep):
    """CCOnly >= CloudFog >= LowDensity >= HighDensity at every point."""
    max_cc_saving = 0.0
    for strategy in ("Single", "Distributed"):
        for workload in WORKLOADS:
            totals = [sweep.total(v, strategy, workload).total_w for v in VARIANTS]
            for a, b in zip(totals, totals[1:]):
                assert b <= a + 1e-9, (
                    f"{strategy}@{workload:g}: ordering violated {totals}"
                )
            max_cc_saving = max(max_cc_saving, 1.0 - totals[3] / totals[0])
    print(f"density monotonicity: holds at all 20 points; largest saving vs "
          f"CCOnly {100 * max_cc_saving:.1f}% (paper reports up to 79%)")


def test_cliff_reproduction(sweep):
    """3500-MIPS tasks leave vehicles; CC pool jumps from 1 to 2 servers."""
    for variant in ("LowDensity", "HighDensity"):
        row = sweep.total(variant, "Single", 3500.0)
        vf_total = row.alloc_vf1 + row.alloc_vf2 + row.alloc_vf3 + row.alloc_vf4
        assert vf_total == 0.0, f"{variant} Single@3500 allocated {vf_total} to VFs"

    _, at_3000 = sweep.solutions["CCOnly", "Single", 3000.0]
    _, at_3500 = sweep.solutions["CCOnly", "Single", 3500.0]
    assert len(at_3000.activations) == 1
    assert len(at_3500.activations) >= 2
    smooth = (sweep.total("CCOnly", "Single", 3000.0).total_w
              - sweep.total("CCOnly", "Single", 2500.0).total_w)
    jump = at_3500.objective_w - at_3000.objective_w
    assert jump > smooth
    print(f"cliff: CC servers 1 -> {len(at_3500.activations)} at 3500; power jump "
          f"{jump:.0f} W vs smooth increment {smooth:.0f} W")


def test_calibration_gate(sweep):
    """Shipped defaults reproduce the paper's allocation-priority narrative."""
    # (a) Vehicles stay attractive under Distributed beyond the Single cliff.
    row = sweep.total("HighDensity", "Distributed", 3500.0)
    vf_total = row.alloc_vf1 + row.alloc_vf2 + row.alloc_vf3 + row.alloc_vf4
    assert vf_total > 0.0

    config = sweep.config
    # (b) VF1 saturated (5 vehicles x one 2000-MIPS task) and the remainder
    # fits the NF exactly: NF used, remote VFs untouched.
    scenario = make_scenario(config, "LowDensity", "Single", 2000.0, task_count=8)
    sol_b = solve_scenario(scenario)
    assert sol_b.status == OPTIMAL
    nf_load = sum(v for (_, sid), v in sol_b.allocation.items() if sid == "nf1")
    remote = sum(
        v for (_, sid), v in sol_b.allocation.items()
        if sid.startswith(("vf2", "vf3", "vf4"))
    )
    assert nf_load > 0.0
    assert remote == 0.0

    # (c) NF insufficient: remote VFs absorb the overflow before LF/CC.
    scenario = make_scenario(config, "LowDensity", "Single", 2000.0, task_count=10)
    sol_c = solve_scenario(scenario)
    assert sol_c.status == OPTIMAL
    remote = sum(
        v for (_, sid), v in sol_c.allocation.items()
        if sid.startswith(("vf2", "vf3", "vf4"))
    )
    heavy = sum(
        v for (_, sid), v in sol_c.allocation.items()
        if sid.startswith(("lf", "cc"))
    )
    assert remote > 0.0
    assert heavy == 0.0
    print(f"calibration gate: (a) VF MIPS at 3500 = {vf_total:g}; "
          f"(b) NF load {nf_load:g}, remote 0; (c) remote {remote:g}, LF/CC 0")


def test_two_path_objective(sweep):
    """Solver objective equals the independent power recomputation."""
    checked = 0
    worst = 0.0
    for (variant, strategy, workload), (scenario, solution) in sweep.solutions.items():
        if solution.status != OPTIMAL:
            continue
        recomputed = evaluate_power(solution.allocation, scenario).total_w
        gap = abs(solution.objective_w - recomputed) / max(1.0, abs(recomputed))
        worst = max(worst, gap)
        assert gap <= 1e-6, f"{variant}/{strategy}/{workload:g}: gap {gap:.3e}"
        checked += 1
    assert checked == 80
    print(f"two-path objective: {checked} solutions, worst relative gap {worst:.3e}")


def test_determinism_across_worker_counts(sweep):
    """Sweep CSV is byte-identical for 1 and 8 workers."""
    serial_csv = emit_csv(sweep.rows)  # single-process path
    parallel_csv = emit_csv(run_sweep(sweep.config, SolverOptions(), workers=8))
    assert serial_csv == parallel_csv
    print(f"determinism: {len(serial_csv)} CSV bytes identical for workers 1 vs 8")


def test_runtime_budget(sweep):
    """Full default 80-cell sweep solves in under 10 minutes."""
    print(f"runtime: full sweep solved in {sweep.elapsed_s:.1f}s")
    assert sweep.elapsed_s < 600.0
