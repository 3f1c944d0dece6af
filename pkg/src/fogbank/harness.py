"""Randomized exactness harness: branch-and-bound vs. enumeration oracles.

Generates small scenarios with randomized capacities, power profiles and
task sets, solves each with the exact solver and with the matching
brute-force oracle, and reports the worst relative objective gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bnb import INFEASIBLE, OPTIMAL, SolverOptions, solve_scenario
from .model import (
    NetworkDeviceSpec,
    Scenario,
    ServerSpec,
    Task,
    Topology,
    derive_routes,
)
from .oracles import (
    MAX_ENUM_SERVERS_DISTRIBUTED,
    MAX_ENUM_SERVERS_SINGLE,
    enumerate_distributed,
    enumerate_single,
)


@dataclass
class OracleCheckResult:
    trials: int
    compared: int
    infeasible_agreements: int
    max_rel_gap: float
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.max_rel_gap <= 1e-6


def _random_topology(rng: np.random.Generator, max_servers: int) -> Topology:
    servers: list[ServerSpec] = []
    if rng.random() < 0.75:
        cap = float(rng.uniform(5000, 26000))
        idle = float(rng.uniform(50, 300))
        servers.append(ServerSpec("cc1", "CC", cap, idle, idle + float(rng.uniform(10, 80))))
    if rng.random() < 0.6 and len(servers) < max_servers:
        cap = float(rng.uniform(3000, 12000))
        idle = float(rng.uniform(20, 150))
        servers.append(ServerSpec("lf1", "LF", cap, idle, idle + float(rng.uniform(10, 60))))
    if rng.random() < 0.6 and len(servers) < max_servers:
        cap = float(rng.uniform(2000, 8000))
        idle = float(rng.uniform(2, 30))
        servers.append(ServerSpec("nf1", "NF", cap, idle, idle + float(rng.uniform(5, 20))))
    budget = max_servers - len(servers)
    n_vn = int(rng.integers(0, budget + 1)) if budget > 0 else 0
    counts = [0, 0, 0, 0]
    for _ in range(n_vn):
        counts[int(rng.integers(0, 4))] += 1
    vn_cap = float(rng.uniform(1500, 4000))
    vn_idle = float(rng.uniform(1, 8))
    vn_max = vn_idle + float(rng.uniform(2, 12))
    for vi, count in enumerate(counts, start=1):
        for i in range(1, count + 1):
            servers.append(
                ServerSpec(f"vf{vi}_vn{i}", "VN", vn_cap, vn_idle, vn_max, vf_id=f"vf{vi}")
            )
    if not servers:
        servers.append(ServerSpec("cc1", "CC", 30000.0, 100.0, 150.0))

    rsu_cap = float(rng.uniform(40, 4000))
    devices = tuple(
        [NetworkDeviceSpec(f"rsu_vf{i}", "RSU", 0.006, rsu_cap) for i in range(1, 5)]
        + [
            NetworkDeviceSpec("onu", "ONU", 0.009, float(rng.uniform(100, 5000))),
            NetworkDeviceSpec("olt", "OLT", 0.002, 5000.0),
            NetworkDeviceSpec("metro", "METRO", 0.005, 5000.0),
            NetworkDeviceSpec("core", "CORE", 0.010, 5000.0),
        ]
    )
    return Topology(tuple(servers), devices, ("vf1", "vf2", "vf3", "vf4"))


def random_scenario(rng: np.random.Generator, *, max_tasks: int = 5) -> Scenario:
    strategy = "Single" if rng.random() < 0.5 else "Distributed"
    limit = MAX_ENUM_SERVERS_SINGLE if strategy == "Single" else MAX_ENUM_SERVERS_DISTRIBUTED
    topology = _random_topology(rng, limit)
    routes = derive_routes(topology, "vf1")
    count = int(rng.integers(1, max_tasks + 1))
    tasks = tuple(
        Task(i + 1, w, w / 100.0, "vf1")
        for i, w in enumerate(rng.uniform(500, 5000, size=count))
    )
    return Scenario(topology, routes, tasks, strategy, "LowDensity", "vf1")


def oracle_check(
    trials: int = 200,
    seed: int = 42,
    *,
    max_tasks: int = 5,
    opts: SolverOptions = SolverOptions(),
) -> OracleCheckResult:
    rng = np.random.default_rng(seed)
    result = OracleCheckResult(trials, 0, 0, 0.0)
    for trial in range(trials):
        scenario = random_scenario(rng, max_tasks=max_tasks)
        solved = solve_scenario(scenario, opts)
        oracle = (
            enumerate_single(scenario)
            if scenario.strategy == "Single"
            else enumerate_distributed(scenario)
        )
        tag = f"trial {trial} ({scenario.strategy}, {len(scenario.tasks)} tasks, " \
              f"{len(scenario.topology.servers)} servers)"
        if solved.status != oracle.status:
            result.failures.append(
                f"{tag}: status mismatch solver={solved.status} oracle={oracle.status}"
            )
            continue
        if solved.status == INFEASIBLE:
            result.infeasible_agreements += 1
            continue
        if solved.status != OPTIMAL:
            result.failures.append(f"{tag}: solver returned {solved.status}")
            continue
        gap = abs(solved.objective_w - oracle.objective_w) / max(abs(oracle.objective_w), 1e-12)
        result.compared += 1
        if gap > result.max_rel_gap:
            result.max_rel_gap = gap
        if gap > 1e-6:
            result.failures.append(
                f"{tag}: objective gap {gap:.3e} "
                f"(solver {solved.objective_w:.9f}, oracle {oracle.objective_w:.9f})"
            )
    return result
