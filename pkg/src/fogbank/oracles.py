"""Brute-force ground-truth solvers for small scenarios.

These deliberately avoid the MILP coefficient path: single allocation is
checked by enumerating every server^task assignment, distributed allocation
by enumerating every server activation subset and solving the remaining
continuous transportation problem.  Both score candidates with the
first-principles power evaluator.
"""

from __future__ import annotations

import itertools
import math
import time
from typing import Optional

import numpy as np

from .bnb import INFEASIBLE, OPTIMAL, Solution, SolveStats
from .milp import evaluate_power
from .model import Scenario
from .simplex import OPTIMAL as LP_OPTIMAL
from .simplex import solve_lp

MAX_ENUM_TASKS = 6
MAX_ENUM_SERVERS_SINGLE = 6
MAX_ENUM_SERVERS_DISTRIBUTED = 12


class OracleSizeError(ValueError):
    """The scenario exceeds the documented enumeration guards."""


def _finish(scenario: Scenario, allocation, start: float) -> Solution:
    stats = SolveStats(runtime_ms=(time.perf_counter() - start) * 1000.0)
    if allocation is None:
        return Solution(INFEASIBLE, math.inf, {}, (), None, stats)
    allocation = {k: v for k, v in allocation.items() if v > 1e-9}
    breakdown = evaluate_power(allocation, scenario)
    activations = tuple(sorted({sid for (_, sid) in allocation}))
    return Solution(OPTIMAL, breakdown.total_w, allocation, activations, breakdown, stats)


def enumerate_single(scenario: Scenario) -> Solution:
    """Exhaustive optimum under whole-task placement."""
    if scenario.strategy != "Single":
        raise ValueError("enumerate_single requires a Single-strategy scenario")
    tasks = scenario.tasks
    servers = scenario.topology.servers
    if len(tasks) > MAX_ENUM_TASKS or len(servers) > MAX_ENUM_SERVERS_SINGLE:
        raise OracleSizeError(
            f"guard exceeded: {len(tasks)} tasks x {len(servers)} servers"
        )
    start = time.perf_counter()
    devices = scenario.topology.devices

    # Per-candidate cost pieces, precomputed.
    unit_cost = np.array([
        [
            s.marginal_w_per_mips
            + (t.traffic_mbps / t.workload_mips) * scenario.path_energy_w_per_mbps(s.id)
            for s in servers
        ]
        for t in tasks
    ])
    workloads = np.array([t.workload_mips for t in tasks])
    traffic = np.array([t.traffic_mbps for t in tasks])
    caps = np.array([s.capacity_mips for s in servers])
    idle = np.array([s.idle_power_w for s in servers])
    on_route = np.array([
        [d.id in scenario.routes[s.id].devices for s in servers] for d in devices
    ])
    dev_caps = np.array([d.capacity_mbps for d in devices])

    best_cost = math.inf
    best: Optional[tuple[int, ...]] = None
    for assign in itertools.product(range(len(servers)), repeat=len(tasks)):
        cols = np.fromiter(assign, dtype=int, count=len(tasks))
        load = np.bincount(cols, weights=workloads, minlength=len(servers))
        if np.any(load > caps + 1e-9):
            continue
        dev_load = on_route[:, cols] @ traffic
        if np.any(dev_load > dev_caps + 1e-9):
            continue
        cost = float(
            idle[load > 0].sum()
            + unit_cost[np.arange(len(tasks)), cols] @ workloads
            # networking already inside unit_cost
        )
        if cost < best_cost - 1e-15:
            best_cost = cost
            best = assign

    if best is None:
        return _finish(scenario, None, start)
    allocation = {
        (t.id, servers[col].id): t.workload_mips for t, col in zip(tasks, best)
    }
    return _finish(scenario, allocation, start)


def enumerate_distributed(scenario: Scenario) -> Solution:
    """Optimum under splittable tasks, by activation-subset enumeration."""
    if scenario.strategy != "Distributed":
        raise ValueError("enumerate_distributed requires a Distributed-strategy scenario")
    servers = scenario.topology.servers
    if len(servers) > MAX_ENUM_SERVERS_DISTRIBUTED:
        raise OracleSizeError(f"guard exceeded: {len(servers)} servers")
    start = time.perf_counter()
    tasks = scenario.tasks
    devices = scenario.topology.devices
    demand = scenario.total_workload_mips
    idle = np.array([s.idle_power_w for s in servers])
    caps = np.array([s.capacity_mips for s in servers])

    best_cost = math.inf
    best_alloc = None
    for mask in range(1, 1 << len(servers)):
        subset = [i for i in range(len(servers)) if mask >> i & 1]
        if caps[subset].sum() + 1e-9 < demand:
            continue
        idle_cost = float(idle[subset].sum())
        if idle_cost >= best_cost:
            continue
        result = _transportation_lp(scenario, subset, tasks, devices)
        if result is None:
            continue
        cost, alloc = result
        cost += idle_cost
        if cost < best_cost - 1e-15:
            best_cost = cost
            best_alloc = alloc

    return _finish(scenario, best_alloc, start)


def _transportation_lp(scenario, subset, tasks, devices):
    """Min-power split of all tasks over a fixed activated server set."""
    servers = [scenario.topology.servers[i] for i in subset]
    n = len(tasks) * len(servers)
    c = np.empty(n)
    lb = np.zeros(n)
    ub = np.empty(n)
    for ti, t in enumerate(tasks):
        for si, s in enumerate(servers):
            j = ti * len(servers) + si
            c[j] = (
                s.marginal_w_per_mips
                + (t.traffic_mbps / t.workload_mips) * scenario.path_energy_w_per_mbps(s.id)
            )
            ub[j] = min(t.workload_mips, s.capacity_mips)

    rows = []
    rels = []
    b = []
    for si, s in enumerate(servers):
        row = np.zeros(n)
        for ti in range(len(tasks)):
            row[ti * len(servers) + si] = 1.0
        rows.append(row)
        rels.append("<=")
        b.append(s.capacity_mips)
    for dev in devices:
        row = np.zeros(n)
        hit = False
        for si, s in enumerate(servers):
            if dev.id not in scenario.routes[s.id].devices:
                continue
            for ti, t in enumerate(tasks):
                row[ti * len(servers) + si] = t.traffic_mbps / t.workload_mips
                hit = True
        if hit:
            rows.append(row)
            rels.append("<=")
            b.append(dev.capacity_mbps)
    for ti, t in enumerate(tasks):
        row = np.zeros(n)
        row[ti * len(servers):(ti + 1) * len(servers)] = 1.0
        rows.append(row)
        rels.append("=")
        b.append(t.workload_mips)

    result = solve_lp(c, np.array(rows), rels, np.array(b), lb, ub)
    if result.status != LP_OPTIMAL:
        return None
    alloc = {}
    for ti, t in enumerate(tasks):
        for si, s in enumerate(servers):
            v = float(result.x[ti * len(servers) + si])
            if v > 1e-9:
                alloc[t.id, s.id] = v
    return result.objective, alloc
