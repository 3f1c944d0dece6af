"""Translate a scenario into a mixed-integer linear program.

Variables (semantic names map to columns through ``var_index``):

* ``x[k][s]``  continuous MIPS of task k placed on server s
* ``a[s]``     binary activation of server s
* ``d[k][s]``  binary whole-task assignment (single-allocation strategy only)

The objective is total power in watts: per-server idle power when active,
marginal processing power per allocated MIPS, and network power for the
traffic each allocation pushes along its route.  Traffic of a split task
follows its workload proportionally, which keeps the model linear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .model import Scenario, ValidationError

CONTINUOUS = "continuous"
BINARY = "binary"

Allocation = Mapping[tuple[int, str], float]


class AllocationError(ValueError):
    """Raised when an allocation violates coverage or capacity constraints."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class Variable:
    name: str
    lb: float
    ub: float
    integrality: str  # CONTINUOUS or BINARY


@dataclass(frozen=True)
class Row:
    name: str
    coeffs: tuple[tuple[int, float], ...]  # (column, coefficient), column-sorted
    relation: str  # "<=" or "="
    rhs: float


@dataclass
class MilpInstance:
    variables: list[Variable]
    rows: list[Row]
    objective: dict[int, float]
    var_index: dict[str, int]
    scenario: Scenario
    structurally_infeasible: bool = False
    infeasibility_reason: Optional[str] = None

    @property
    def num_vars(self) -> int:
        return len(self.variables)


def build_milp(scenario: Scenario, *, symmetry_breaking: bool = True) -> MilpInstance:
    """Build the placement MILP for a scenario.

    Constraint rows are named ``cap_<server>``, ``dev_<device>``,
    ``dem_<task>``; the single-allocation coupling rows are ``cpl_<k>_<s>``
    and ``one_<k>``, and symmetry-breaking rows among identical servers are
    ``sb_act_*`` / ``sb_load_*``.
    """
    topo = scenario.topology
    tasks = scenario.tasks
    servers = topo.servers
    single = scenario.strategy == "Single"

    variables: list[Variable] = []
    var_index: dict[str, int] = {}

    def add_var(name: str, lb: float, ub: float, integrality: str) -> int:
        col = len(variables)
        variables.append(Variable(name, lb, ub, integrality))
        var_index[name] = col
        return col

    x = {}
    for t in tasks:
        for s in servers:
            x[t.id, s.id] = add_var(
                f"x[{t.id}][{s.id}]", 0.0,
                min(t.workload_mips, s.capacity_mips), CONTINUOUS,
            )
    a = {s.id: add_var(f"a[{s.id}]", 0.0, 1.0, BINARY) for s in servers}
    d = {}
    if single:
        for t in tasks:
            for s in servers:
                d[t.id, s.id] = add_var(f"d[{t.id}][{s.id}]", 0.0, 1.0, BINARY)

    objective: dict[int, float] = {}
    for s in servers:
        objective[a[s.id]] = s.idle_power_w
    for t in tasks:
        ratio = t.traffic_mbps / t.workload_mips
        for s in servers:
            rate = s.marginal_w_per_mips + ratio * scenario.path_energy_w_per_mbps(s.id)
            objective[x[t.id, s.id]] = rate

    rows: list[Row] = []

    def add_row(name: str, coeffs: dict[int, float], relation: str, rhs: float) -> None:
        items = tuple(sorted((c, v) for c, v in coeffs.items() if v != 0.0))
        rows.append(Row(name, items, relation, rhs))

    for s in servers:
        coeffs = {x[t.id, s.id]: 1.0 for t in tasks}
        coeffs[a[s.id]] = -s.capacity_mips
        add_row(f"cap_{s.id}", coeffs, "<=", 0.0)

    for dev in topo.devices:
        coeffs: dict[int, float] = {}
        for s in servers:
            if dev.id not in scenario.routes[s.id].devices:
                continue
            for t in tasks:
                coeffs[x[t.id, s.id]] = t.traffic_mbps / t.workload_mips
        if coeffs:
            add_row(f"dev_{dev.id}", coeffs, "<=", dev.capacity_mbps)

    for t in tasks:
        add_row(f"dem_{t.id}", {x[t.id, s.id]: 1.0 for s in servers}, "=", t.workload_mips)

    if single:
        for t in tasks:
            for s in servers:
                add_row(
                    f"cpl_{t.id}_{s.id}",
                    {x[t.id, s.id]: 1.0, d[t.id, s.id]: -t.workload_mips},
                    "=", 0.0,
                )
            add_row(f"one_{t.id}", {d[t.id, s.id]: 1.0 for s in servers}, "=", 1.0)

    if symmetry_breaking:
        for group in _identical_groups(scenario):
            for i in range(len(group) - 1):
                s_hi, s_lo = group[i], group[i + 1]
                add_row(f"sb_act_{s_lo}", {a[s_lo]: 1.0, a[s_hi]: -1.0}, "<=", 0.0)
                coeffs = {x[t.id, s_lo]: 1.0 for t in tasks}
                for t in tasks:
                    coeffs[x[t.id, s_hi]] = coeffs.get(x[t.id, s_hi], 0.0) - 1.0
                add_row(f"sb_load_{s_lo}", coeffs, "<=", 0.0)

    instance = MilpInstance(variables, rows, objective, var_index, scenario)

    total_cap = sum(s.capacity_mips for s in servers)
    demand = scenario.total_workload_mips
    if demand > total_cap + 1e-9:
        instance.structurally_infeasible = True
        instance.infeasibility_reason = (
            f"total demand {demand:g} MIPS exceeds reachable capacity {total_cap:g} MIPS"
        )
    elif single:
        max_cap = max((s.capacity_mips for s in servers), default=0.0)
        worst = max(t.workload_mips for t in tasks)
        if worst > max_cap + 1e-9:
            instance.structurally_infeasible = True
            instance.infeasibility_reason = (
                f"task workload {worst:g} MIPS exceeds every server capacity "
                f"under single allocation"
            )
    return instance


def _identical_groups(scenario: Scenario) -> list[list[str]]:
    """Interchangeable-server groups: same spec and same route.

    Servers within one group share capacity, power profile and device path,
    so any solution can be re-sorted to non-increasing load over the group.
    """
    groups: dict[tuple, list[str]] = {}
    for s in scenario.topology.servers:
        key = (s.tier, s.vf_id, s.capacity_mips, s.idle_power_w, s.max_power_w,
               scenario.routes[s.id].devices)
        groups.setdefault(key, []).append(s.id)
    return [g for g in groups.values() if len(g) > 1]


# --------------------------------------------------------------------------
# Independent power evaluation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerBreakdown:
    processing_w: float
    networking_w: float
    total_w: float
    per_server_w: dict[str, float]
    per_device_w: dict[str, float]


def evaluate_power(
    allocation: Allocation,
    scenario: Scenario,
    *,
    check_feasible: bool = True,
    tol: float = 1e-6,
) -> PowerBreakdown:
    """Recompute total power for an allocation from first principles.

    Deliberately avoids the MILP coefficient path: walks servers, routes and
    device profiles directly.  Activation is inferred from positive load.
    """
    topo = scenario.topology
    tasks_by_id = {t.id: t for t in scenario.tasks}

    if check_feasible:
        violations = []
        for (k, sid), v in allocation.items():
            if k not in tasks_by_id:
                violations.append(f"unknown task {k}")
            elif v < -tol * tasks_by_id[k].workload_mips:
                violations.append(f"negative allocation x[{k}][{sid}] = {v:g}")
        covered: dict[int, float] = {}
        for (k, sid), v in allocation.items():
            covered[k] = covered.get(k, 0.0) + v
        for t in scenario.tasks:
            got = covered.get(t.id, 0.0)
            if abs(got - t.workload_mips) > tol * max(1.0, t.workload_mips):
                violations.append(
                    f"dem_{t.id}: allocated {got:g} of {t.workload_mips:g} MIPS"
                )
        for s in topo.servers:
            load = sum(v for (k, sid), v in allocation.items() if sid == s.id)
            if load > s.capacity_mips * (1.0 + tol) + tol:
                violations.append(
                    f"cap_{s.id}: load {load:g} exceeds capacity {s.capacity_mips:g}"
                )
        if violations:
            raise AllocationError(violations)

    per_server: dict[str, float] = {}
    per_device: dict[str, float] = {}
    traffic: dict[str, float] = {}

    load: dict[str, float] = {}
    for (k, sid), v in allocation.items():
        if v <= 0.0:
            continue
        load[sid] = load.get(sid, 0.0) + v
        t = tasks_by_id[k]
        mbps = t.traffic_mbps * v / t.workload_mips
        for dev_id in scenario.routes[sid].devices:
            traffic[dev_id] = traffic.get(dev_id, 0.0) + mbps

    processing = 0.0
    for s in topo.servers:
        mips = load.get(s.id, 0.0)
        if mips > 0.0:
            w = s.idle_power_w + s.marginal_w_per_mips * mips
            per_server[s.id] = w
            processing += w
    networking = 0.0
    for dev in topo.devices:
        mbps = traffic.get(dev.id, 0.0)
        if mbps > 0.0:
            w = dev.energy_per_mbps_w * mbps
            per_device[dev.id] = w
            networking += w

    return PowerBreakdown(
        processing_w=processing,
        networking_w=networking,
        total_w=processing + networking,
        per_server_w=per_server,
        per_device_w=per_device,
    )


# --------------------------------------------------------------------------
# LP-format export
# --------------------------------------------------------------------------

def _lp_name(name: str) -> str:
    return name.replace("[", "_").replace("]", "").replace(" ", "")


def export_lp(instance: MilpInstance) -> str:
    """Render the instance in CPLEX LP text format for external cross-checks."""
    lines = ["Minimize", " obj:"]
    terms = []
    for col, coef in sorted(instance.objective.items()):
        terms.append(f" {'+' if coef >= 0 else '-'} {abs(coef):.12g} {_lp_name(instance.variables[col].name)}")
    lines.extend(" " + " ".join(terms[i:i + 6]) for i in range(0, len(terms), 6))

    lines.append("Subject To")
    for row in instance.rows:
        parts = []
        for col, coef in row.coeffs:
            parts.append(f"{'+' if coef >= 0 else '-'} {abs(coef):.12g} {_lp_name(instance.variables[col].name)}")
        rel = "<=" if row.relation == "<=" else "="
        lines.append(f" {row.name}: {' '.join(parts)} {rel} {row.rhs:.12g}")

    lines.append("Bounds")
    for v in instance.variables:
        if v.integrality == BINARY and v.lb == 0.0 and v.ub == 1.0:
            continue
        lines.append(f" {v.lb:.12g} <= {_lp_name(v.name)} <= {v.ub:.12g}")

    binaries = [v for v in instance.variables if v.integrality == BINARY]
    if binaries:
        lines.append("Binaries")
        for i in range(0, len(binaries), 8):
            lines.append(" " + " ".join(_lp_name(v.name) for v in binaries[i:i + 8]))
    lines.append("End")
    return "\n".join(lines) + "\n"
