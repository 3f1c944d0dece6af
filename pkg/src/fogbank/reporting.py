"""Aggregation, validation and serialization of solver output.

Server ids encode their class (``cc1``, ``lf1``, ``nf1``, ``vf2_vn3``), so
breakdowns need only the solution.  The validator is a genuine second
opinion: it re-derives every constraint from the scenario and never looks at
the MILP instance.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

from .bnb import OPTIMAL, Solution
from .milp import evaluate_power
from .model import Scenario

CSV_COLUMNS = [
    "variant", "strategy", "workload_mips", "status", "total_w",
    "processing_w", "networking_w", "alloc_cc", "alloc_lf", "alloc_nf",
    "alloc_vf1", "alloc_vf2", "alloc_vf3", "alloc_vf4", "bb_nodes",
    "runtime_ms",
]


@dataclass(frozen=True)
class Violation:
    constraint: str
    lhs: float
    rhs: float
    slack: float


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]


def _node_class(server_id: str) -> str:
    if server_id.startswith("cc"):
        return "CC"
    if server_id.startswith("lf"):
        return "LF"
    if server_id.startswith("nf"):
        return "NF"
    if server_id.startswith("vf"):
        return "VF"
    raise ValueError(f"cannot classify server id {server_id!r}")


def node_breakdown(solution: Solution) -> dict[str, float]:
    """Allocated MIPS per node class {CC, LF, NF, VF}."""
    if solution.status != OPTIMAL:
        raise ValueError(f"need an Optimal solution, got {solution.status}")
    out = {"CC": 0.0, "LF": 0.0, "NF": 0.0, "VF": 0.0}
    for (_, sid), v in solution.allocation.items():
        out[_node_class(sid)] += v
    return out


def vf_breakdown(solution: Solution) -> dict[str, float]:
    """Allocated MIPS per vehicular fog cluster (``vf1``...)."""
    if solution.status != OPTIMAL:
        raise ValueError(f"need an Optimal solution, got {solution.status}")
    out: dict[str, float] = {}
    for (_, sid), v in solution.allocation.items():
        if sid.startswith("vf"):
            vf = sid.split("_", 1)[0]
            out[vf] = out.get(vf, 0.0) + v
    return out


def validate(solution: Solution, scenario: Scenario, *, tol: float = 1e-6) -> ValidationReport:
    """Check an allocation against the scenario's constraints.

    Re-derives capacity, link-capacity, demand-coverage and (for single
    allocation) one-node rows from the scenario, then cross-checks the
    reported objective against an independent power recomputation.
    """
    violations: list[Violation] = []
    alloc = solution.allocation
    topo = scenario.topology

    load: dict[str, float] = {}
    covered: dict[int, float] = {}
    traffic: dict[str, float] = {}
    for (k, sid), v in alloc.items():
        load[sid] = load.get(sid, 0.0) + v
        covered[k] = covered.get(k, 0.0) + v
        t = next(t for t in scenario.tasks if t.id == k)
        mbps = t.traffic_mbps * v / t.workload_mips
        for dev in scenario.routes[sid].devices:
            traffic[dev] = traffic.get(dev, 0.0) + mbps

    for s in topo.servers:
        lhs = load.get(s.id, 0.0)
        if lhs > s.capacity_mips + tol * max(1.0, s.capacity_mips):
            violations.append(Violation(f"cap_{s.id}", lhs, s.capacity_mips, s.capacity_mips - lhs))
    for d in topo.devices:
        lhs = traffic.get(d.id, 0.0)
        if lhs > d.capacity_mbps + tol * max(1.0, d.capacity_mbps):
            violations.append(Violation(f"dev_{d.id}", lhs, d.capacity_mbps, d.capacity_mbps - lhs))
    for t in scenario.tasks:
        lhs = covered.get(t.id, 0.0)
        if abs(lhs - t.workload_mips) > tol * max(1.0, t.workload_mips):
            violations.append(Violation(f"dem_{t.id}", lhs, t.workload_mips, t.workload_mips - lhs))
    if scenario.strategy == "Single":
        for t in scenario.tasks:
            hosts = [sid for (k, sid), v in alloc.items() if k == t.id and v > tol * t.workload_mips]
            if len(hosts) > 1:
                violations.append(Violation(f"one_{t.id}", float(len(hosts)), 1.0, 1.0 - len(hosts)))

    if not violations:
        recomputed = evaluate_power(alloc, scenario, check_feasible=False).total_w
        if abs(recomputed - solution.objective_w) > tol * max(1.0, abs(recomputed)):
            violations.append(
                Violation("objective", solution.objective_w, recomputed,
                          recomputed - solution.objective_w)
            )

    return ValidationReport(ok=not violations, violations=tuple(violations))


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------

def _fmt(value: float) -> str:
    """Render a real with 6 significant digits ('.' separator)."""
    return f"{value:.6g}"


def emit_csv(rows) -> bytes:
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for r in rows:
        out.write(
            ",".join([
                r.variant, r.strategy, _fmt(r.workload_mips), r.status,
                _fmt(r.total_w), _fmt(r.processing_w), _fmt(r.networking_w),
                _fmt(r.alloc_cc), _fmt(r.alloc_lf), _fmt(r.alloc_nf),
                _fmt(r.alloc_vf1), _fmt(r.alloc_vf2), _fmt(r.alloc_vf3),
                _fmt(r.alloc_vf4), str(r.bb_nodes), _fmt(r.runtime_ms),
            ]) + "\n"
        )
    return out.getvalue().encode()


def parse_csv(data: bytes):
    """Inverse of emit_csv (values carry the 6-significant-digit rendering)."""
    from .sweep import SweepRow

    lines = data.decode().splitlines()
    if not lines or lines[0].split(",") != CSV_COLUMNS:
        raise ValueError("unexpected CSV header")
    rows = []
    for line in lines[1:]:
        f = line.split(",")
        rows.append(SweepRow(
            variant=f[0], strategy=f[1], workload_mips=float(f[2]), status=f[3],
            total_w=float(f[4]), processing_w=float(f[5]), networking_w=float(f[6]),
            alloc_cc=float(f[7]), alloc_lf=float(f[8]), alloc_nf=float(f[9]),
            alloc_vf1=float(f[10]), alloc_vf2=float(f[11]), alloc_vf3=float(f[12]),
            alloc_vf4=float(f[13]), bb_nodes=int(f[14]), runtime_ms=float(f[15]),
        ))
    return rows


def emit_solution_json(solution: Solution) -> bytes:
    """Stable-key-order JSON for one solution."""
    doc = {
        "status": solution.status,
        "objective_w": solution.objective_w if solution.allocation else None,
        "allocation": [
            {"task": k, "server": sid, "mips": v}
            for (k, sid), v in sorted(solution.allocation.items())
        ],
        "activations": list(solution.activations),
        "breakdown": None,
        "stats": {
            "bb_nodes": solution.stats.bb_nodes,
            "lp_iterations": solution.stats.lp_iterations,
            "runtime_ms": solution.stats.runtime_ms,
        },
    }
    if solution.breakdown is not None:
        bd = solution.breakdown
        doc["breakdown"] = {
            "processing_w": bd.processing_w,
            "networking_w": bd.networking_w,
            "total_w": bd.total_w,
            "per_server_w": {k: bd.per_server_w[k] for k in sorted(bd.per_server_w)},
            "per_device_w": {k: bd.per_device_w[k] for k in sorted(bd.per_device_w)},
        }
    return (json.dumps(doc, indent=2) + "\n").encode()
