"""Exact branch-and-bound over the placement MILP.

Identical tasks (same workload, traffic and source cluster) are first merged
into per-server aggregates: a continuous total and, under single allocation,
an integer task count per server.  The reformulation is exact -- any
aggregate solution disaggregates into per-task placements by a transportation
fill -- and it removes the task-permutation symmetry that makes plain binary
branching intractable.  The reduced model is then presolved (coupling rows
substituted away, singleton rows folded into bounds, duplicate rows dropped)
and searched best-first, branching on fractional integers with activation
variables first.  LP bounds come from the bounded-variable simplex; the
incumbent is seeded by a greedy placement heuristic.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .milp import BINARY, MilpInstance, PowerBreakdown, build_milp, evaluate_power
from .simplex import INFEASIBLE as LP_INFEASIBLE
from .simplex import OPTIMAL as LP_OPTIMAL
from .simplex import NumericalFailure, solve_lp
from .model import Scenario

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
FEASIBLE = "Feasible"  # incumbent returned after hitting a limit, not proven
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class SolverOptions:
    gap_abs: float = 1e-9
    gap_rel: float = 1e-9
    node_limit: int = 1_000_000
    time_limit_ms: Optional[float] = None
    integrality_tol: float = 1e-6
    lp_tol: float = 1e-9


@dataclass
class SolveStats:
    bb_nodes: int = 0
    lp_iterations: int = 0
    runtime_ms: float = 0.0


@dataclass
class Solution:
    status: str
    objective_w: float
    allocation: dict[tuple[int, str], float]
    activations: tuple[str, ...]
    breakdown: Optional[PowerBreakdown]
    stats: SolveStats


# --------------------------------------------------------------------------
# Column models
# --------------------------------------------------------------------------

@dataclass
class _ColumnModel:
    """Column-space view the presolve and the search operate on.

    ``rows`` are mutable ``[name, coeffs, relation, rhs]`` records owned by
    the model instance (the presolve edits them in place).  ``extract`` maps
    a full column vector back to a per-task allocation, or returns None when
    the vector does not round to a whole placement.
    """

    names: list[str]
    lb: np.ndarray
    ub: np.ndarray
    integer: np.ndarray
    c: np.ndarray
    rows: list[list]
    extract: Callable[[np.ndarray], Optional[dict[tuple[int, str], float]]]


def _direct_model(instance: MilpInstance) -> _ColumnModel:
    n = instance.num_vars
    c = np.zeros(n)
    for col, coef in instance.objective.items():
        c[col] = coef
    x_cols = [
        (int(k), sid, col)
        for name, col in instance.var_index.items()
        if name.startswith("x[")
        for k, sid in [name[2:-1].split("][")]
    ]

    def extract(full: np.ndarray):
        return {(k, sid): float(full[col]) for k, sid, col in x_cols if full[col] > 1e-7}

    return _ColumnModel(
        names=[v.name for v in instance.variables],
        lb=np.array([v.lb for v in instance.variables]),
        ub=np.array([v.ub for v in instance.variables]),
        integer=np.array([v.integrality == BINARY for v in instance.variables]),
        c=c,
        rows=[[r.name, dict(r.coeffs), r.relation, r.rhs] for r in instance.rows],
        extract=extract,
    )


def _aggregated_model(instance: MilpInstance) -> Optional[_ColumnModel]:
    """Merge interchangeable tasks into per-server totals and counts.

    Applies only when the instance has the canonical structure emitted by
    ``build_milp`` (checked, not assumed) and at least two tasks coincide in
    workload, traffic and source cluster.  Returns None when not applicable,
    in which case the solver falls back to the direct column model.
    """
    scenario = instance.scenario
    if scenario is None or len(scenario.tasks) < 2:
        return None
    single = scenario.strategy == "Single"
    servers = [s.id for s in scenario.topology.servers]
    tasks = scenario.tasks
    task_by_id = {t.id: t for t in tasks}

    x_col: dict[tuple[int, str], int] = {}
    d_col: dict[tuple[int, str], int] = {}
    a_col: dict[str, int] = {}
    for name, col in instance.var_index.items():
        body = name[2:-1]
        if name.startswith("x["):
            k, sid = body.split("][")
            x_col[int(k), sid] = col
        elif name.startswith("d["):
            k, sid = body.split("][")
            d_col[int(k), sid] = col
        elif name.startswith("a["):
            a_col[body] = col
        else:
            return None

    cells = {(t.id, sid) for t in tasks for sid in servers}
    if set(x_col) != cells or set(a_col) != set(servers):
        return None
    if set(d_col) != (cells if single else set()):
        return None

    groups: dict[tuple, list] = {}
    for t in tasks:
        groups.setdefault((t.workload_mips, t.traffic_mbps, t.source_vf), []).append(t)
    group_list = list(groups.values())
    if max(len(g) for g in group_list) < 2:
        return None

    inst_lb = np.array([v.lb for v in instance.variables])
    inst_ub = np.array([v.ub for v in instance.variables])
    if np.any(inst_lb[list(x_col.values()) + list(d_col.values())] != 0.0):
        return None
    obj = instance.objective

    names: list[str] = []
    lb: list[float] = []
    ub: list[float] = []
    integer: list[bool] = []
    c: list[float] = []

    def add(name: str, lo: float, hi: float, is_int: bool, cost: float) -> int:
        names.append(name)
        lb.append(lo)
        ub.append(hi)
        integer.append(is_int)
        c.append(cost)
        return len(names) - 1

    def uniform(values: list[float]) -> Optional[float]:
        ref = values[0]
        scale = max(1.0, abs(ref))
        return ref if all(abs(v - ref) <= 1e-9 * scale for v in values) else None

    # column -> (aggregate column, group size); every member of a group must
    # appear with one identical coefficient for a row to aggregate.
    col_map: dict[int, tuple[int, int]] = {}
    X: dict[tuple[int, str], int] = {}
    N: dict[tuple[int, str], int] = {}
    for gi, group in enumerate(group_list):
        for sid in servers:
            members = [x_col[t.id, sid] for t in group]
            cost = uniform([obj.get(m, 0.0) for m in members])
            hi = uniform([float(inst_ub[m]) for m in members])
            if cost is None or hi is None:
                return None
            X[gi, sid] = add(f"xg[{gi}][{sid}]", 0.0, hi * len(members), False, cost)
            for m in members:
                col_map[m] = (X[gi, sid], len(members))
    for sid in servers:
        col = a_col[sid]
        a_idx = add(f"a[{sid}]", float(inst_lb[col]), float(inst_ub[col]),
                    True, obj.get(col, 0.0))
        col_map[col] = (a_idx, 1)
    if single:
        for gi, group in enumerate(group_list):
            w = group[0].workload_mips
            for sid in servers:
                members = [d_col[t.id, sid] for t in group]
                cost = uniform([obj.get(m, 0.0) for m in members])
                if cost is None:
                    return None
                fit = sum(
                    1 for t in group
                    if min(inst_ub[d_col[t.id, sid]], inst_ub[x_col[t.id, sid]] / w)
                    >= 1.0 - 1e-9
                )
                N[gi, sid] = add(f"ng[{gi}][{sid}]", 0.0, float(fit), True, cost)
                for m in members:
                    col_map[m] = (N[gi, sid], len(members))

    x_rev = {col: key for key, col in x_col.items()}
    d_rev = {col: key for key, col in d_col.items()}

    def canonical_structural(row) -> bool:
        """Check a dem/cpl/one row has exactly the shape build_milp emits."""
        coeffs = dict(row.coeffs)
        if row.relation != "=":
            return False
        if row.name.startswith("dem_"):
            keys = [x_rev.get(col) for col in coeffs]
            if None in keys or len({k for k, _ in keys}) != 1:
                return False
            k = keys[0][0]
            return (
                {sid for _, sid in keys} == set(servers)
                and all(v == 1.0 for v in coeffs.values())
                and row.rhs == task_by_id[k].workload_mips
            )
        if row.name.startswith("cpl_"):
            if len(coeffs) != 2 or row.rhs != 0.0:
                return False
            xs = [col for col in coeffs if col in x_rev]
            ds = [col for col in coeffs if col in d_rev]
            if len(xs) != 1 or len(ds) != 1 or x_rev[xs[0]] != d_rev[ds[0]]:
                return False
            k = x_rev[xs[0]][0]
            return coeffs[xs[0]] == 1.0 and coeffs[ds[0]] == -task_by_id[k].workload_mips
        if row.name.startswith("one_"):
            keys = [d_rev.get(col) for col in coeffs]
            if None in keys or len({k for k, _ in keys}) != 1:
                return False
            return (
                {sid for _, sid in keys} == set(servers)
                and all(v == 1.0 for v in coeffs.values())
                and row.rhs == 1.0
            )
        return False

    rows: list[list] = []
    for row in instance.rows:
        if row.name.startswith(("dem_", "one_", "cpl_")):
            if not canonical_structural(row):
                return None
            continue
        merged: dict[int, float] = {}
        seen: dict[int, int] = {}
        expected: dict[int, int] = {}
        ok = True
        for col, coef in row.coeffs:
            if col not in col_map:
                ok = False
                break
            agg, size = col_map[col]
            if agg in merged:
                if abs(merged[agg] - coef) > 1e-9 * max(1.0, abs(coef)):
                    ok = False
                    break
                seen[agg] += 1
            else:
                merged[agg] = coef
                seen[agg] = 1
                expected[agg] = size
        if not ok or any(seen[agg] != expected[agg] for agg in seen):
            return None
        rows.append([row.name, merged, row.relation, row.rhs])

    for gi, group in enumerate(group_list):
        w = group[0].workload_mips
        k = len(group)
        rows.append([f"dem_g{gi}", {X[gi, sid]: 1.0 for sid in servers}, "=", k * w])
        if single:
            for sid in servers:
                rows.append(
                    [f"cpl_g{gi}_{sid}", {X[gi, sid]: 1.0, N[gi, sid]: -w}, "=", 0.0]
                )
            rows.append([f"one_g{gi}", {N[gi, sid]: 1.0 for sid in servers}, "=", float(k)])

    def extract(full: np.ndarray):
        alloc: dict[tuple[int, str], float] = {}
        for gi, group in enumerate(group_list):
            w = group[0].workload_mips
            if single:
                counts = [int(round(float(full[N[gi, sid]]))) for sid in servers]
                if sum(counts) != len(group):
                    return None
                queue = iter(group)
                for sid, count in zip(servers, counts):
                    for _ in range(count):
                        alloc[next(queue).id, sid] = w
            else:
                # Transportation fill: walk servers in order, giving each task
                # its workload from the remaining per-server aggregate.
                budget = [float(full[X[gi, sid]]) for sid in servers]
                si = 0
                for t in group:
                    need = w
                    while need > 1e-6 * w and si < len(servers):
                        take = min(need, budget[si])
                        if take > 1e-9:
                            key = (t.id, servers[si])
                            alloc[key] = alloc.get(key, 0.0) + take
                            need -= take
                        budget[si] -= take
                        if budget[si] <= 1e-9 * w:
                            si += 1
                    if need > 1e-6 * w:
                        return None
        return alloc

    return _ColumnModel(
        names=names,
        lb=np.array(lb),
        ub=np.array(ub),
        integer=np.array(integer),
        c=np.array(c),
        rows=rows,
        extract=extract,
    )


# --------------------------------------------------------------------------
# Presolve
# --------------------------------------------------------------------------

class _Presolved:
    """Reduced LP arrays plus the bookkeeping to undo the reduction."""

    def __init__(self, model: _ColumnModel):
        self.model = model
        self.lb = model.lb
        self.ub = model.ub
        self.integer = model.integer
        self.c = model.c
        # Rows are mutable [name, coeffs, relation, rhs] records; coefficient
        # dicts are shared so substitutions update every pending row at once.
        self.rows = model.rows
        self.obj_const = 0.0
        # Undo log, replayed in reverse: ("fix", col, value) or
        # ("subst", col, coef, other_col).
        self.undo: list[tuple] = []
        self.infeasible = False
        self.infeasibility_reason: Optional[str] = None
        self._reduce()

    def _mark_infeasible(self, reason: str) -> None:
        self.infeasible = True
        self.infeasibility_reason = reason

    def _tighten_integers(self) -> bool:
        mask = self.integer
        self.ub[mask] = np.floor(self.ub[mask] + 1e-9)
        self.lb[mask] = np.ceil(self.lb[mask] - 1e-9)
        if np.any(self.lb > self.ub + 1e-9):
            self._mark_infeasible("integer rounding empties a variable domain")
            return False
        return True

    def _reduce(self) -> None:
        if not self._tighten_integers():
            return
        eliminated: set[int] = set()
        changed = True
        passes = 0
        while changed and passes < 8 and not self.infeasible:
            passes += 1
            changed = False
            keep = []
            for row in self.rows:
                name, coeffs, rel, rhs = row
                for col in [c for c, v in coeffs.items() if c in eliminated or v == 0.0]:
                    del coeffs[col]
                if not coeffs:
                    if (rel == "=" and abs(rhs) > 1e-7) or (rel == "<=" and rhs < -1e-7):
                        self._mark_infeasible(f"row {name} is unsatisfiable")
                        return
                    changed = True
                    continue
                if len(coeffs) == 1:
                    (col, coef), = coeffs.items()
                    val = rhs / coef
                    if rel == "=":
                        if val < self.lb[col] - 1e-7 or val > self.ub[col] + 1e-7:
                            self._mark_infeasible(f"row {name} fixes a variable outside its bounds")
                            return
                        self.lb[col] = self.ub[col] = val
                    elif coef > 0:
                        self.ub[col] = min(self.ub[col], val)
                    else:
                        self.lb[col] = max(self.lb[col], val)
                    if self.lb[col] > self.ub[col] + 1e-9:
                        self._mark_infeasible(f"row {name} empties a variable domain")
                        return
                    changed = True
                    continue
                if rel == "=" and len(coeffs) == 2 and rhs == 0.0:
                    # alpha*x_i + beta*x_j = 0; eliminate a continuous x_i.
                    (i, alpha), (j, beta) = sorted(coeffs.items())
                    if self.integer[i] and not self.integer[j]:
                        i, alpha, j, beta = j, beta, i, alpha
                    if not self.integer[i]:
                        self._substitute(i, -beta / alpha, j, eliminated)
                        if self.infeasible:
                            return
                        changed = True
                        continue
                keep.append(row)
            self.rows = keep
            if self._apply_fixed(eliminated):
                changed = True
            if not self._tighten_integers():
                return
        self._strengthen_big_m()
        self._drop_duplicate_rows()
        self._finalize(eliminated)

    def _strengthen_big_m(self) -> None:
        """Round activation big-M coefficients down to integer-reachable load.

        A row ``alpha*n - C*a <= 0`` with integer ``n >= 0`` and binary ``a``
        only ever sees multiples of alpha on the left, so C can shrink to
        ``alpha*floor(C/alpha)`` without cutting any integer solution.
        """
        for name, coeffs, rel, rhs in self.rows:
            if rel != "<=" or rhs != 0.0 or len(coeffs) != 2:
                continue
            (i, ci), (j, cj) = coeffs.items()
            if ci < 0:
                (i, ci), (j, cj) = (j, cj), (i, ci)
            if not (ci > 0 and cj < 0):
                continue
            if not (self.integer[i] and self.lb[i] >= 0.0):
                continue
            if not (self.integer[j] and self.lb[j] == 0.0 and self.ub[j] == 1.0):
                continue
            tightened = -ci * math.floor(-cj / ci + 1e-9)
            if tightened > cj:
                coeffs[j] = tightened

    def _substitute(self, i: int, coef: float, j: int, eliminated: set[int]) -> None:
        """Replace x_i by coef * x_j everywhere (coef != 0)."""
        if coef > 0:
            lo, hi = self.lb[i] / coef, self.ub[i] / coef
        else:
            lo, hi = self.ub[i] / coef, self.lb[i] / coef
        self.lb[j] = max(self.lb[j], lo)
        self.ub[j] = min(self.ub[j], hi)
        if self.lb[j] > self.ub[j] + 1e-9:
            self._mark_infeasible("substitution empties a variable domain")
            return
        for _, coeffs, _, _ in self.rows:
            if i in coeffs:
                ci = coeffs.pop(i)
                coeffs[j] = coeffs.get(j, 0.0) + ci * coef
        self.c[j] += self.c[i] * coef
        self.c[i] = 0.0
        eliminated.add(i)
        self.undo.append(("subst", i, coef, j))

    def _apply_fixed(self, eliminated: set[int]) -> bool:
        """Fold variables with collapsed domains into row constants."""
        fixed = [
            col for col in range(len(self.c))
            if col not in eliminated and self.ub[col] - self.lb[col] <= 1e-12
        ]
        if not fixed:
            return False
        fixed_set = set(fixed)
        for row in self.rows:
            coeffs = row[1]
            delta = 0.0
            for col in list(coeffs):
                if col in fixed_set:
                    delta += coeffs.pop(col) * self.lb[col]
            if delta:
                row[3] -= delta
        for col in fixed:
            self.obj_const += self.c[col] * self.lb[col]
            self.c[col] = 0.0
            eliminated.add(col)
            self.undo.append(("fix", col, float(self.lb[col])))
        return True

    def _drop_duplicate_rows(self) -> None:
        seen = set()
        out = []
        for name, coeffs, rel, rhs in self.rows:
            norm = max(abs(v) for v in coeffs.values())
            first = min(coeffs)
            sign = 1.0 if coeffs[first] > 0 else -1.0
            if rel == "<=" and sign < 0:
                key = None  # cannot flip an inequality; keep as-is
            else:
                scale = sign / norm
                key = (
                    rel,
                    tuple(sorted((c, round(v * scale, 12)) for c, v in coeffs.items())),
                    round(rhs * scale, 9),
                )
            if key is not None and key in seen:
                continue
            if key is not None:
                seen.add(key)
            out.append([name, coeffs, rel, rhs])
        self.rows = out

    def _finalize(self, eliminated: set[int]) -> None:
        n = len(self.c)
        keep = [col for col in range(n) if col not in eliminated]
        self.keep = keep
        self.red_of = {col: i for i, col in enumerate(keep)}
        m = len(self.rows)
        self.A = np.zeros((m, len(keep)))
        self.b = np.empty(m)
        self.relations = []
        for ri, (name, coeffs, rel, rhs) in enumerate(self.rows):
            for col, coef in coeffs.items():
                self.A[ri, self.red_of[col]] = coef
            self.b[ri] = rhs
            self.relations.append(rel)
        self.c_red = self.c[keep]
        self.lb_red = self.lb[keep]
        self.ub_red = self.ub[keep]
        self.integer_red = self.integer[keep]

    def restore(self, x_red: np.ndarray) -> np.ndarray:
        """Map a reduced solution back to the full column space."""
        full = np.zeros(len(self.c))
        for i, col in enumerate(self.keep):
            full[col] = x_red[i]
        for record in reversed(self.undo):
            if record[0] == "fix":
                _, col, val = record
                full[col] = val
            else:
                _, col, coef, j = record
                full[col] = coef * full[j]
        return full


# --------------------------------------------------------------------------
# Greedy incumbent
# --------------------------------------------------------------------------

def greedy_incumbent(scenario: Scenario) -> Optional[dict[tuple[int, str], float]]:
    """Feasible warm-start allocation, or None if the greedy pass gets stuck.

    Tasks in workload-descending order; each goes to the feasible server(s)
    with the lowest average watts per MIPS including any newly paid idle
    power.  Only used to seed the incumbent bound.
    """
    topo = scenario.topology
    servers = list(topo.servers)
    residual = {s.id: s.capacity_mips for s in servers}
    dev_residual = {d.id: d.capacity_mbps for d in topo.devices}
    active: set[str] = set()
    allocation: dict[tuple[int, str], float] = {}

    order = sorted(scenario.tasks, key=lambda t: (-t.workload_mips, t.id))
    split = scenario.strategy == "Distributed"
    for t in order:
        ratio = t.traffic_mbps / t.workload_mips
        remaining = t.workload_mips
        while remaining > 1e-9:
            best = None
            for idx, s in enumerate(servers):
                cap = residual[s.id]
                if cap <= 1e-9:
                    continue
                dev_room = min(
                    dev_residual[d] / ratio for d in scenario.routes[s.id].devices
                )
                q = min(remaining, cap, dev_room) if split else remaining
                if q <= 1e-9 or (not split and (cap + 1e-9 < remaining or dev_room + 1e-9 < remaining)):
                    continue
                unit = s.marginal_w_per_mips + ratio * scenario.path_energy_w_per_mbps(s.id)
                cost = unit * q + (s.idle_power_w if s.id not in active else 0.0)
                key = (cost / q, idx)
                if best is None or key < best[0:2]:
                    best = (cost / q, idx, s, q)
            if best is None:
                return None
            _, _, s, q = best
            allocation[t.id, s.id] = allocation.get((t.id, s.id), 0.0) + q
            residual[s.id] -= q
            for d in scenario.routes[s.id].devices:
                dev_residual[d] -= ratio * q
            active.add(s.id)
            remaining -= q
    return allocation


# --------------------------------------------------------------------------
# Branch and bound
# --------------------------------------------------------------------------

def branch_and_bound(instance: MilpInstance, opts: SolverOptions = SolverOptions()) -> Solution:
    """Solve the instance to proven optimality (or return a flagged incumbent)."""
    start = time.perf_counter()
    stats = SolveStats()
    scenario = instance.scenario

    def finish(status: str, allocation=None, objective=math.inf) -> Solution:
        stats.runtime_ms = (time.perf_counter() - start) * 1000.0
        if allocation is None:
            return Solution(status, objective, {}, (), None, stats)
        allocation = {k: v for k, v in allocation.items() if v > 1e-7}
        breakdown = evaluate_power(allocation, scenario)
        load: dict[str, float] = {}
        for (_, sid), v in allocation.items():
            load[sid] = load.get(sid, 0.0) + v
        activations = tuple(sorted(sid for sid, v in load.items() if v > 1e-9))
        return Solution(status, breakdown.total_w, allocation, activations, breakdown, stats)

    if instance.structurally_infeasible:
        return finish(INFEASIBLE)

    model = _aggregated_model(instance)
    if model is None:
        model = _direct_model(instance)
    pre = _Presolved(model)
    if pre.infeasible:
        return finish(INFEASIBLE)

    incumbent_alloc = greedy_incumbent(scenario)
    incumbent_obj = math.inf
    if incumbent_alloc is not None:
        try:
            incumbent_obj = evaluate_power(incumbent_alloc, scenario).total_w
        except Exception:
            incumbent_alloc, incumbent_obj = None, math.inf

    int_cols = np.nonzero(pre.integer_red)[0]
    names = [model.names[pre.keep[i]] for i in range(len(pre.keep))]
    is_activation = np.array([name.startswith("a[") for name in names])

    def gap_cut(value: float) -> float:
        return value - max(opts.gap_abs, opts.gap_rel * abs(value))

    def solve_node(lo: np.ndarray, hi: np.ndarray):
        result = solve_lp(
            pre.c_red, pre.A, pre.relations, pre.b, lo, hi,
            tol=opts.lp_tol,
        )
        stats.bb_nodes += 1
        stats.lp_iterations += result.iterations
        return result

    def candidate(x_red: np.ndarray) -> Optional[dict[tuple[int, str], float]]:
        allocation = model.extract(pre.restore(x_red))
        if allocation is None:
            return None
        try:
            evaluate_power(allocation, scenario)
        except Exception:
            return None
        return allocation

    # Best-first with lazy child evaluation: heap entries carry the parent
    # bound, the LP is solved when the node is popped.  Equal bounds break
    # last-in-first-out, so plateaus are explored as dives.
    heap: list[tuple[float, int, dict[int, tuple[float, float]]]] = []
    seq = 0
    heapq.heappush(heap, (-math.inf, 0, {}))
    proven = True

    while heap:
        if stats.bb_nodes >= opts.node_limit:
            proven = False
            break
        if opts.time_limit_ms is not None and (time.perf_counter() - start) * 1000.0 > opts.time_limit_ms:
            proven = False
            break
        parent_bound, _, fixes = heapq.heappop(heap)
        if incumbent_obj < math.inf and parent_bound >= gap_cut(incumbent_obj):
            continue
        lo = pre.lb_red.copy()
        hi = pre.ub_red.copy()
        for col, (flo, fhi) in fixes.items():
            lo[col], hi[col] = flo, fhi
        result = solve_node(lo, hi)
        if result.status == LP_INFEASIBLE:
            continue
        if result.status != LP_OPTIMAL:
            raise NumericalFailure(f"unexpected LP status {result.status}")
        bound = result.objective + pre.obj_const
        if incumbent_obj < math.inf and bound >= gap_cut(incumbent_obj):
            continue

        frac = np.abs(result.x[int_cols] - np.round(result.x[int_cols]))
        worst = frac.max(initial=0.0)
        if worst <= opts.integrality_tol:
            allocation = candidate(result.x)
            if allocation is not None and bound < incumbent_obj - 1e-12:
                incumbent_obj = bound
                incumbent_alloc = allocation
            continue

        # Branch: activation variables first, then most fractional, then index.
        cand = int_cols[frac > opts.integrality_tol]
        cand_frac = frac[frac > opts.integrality_tol]
        act = is_activation[cand]
        order = np.lexsort((cand, -cand_frac, ~act))
        col = int(cand[order[0]])
        v = float(result.x[col])
        for child_lo, child_hi in ((lo[col], math.floor(v)), (math.ceil(v), hi[col])):
            if child_lo > child_hi + 1e-9:
                continue
            child = dict(fixes)
            child[col] = (child_lo, child_hi)
            seq += 1
            heapq.heappush(heap, (bound, -seq, child))

    if incumbent_alloc is None:
        return finish(INFEASIBLE if proven else UNKNOWN)
    return finish(OPTIMAL if proven else FEASIBLE, incumbent_alloc, incumbent_obj)


def solve_scenario(
    scenario: Scenario,
    opts: SolverOptions = SolverOptions(),
    *,
    symmetry_breaking: bool = True,
) -> Solution:
    """Build the MILP for a scenario and solve it."""
    return branch_and_bound(build_milp(scenario, symmetry_breaking=symmetry_breaking), opts)
