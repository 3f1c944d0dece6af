"""Bounded-variable primal simplex, two phases, dense basis inverse.

Solves  min c.x  s.t.  A x (<=|=) b,  lb <= x <= ub.

The implementation keeps an explicit basis inverse (problems here have a few
hundred rows at most), scales columns by their bound magnitude and rows by
their largest entry, and falls back to Bland's rule after a degeneracy streak
so cycling cannot occur.  Results are deterministic for identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"

_AT_LB = 0
_AT_UB = 1
_BASIC = 2


class NumericalFailure(RuntimeError):
    """The simplex stalled past its iteration cap; no answer is returned."""


@dataclass
class LpResult:
    status: str
    objective: float
    x: np.ndarray  # structural variables only; empty unless Optimal
    iterations: int
    dual_residual: float


def solve_lp(
    c,
    A,
    relations,
    b,
    lb,
    ub,
    *,
    tol: float = 1e-9,
    max_iter: int = 50000,
) -> LpResult:
    """Solve one LP.  ``relations`` is a sequence of "<=" / "=" per row."""
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    lb = np.asarray(lb, dtype=float)
    ub = np.asarray(ub, dtype=float)
    m, n = A.shape if A.ndim == 2 else (0, c.size)

    if np.any(lb > ub + 1e-12):
        return LpResult(INFEASIBLE, np.inf, np.empty(0), 0, 0.0)
    if m == 0:
        x = np.where(c >= 0, lb, ub)
        return LpResult(OPTIMAL, float(c @ x), x, 0, 0.0)

    # Column scaling by bound magnitude, then row scaling by largest entry.
    col_scale = np.maximum(1.0, np.abs(ub))
    col_scale[~np.isfinite(col_scale)] = np.maximum(1.0, np.abs(lb[~np.isfinite(col_scale)]))
    As = A * col_scale
    row_scale = np.max(np.abs(As), axis=1)
    row_scale[row_scale == 0] = 1.0
    As = As / row_scale[:, None]
    bs = b / row_scale
    cs = c * col_scale
    lbs = lb / col_scale
    ubs = ub / col_scale

    eq = np.array([r == "=" for r in relations], dtype=bool)
    n_slack = int((~eq).sum())

    # Full column set: structural, slacks, artificials.
    n_total = n + n_slack + m
    Afull = np.zeros((m, n_total))
    Afull[:, :n] = As
    slack_of_row = np.full(m, -1, dtype=int)
    j = n
    for i in range(m):
        if not eq[i]:
            Afull[i, j] = 1.0
            slack_of_row[i] = j
            j += 1

    lbf = np.concatenate([lbs, np.zeros(n_slack + m)])
    ubf = np.concatenate([ubs, np.full(n_slack, np.inf), np.zeros(m)])

    vals = np.concatenate([np.where(np.isfinite(lbs), lbs, ubs), np.zeros(n_slack + m)])
    status = np.full(n_total, _AT_LB, dtype=np.int8)

    resid = bs - Afull[:, :n] @ vals[:n]
    basis = np.empty(m, dtype=int)
    art_cols = []
    for i in range(m):
        sj = slack_of_row[i]
        if sj >= 0 and resid[i] >= 0.0:
            basis[i] = sj
            vals[sj] = resid[i]
        else:
            aj = n + n_slack + i
            Afull[i, aj] = 1.0 if resid[i] >= 0 else -1.0
            ubf[aj] = np.inf
            vals[aj] = abs(resid[i])
            basis[i] = aj
            art_cols.append(aj)
    status[basis] = _BASIC

    state = _State(Afull, bs, lbf, ubf, vals, status, basis, tol, max_iter)

    if art_cols:
        c1 = np.zeros(n_total)
        c1[art_cols] = 1.0
        status1, _ = state.run(c1)
        if status1 == UNBOUNDED:
            raise NumericalFailure("phase 1 reported unbounded")
        if float(c1 @ state.vals) > 1e-7 * max(1.0, np.abs(bs).max()):
            return LpResult(INFEASIBLE, np.inf, np.empty(0), state.iterations, 0.0)
        # Pin artificials to zero for phase 2.
        state.ub[art_cols] = 0.0
        state.vals[art_cols] = np.minimum(state.vals[art_cols], 0.0)

    c2 = np.zeros(n_total)
    c2[:n] = cs
    status2, dual_residual = state.run(c2)
    if status2 == UNBOUNDED:
        return LpResult(UNBOUNDED, -np.inf, np.empty(0), state.iterations, 0.0)

    x = state.vals[:n] * col_scale
    x = np.clip(x, lb, ub)
    return LpResult(OPTIMAL, float(c @ x), x, state.iterations, dual_residual)


class _State:
    """Mutable simplex state shared by the two phases."""

    def __init__(self, Afull, b, lb, ub, vals, status, basis, tol, max_iter):
        self.A = Afull
        self.b = b
        self.lb = lb
        self.ub = ub
        self.vals = vals
        self.status = status
        self.basis = basis
        self.tol = tol
        self.max_iter = max_iter
        self.iterations = 0
        self.Binv = self._factorize()

    def _factorize(self) -> np.ndarray:
        B = self.A[:, self.basis]
        try:
            return np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure("singular basis") from exc

    def _recompute_basics(self) -> None:
        nonbasic_mask = self.status != _BASIC
        rhs = self.b - self.A[:, nonbasic_mask] @ self.vals[nonbasic_mask]
        self.vals[self.basis] = self.Binv @ rhs

    def run(self, costs: np.ndarray) -> tuple[str, float]:
        tol_d = max(1e-9, self.tol) * max(1.0, float(np.abs(costs).max()))
        tol_p = 1e-10
        bland = False
        degen_streak = 0
        since_refactor = 0

        while True:
            if self.iterations >= self.max_iter:
                raise NumericalFailure(
                    f"simplex iteration cap {self.max_iter} exceeded"
                )

            y = costs[self.basis] @ self.Binv
            z = costs - y @ self.A
            at_lb = self.status == _AT_LB
            at_ub = self.status == _AT_UB
            free = self.ub > self.lb  # fixed columns never enter
            down = at_lb & free & (z < -tol_d)
            up = at_ub & free & (z > tol_d)
            cand = np.nonzero(down | up)[0]
            if cand.size == 0:
                viol = np.concatenate([z[at_lb & free], -z[at_ub & free], [0.0]])
                dual_residual = float(max(0.0, -viol.min()))
                return OPTIMAL, dual_residual
            if bland:
                j = int(cand[0])
            else:
                j = int(cand[np.argmax(np.abs(z[cand]))])
            sigma = 1.0 if self.status[j] == _AT_LB else -1.0

            w = self.Binv @ self.A[:, j]
            xB = self.vals[self.basis]
            lbB = self.lb[self.basis]
            ubB = self.ub[self.basis]

            # Step limits: each basic hitting a bound, or the entering
            # variable reaching its opposite bound.
            sw = sigma * w
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(
                    sw > tol_p, (xB - lbB) / sw,
                    np.where(sw < -tol_p, (ubB - xB) / (-sw), np.inf),
                )
            ratios = np.maximum(ratios, 0.0)
            t_self = self.ub[j] - self.lb[j]
            r = int(np.argmin(ratios))
            t_basic = float(ratios[r])
            t = min(t_basic, t_self)
            if not np.isfinite(t):
                return UNBOUNDED, 0.0

            self.iterations += 1
            if t <= tol_p:
                degen_streak += 1
                if degen_streak > 100:
                    bland = True
            else:
                degen_streak = 0
                bland = False

            self.vals[j] += sigma * t
            self.vals[self.basis] = xB - sw * t

            if t_self <= t_basic:
                # Bound flip: entering variable runs to its other bound.
                self.status[j] = _AT_UB if self.status[j] == _AT_LB else _AT_LB
                continue

            leaving = int(self.basis[r])
            hit_lb = sw[r] > 0
            self.vals[leaving] = self.lb[leaving] if hit_lb else self.ub[leaving]
            self.status[leaving] = _AT_LB if hit_lb else _AT_UB
            self.status[j] = _BASIC
            self.basis[r] = j

            piv = w[r]
            if abs(piv) < 1e-11:
                self.Binv = self._factorize()
                self._recompute_basics()
                continue
            self.Binv[r] /= piv
            rows = np.arange(len(w)) != r
            self.Binv[rows] -= np.outer(w[rows], self.Binv[r])

            since_refactor += 1
            if since_refactor >= 300:
                self.Binv = self._factorize()
                self._recompute_basics()
                since_refactor = 0
