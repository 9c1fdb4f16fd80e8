"""Two-phase primal simplex on a dense tableau.

Problem sizes in this package are tiny (a 3x3 distribution problem gives
9 variables and 12 constraints), so everything is kept dense and simple.
Dantzig pricing runs by default; Bland's rule takes over permanently
once the objective stalls long enough to suggest degenerate cycling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["LinearProgram", "SimplexSolution", "solve", "PIVOT_TOL", "FEAS_TOL"]

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7

RELATIONS = ("<=", ">=", "=")


@dataclass(frozen=True)
class LinearProgram:
    """max/min c.x subject to row constraints and implicit x >= 0."""

    objective: tuple
    sense: str
    constraints: tuple  # of (coeffs tuple, relation, rhs)

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")
        n = len(self.objective)
        if n == 0:
            raise ValueError("objective must have at least one coefficient")
        if not all(math.isfinite(c) for c in self.objective):
            raise ValueError("objective coefficients must be finite")
        for i, (coeffs, rel, rhs) in enumerate(self.constraints):
            if len(coeffs) != n:
                raise ValueError(
                    f"constraint {i} has {len(coeffs)} coefficients, expected {n}"
                )
            if rel not in RELATIONS:
                raise ValueError(f"constraint {i} relation {rel!r} not one of {RELATIONS}")
            if not all(math.isfinite(c) for c in coeffs) or not math.isfinite(rhs):
                raise ValueError(f"constraint {i} has non-finite entries")

    @property
    def n_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class SimplexSolution:
    status: str  # optimal | infeasible | unbounded
    x: tuple | None
    objective_value: float | None
    iterations: int


class _Tableau:
    """Mutable simplex tableau: constraint rows plus one objective row."""

    def __init__(self, mat: np.ndarray, basis: list):
        self.mat = mat
        self.basis = basis
        self.iterations = 0
        self.use_bland = False
        self._stall = 0

    def pivot(self, row: int, col: int):
        mat = self.mat
        mat[row] /= mat[row, col]
        for r in range(mat.shape[0]):
            if r != row and mat[r, col] != 0.0:
                mat[r] -= mat[r, col] * mat[row]
        self.basis[row] = col
        self.iterations += 1

    def run(self, allowed_cols, stall_limit: int) -> str:
        """Maximize until optimal ("optimal") or an unbounded ray ("unbounded")."""
        mat = self.mat
        m = mat.shape[0] - 1
        while True:
            obj = mat[-1, :-1]
            col = -1
            if self.use_bland:
                for j in allowed_cols:
                    if obj[j] < -PIVOT_TOL:
                        col = j
                        break
            else:
                best = -PIVOT_TOL
                for j in allowed_cols:
                    if obj[j] < best:
                        best = obj[j]
                        col = j
            if col < 0:
                return "optimal"
            # ratio test over rows with positive pivot entries
            row = -1
            best_ratio = math.inf
            for r in range(m):
                a = mat[r, col]
                if a > PIVOT_TOL:
                    ratio = mat[r, -1] / a
                    if ratio < best_ratio - PIVOT_TOL or (
                        abs(ratio - best_ratio) <= PIVOT_TOL
                        and row >= 0
                        and self.basis[r] < self.basis[row]
                    ):
                        best_ratio = ratio
                        row = r
            if row < 0:
                return "unbounded"
            before = mat[-1, -1]
            self.pivot(row, col)
            if mat[-1, -1] - before <= PIVOT_TOL:
                self._stall += 1
                if self._stall >= stall_limit:
                    self.use_bland = True
            else:
                self._stall = 0
            if self.iterations > 50_000:
                raise RuntimeError("simplex failed to terminate")


def solve(lp: LinearProgram) -> SimplexSolution:
    """Two-phase solve; returns an exact vertex or the infeasible/unbounded flag."""
    n = lp.n_vars
    m = len(lp.constraints)
    c = np.asarray(lp.objective, dtype=float)
    if lp.sense == "min":
        c = -c

    # normalize rows to b >= 0 and count extra columns
    rows = []
    for coeffs, rel, rhs in lp.constraints:
        a = np.asarray(coeffs, dtype=float)
        if rhs < 0:
            a = -a
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        rows.append((a, rel, float(rhs)))

    n_slack = sum(1 for _, rel, _ in rows if rel in ("<=", ">="))
    n_art = sum(1 for _, rel, _ in rows if rel in (">=", "="))
    total = n + n_slack + n_art
    mat = np.zeros((m + 1, total + 1))
    basis = [-1] * m
    slack_at = n
    art_at = n + n_slack
    art_cols = []
    for i, (a, rel, rhs) in enumerate(rows):
        mat[i, :n] = a
        mat[i, -1] = rhs
        if rel == "<=":
            mat[i, slack_at] = 1.0
            basis[i] = slack_at
            slack_at += 1
        elif rel == ">=":
            mat[i, slack_at] = -1.0
            slack_at += 1
            mat[i, art_at] = 1.0
            basis[i] = art_at
            art_cols.append(art_at)
            art_at += 1
        else:
            mat[i, art_at] = 1.0
            basis[i] = art_at
            art_cols.append(art_at)
            art_at += 1

    tab = _Tableau(mat, basis)
    stall_limit = 2 * (n + m)

    if art_cols:
        # phase 1: maximize -(sum of artificials), priced out over the basis
        for j in art_cols:
            mat[-1, j] = 1.0
        for i, b in enumerate(basis):
            if b in art_cols:
                mat[-1] -= mat[i]
        tab.run(range(total), stall_limit)
        if mat[-1, -1] < -FEAS_TOL:
            return SimplexSolution("infeasible", None, None, tab.iterations)
        _evict_artificials(tab, art_cols, n + n_slack)
        mat[-1, :] = 0.0

    # phase 2 prices the true objective over the current basis
    mat[-1, :n] = -c
    for j in art_cols:
        mat[-1, j] = 0.0
    for i, b in enumerate(basis):
        if mat[-1, b] != 0.0:
            mat[-1] -= mat[-1, b] * mat[i]
    art_set = set(art_cols)
    cols = [j for j in range(total) if j not in art_set]
    status = tab.run(cols, stall_limit)
    if status == "unbounded":
        return SimplexSolution("unbounded", None, None, tab.iterations)

    x = np.zeros(n)
    for i, b in enumerate(tab.basis):
        if b < n:
            x[b] = mat[i, -1]
    x[np.abs(x) < PIVOT_TOL] = 0.0
    value = float(np.asarray(lp.objective) @ x)
    return SimplexSolution("optimal", tuple(map(float, x)), value, tab.iterations)


def _evict_artificials(tab: _Tableau, art_cols: list, n_real: int):
    """Pivot zero-level artificials out of the basis; drop redundant rows in place.

    Rows whose only nonzeros sit in artificial columns are redundant
    constraints; zeroing them is equivalent to deleting the row.
    """
    art_set = set(art_cols)
    for i in range(len(tab.basis)):
        if tab.basis[i] not in art_set:
            continue
        pivot_col = -1
        for j in range(n_real):
            if abs(tab.mat[i, j]) > PIVOT_TOL:
                pivot_col = j
                break
        if pivot_col >= 0:
            tab.pivot(i, pivot_col)
        else:
            tab.mat[i, :] = 0.0


def residuals(lp: LinearProgram, x) -> float:
    """Worst constraint violation of x, sign-adjusted so 0 means feasible."""
    x = np.asarray(x, dtype=float)
    worst = max(0.0, float(-(x.min())) if x.size else 0.0)
    for coeffs, rel, rhs in lp.constraints:
        lhs = float(np.asarray(coeffs) @ x)
        if rel == "<=":
            worst = max(worst, lhs - rhs)
        elif rel == ">=":
            worst = max(worst, rhs - lhs)
        else:
            worst = max(worst, abs(lhs - rhs))
    return worst
