"""Strict-feasibility LP used by the embedding test.

Decides whether a system  A u = rhs,  per-group sums = 1,  u_i > 0  admits
a solution with all designated coefficients strictly positive, by solving
    max t   s.t.  A u = rhs,  group sums = 1,  u_i >= t
with a dense two-phase simplex method and declaring strict feasibility
when the optimum exceeds a small threshold.  Boundary contact (t* ~ 0,
as when two simplices share a face) is deliberately not a violation.

The solver is self-contained: problems here are tiny (a handful of rows
and variables), so robustness is preferred over speed.  Dantzig pricing
with largest-magnitude ratio tie-breaking is used normally; the pivot
rule switches to Bland's after an iteration budget to rule out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

_TOL = 1e-10


@dataclass
class StrictFeasibilityProblem:
    """Equality system with strictly positive, group-normalized variables.

    eq_matrix (r x v) and eq_rhs give A u = rhs; every index in
    positive_vars must lie in exactly one normalization group, and each
    group's variables sum to 1.
    """

    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    positive_vars: Sequence[int]
    groups: List[Sequence[int]]

    def __post_init__(self):
        self.eq_matrix = np.atleast_2d(np.asarray(self.eq_matrix, dtype=float))
        self.eq_rhs = np.atleast_1d(np.asarray(self.eq_rhs, dtype=float))
        if self.eq_matrix.size == 0:
            self.eq_matrix = self.eq_matrix.reshape(0, self.n_vars_hint())
        if self.eq_matrix.shape[0] != self.eq_rhs.shape[0]:
            raise ValueError("eq_matrix and eq_rhs row counts differ")
        pos = [int(i) for i in self.positive_vars]
        seen = {}
        for gi, grp in enumerate(self.groups):
            for i in grp:
                if i in seen:
                    raise ValueError(f"variable {i} appears in two groups")
                seen[int(i)] = gi
        for i in pos:
            if i not in seen:
                raise ValueError(f"positive variable {i} not in any group")
        self.positive_vars = pos

    def n_vars_hint(self) -> int:
        top = -1
        for grp in self.groups:
            top = max(top, max(int(i) for i in grp))
        for i in self.positive_vars:
            top = max(top, int(i))
        return top + 1

    @property
    def n_vars(self) -> int:
        return max(self.eq_matrix.shape[1], self.n_vars_hint())


@dataclass
class LPResult:
    feasible: bool
    status: str  # optimal | infeasible | singular
    t_star: Optional[float] = None
    witness: Optional[np.ndarray] = None
    max_residual: float = 0.0


class _SingularBasis(RuntimeError):
    pass


def _simplex_min(A: np.ndarray, b: np.ndarray, c: np.ndarray):
    """Minimize c.x s.t. Ax = b, x >= 0 via two-phase tableau simplex.

    Returns (status, x).  b may have any sign on entry; rows are flipped
    to give the artificial basis a feasible start.
    """
    m, n = A.shape
    A = A.copy()
    b = b.copy()
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # tableau with artificials: columns [x (n), artificials (m), rhs]
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(n, n + m))
    # phase-1 objective: sum of artificials, expressed in the current basis
    T[m, :] = -T[:m, :].sum(axis=0)
    T[m, n : n + m] = 0.0

    def pivot(row, col):
        piv = T[row, col]
        if abs(piv) < 1e-11:
            raise _SingularBasis(f"pivot {piv:.2e} too small")
        T[row] /= piv
        for r in range(m + 1):
            if r != row and T[r, col] != 0.0:
                T[r] -= T[r, col] * T[row]
        basis[row] = col

    def run(allowed_cols, bland_after):
        it = 0
        while True:
            it += 1
            bland = it > bland_after
            costs = T[m, allowed_cols]
            if bland:
                negs = np.nonzero(costs < -_TOL)[0]
                if negs.size == 0:
                    return
                col = allowed_cols[negs[0]]
            else:
                k = int(np.argmin(costs))
                if costs[k] >= -_TOL:
                    return
                col = allowed_cols[k]
            ratios = np.full(m, np.inf)
            pos = T[:m, col] > _TOL
            ratios[pos] = T[:m, -1][pos] / T[:m, col][pos]
            best = ratios.min()
            if not np.isfinite(best):
                raise _SingularBasis("unbounded direction")
            tie = np.nonzero(np.abs(ratios - best) <= 1e-12)[0]
            if bland:
                row = int(tie[np.argmin([basis[r] for r in tie])])
            else:
                row = int(tie[np.argmax(np.abs(T[tie, col]))])
            pivot(row, col)

    bland_after = 50 * (m + n + 1)
    x_cols = np.arange(n)
    try:
        run(np.arange(n + m), bland_after)
        if T[m, -1] < -1e-7:
            return "infeasible", None
        # drive remaining artificials out of the basis where possible
        for row in range(m):
            if basis[row] >= n:
                cand = np.nonzero(np.abs(T[row, :n]) > 1e-9)[0]
                if cand.size:
                    pivot(row, int(cand[0]))
        # phase 2
        T[m, :] = 0.0
        T[m, :n] = c
        for row in range(m):
            if basis[row] < n:
                T[m, :] -= T[m, basis[row]] * T[row, :]
        run(x_cols, bland_after)
    except _SingularBasis:
        return "singular", None
    x = np.zeros(n)
    for row in range(m):
        if basis[row] < n:
            x[basis[row]] = T[row, -1]
    return "optimal", x


def solve_strict_feasibility(
    problem: StrictFeasibilityProblem, eps: float = 1e-9
) -> LPResult:
    """Decide strict feasibility of the problem up to eps.

    Feasible means the maximized margin t* (the smallest designated
    coefficient at the optimum) exceeds eps; the witness is the
    coefficient vector u achieving it.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    v = problem.n_vars
    pos = problem.positive_vars
    free = [i for i in range(v) if i not in set(pos)]
    r = problem.eq_matrix.shape[0]
    rows = r + len(problem.groups)

    # columns: w_i (one per positive var), p/q pairs per free var, t+, t-
    n_cols = len(pos) + 2 * len(free) + 2
    A = np.zeros((rows, n_cols))
    b = np.zeros(rows)
    col_of_pos = {i: k for k, i in enumerate(pos)}
    col_of_free = {i: len(pos) + 2 * k for k, i in enumerate(free)}
    tp, tn = n_cols - 2, n_cols - 1

    eq = np.zeros((rows, v))
    if r:
        eq[:r, : problem.eq_matrix.shape[1]] = problem.eq_matrix
        b[:r] = problem.eq_rhs
    for gi, grp in enumerate(problem.groups):
        for i in grp:
            eq[r + gi, int(i)] = 1.0
        b[r + gi] = 1.0

    for i in pos:
        A[:, col_of_pos[i]] = eq[:, i]
    for i in free:
        A[:, col_of_free[i]] = eq[:, i]
        A[:, col_of_free[i] + 1] = -eq[:, i]
    t_coeff = eq[:, pos].sum(axis=1)
    A[:, tp] = t_coeff
    A[:, tn] = -t_coeff

    c = np.zeros(n_cols)
    c[tp], c[tn] = -1.0, 1.0  # maximize t

    status, x = _simplex_min(A, b, c)
    if status != "optimal":
        return LPResult(False, status)

    t_star = float(x[tp] - x[tn])
    u = np.zeros(v)
    for i in pos:
        u[i] = x[col_of_pos[i]] + t_star
    for i in free:
        u[i] = x[col_of_free[i]] - x[col_of_free[i] + 1]
    residual = 0.0
    if r:
        residual = float(
            np.abs(problem.eq_matrix @ u[: problem.eq_matrix.shape[1]] - problem.eq_rhs).max()
        )
    return LPResult(t_star > eps, "optimal", t_star, u, residual)
