"""Self-contained dense simplex solver for desk-scale linear programs.

Solves min c.x subject to A x = b, x >= 0 by the two-phase tableau method.
Bland's rule picks both the entering and the leaving variable, so the
iteration cannot cycle on degenerate problems. Everything is dense numpy;
problem sizes here are a few hundred rows at most.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_RC_TOL = 1e-9
_PIVOT_TOL = 1e-9
_FEAS_TOL = 1e-7


@dataclass
class SimplexResult:
    status: str  # 'optimal' | 'infeasible' | 'unbounded'
    x: np.ndarray | None
    value: float
    duals: np.ndarray | None


def _pivot(tab, basis, row, col):
    tab[row] /= tab[row, col]
    for i in range(tab.shape[0]):
        if i != row and tab[i, col] != 0.0:
            tab[i] -= tab[i, col] * tab[row]
    basis[row] = col


def _run_bland(tab, basis, allowed):
    """Pivot to optimality over the allowed columns. Returns False if the
    objective is unbounded below."""
    m = tab.shape[0] - 1
    while True:
        rc = tab[-1, :-1]
        enter = -1
        for j in allowed:
            if rc[j] < -_RC_TOL:
                enter = j
                break
        if enter < 0:
            return True
        col = tab[:m, enter]
        best_row = -1
        best_ratio = np.inf
        for i in range(m):
            if col[i] > _PIVOT_TOL:
                ratio = tab[i, -1] / col[i]
                if ratio < best_ratio - 1e-12 or (
                    abs(ratio - best_ratio) <= 1e-12
                    and (best_row < 0 or basis[i] < basis[best_row])
                ):
                    best_ratio = ratio
                    best_row = i
        if best_row < 0:
            return False
        _pivot(tab, basis, best_row, enter)


def simplex_solve(c, A, b) -> SimplexResult:
    """Minimize c.x over A x = b, x >= 0.

    Returns primal solution, objective value, and the duals y of the
    equality rows (solved from the final basis: B^T y = c_B).
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    A = A.copy()
    flip = b < 0.0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # Phase 1: artificial basis.
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = A
    tab[:m, n : n + m] = np.eye(m)
    tab[:m, -1] = b
    basis = list(range(n, n + m))
    # objective: sum of artificials, expressed over the current basis
    tab[-1, :n] = -A.sum(axis=0)
    tab[-1, -1] = -b.sum()
    if not _run_bland(tab, basis, range(n)):
        return SimplexResult("unbounded", None, np.nan, None)  # cannot happen
    if -tab[-1, -1] > _FEAS_TOL:
        return SimplexResult("infeasible", None, np.nan, None)
    # Drive remaining artificials out of the basis; drop redundant rows.
    keep = []
    for i in range(m):
        if basis[i] >= n:
            pivot_col = -1
            for j in range(n):
                if abs(tab[i, j]) > _PIVOT_TOL:
                    pivot_col = j
                    break
            if pivot_col >= 0:
                _pivot(tab, basis, i, pivot_col)
                keep.append(i)
            # else: redundant row, dropped below
        else:
            keep.append(i)
    if len(keep) < m:
        rows = keep + [m]
        tab = tab[rows]
        basis = [basis[i] for i in keep]
        m = len(keep)

    # Phase 2 on the original objective.
    tab2 = np.zeros((m + 1, n + 1))
    tab2[:m, :n] = tab[:m, :n]
    tab2[:m, -1] = tab[:m, -1]
    tab2[-1, :n] = c
    for i in range(m):
        tab2[-1] -= tab2[-1, basis[i]] * tab2[i]
    if not _run_bland(tab2, basis, range(n)):
        return SimplexResult("unbounded", None, np.nan, None)

    x = np.zeros(n)
    for i in range(m):
        x[basis[i]] = tab2[i, -1]
    value = float(c @ x)
    # Duals from the final basis against the original rows (B^T y = c_B);
    # rows dropped as redundant keep dual zero.
    duals_full = np.zeros(b.shape[0])
    try:
        y = np.linalg.solve(A[keep][:, basis].T, c[basis])
        sign = np.where(flip[keep], -1.0, 1.0)
        duals_full[keep] = y * sign
    except np.linalg.LinAlgError:
        pass
    return SimplexResult("optimal", x, value, duals_full)
