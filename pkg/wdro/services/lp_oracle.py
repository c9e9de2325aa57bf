"""
Dense two-phase tableau simplex for small exact linear programs.

Solves   maximize c.x  subject to  A x = b, x >= 0
with Bland's anti-cycling rule. Intended for instances with at most a few
dozen variables, where it serves as an independent check of specialized
solvers.
"""

import logging
from typing import Tuple, List

import numpy as np

from wdro.exceptions import SolverError

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-11
MAX_PIVOTS = 10000


def _pivot(tableau: np.ndarray, basis: List[int], row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for r in range(tableau.shape[0]):
        if r != row and tableau[r, col] != 0.0:
            tableau[r] -= tableau[r, col] * tableau[row]
    basis[row] = col


def _run_phase(tableau: np.ndarray, basis: List[int], n_cols: int) -> str:
    """
    Minimize over the last (reduced-cost) row with Bland's rule.

    Only the first n_cols columns may enter the basis. The right-hand side is
    the last column.
    """
    m = tableau.shape[0] - 1
    for _ in range(MAX_PIVOTS):
        costs = tableau[-1, :n_cols]
        entering = np.flatnonzero(costs < -PIVOT_TOL)
        if entering.size == 0:
            return "optimal"
        col = int(entering[0])

        column = tableau[:m, col]
        candidates = np.flatnonzero(column > PIVOT_TOL)
        if candidates.size == 0:
            return "unbounded"
        ratios = tableau[candidates, -1] / column[candidates]
        best = ratios.min()
        tied = candidates[np.abs(ratios - best) <= PIVOT_TOL * max(1.0, abs(best))]
        row = int(min(tied, key=lambda r: basis[r]))
        _pivot(tableau, basis, row, col)
    raise SolverError("Simplex exceeded pivot limit", details={"max_pivots": MAX_PIVOTS})


def simplex_maximize(c: np.ndarray, a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Solve max c.x s.t. A x = b, x >= 0 exactly up to floating point.

    Args:
        c: Objective vector of length n
        a: Constraint matrix, shape (m, n)
        b: Right-hand side of length m

    Returns:
        Tuple of (optimal x, optimal objective)
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = a.shape

    negative = b < 0
    a[negative] *= -1.0
    b[negative] *= -1.0

    # Phase 1: artificial basis, minimize the artificial sum.
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a
    tableau[:m, n:n + m] = np.eye(m)
    tableau[:m, -1] = b
    tableau[-1, :n] = -a.sum(axis=0)
    tableau[-1, -1] = -b.sum()
    basis = list(range(n, n + m))

    status = _run_phase(tableau, basis, n + m)
    if status != "optimal" or -tableau[-1, -1] > 1e-9 * max(1.0, b.sum()):
        raise SolverError("Linear program is infeasible", details={"phase": 1})

    # Drive zero-level artificials out of the basis; drop redundant rows.
    keep_rows = []
    for row in range(m):
        if basis[row] >= n:
            nonzero = np.flatnonzero(np.abs(tableau[row, :n]) > PIVOT_TOL)
            if nonzero.size == 0:
                continue
            _pivot(tableau, basis, row, int(nonzero[0]))
        keep_rows.append(row)

    core = np.zeros((len(keep_rows) + 1, n + 1))
    core[:-1, :n] = tableau[keep_rows, :n]
    core[:-1, -1] = tableau[keep_rows, -1]
    basis = [basis[row] for row in keep_rows]

    # Phase 2: minimize -c.x from the feasible basis.
    cost = -c
    core[-1, :n] = cost - cost[basis] @ core[:-1, :n]
    core[-1, -1] = -cost[basis] @ core[:-1, -1]

    status = _run_phase(core, basis, n)
    if status != "optimal":
        raise SolverError("Linear program is unbounded", details={"phase": 2})

    x = np.zeros(n)
    for row, var in enumerate(basis):
        x[var] = core[row, -1]
    x[np.abs(x) < PIVOT_TOL] = 0.0
    return x, float(c @ x)
