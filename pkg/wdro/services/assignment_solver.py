"""
Worst-off soft group assignment solver.

Maximizes sum_ij g_ij * theta_j * l_i with theta_j = q_j / (N p_j) over
row-stochastic assignments g whose pinned rows are one-hot and whose column
sums stay within N (p_j +/- eps). The cost is rank one, so sorting rows by
loss and columns by theta and filling greedily is optimal; the dense simplex
in lp_oracle checks this on small instances.
"""

import logging
from typing import Tuple, List, Sequence, Optional

import numpy as np

from wdro.constants import ASSIGNMENT_TOL, OBJECTIVE_TOL, RELAXATION_MARGIN
from wdro.core.config import settings
from wdro.exceptions import (
    InfeasibleConstraints,
    DegenerateMarginal,
    SizeLimitExceeded,
)
from wdro.schemas import (
    ConstraintSpec,
    AssignmentMatrix,
    SolveProblem,
    GroupWeights,
    SolverReport,
)
from wdro.services.lp_oracle import simplex_maximize
from wdro.utils import stable_argsort_desc

logger = logging.getLogger(__name__)


def _column_bounds(
    constraints: ConstraintSpec, n: int, epsilon: float
) -> Tuple[np.ndarray, np.ndarray, int]:
    """Lower/upper column totals left for free rows, and the free-row count."""
    marginals = np.asarray(constraints.marginals, dtype=float)
    pinned = constraints.pinned_counts()
    lower = np.maximum(0.0, n * (marginals - epsilon) - pinned)
    upper = n * (marginals + epsilon) - pinned
    return lower, upper, n - len(constraints.pinned)


def _min_feasible_epsilon(constraints: ConstraintSpec, n: int) -> float:
    marginals = np.asarray(constraints.marginals, dtype=float)
    pinned = constraints.pinned_counts()
    free = n - len(constraints.pinned)

    # Upper bounds: N (p_j + eps) >= pinned_j.
    upper_need = max(0.0, float(np.max(pinned / n - marginals)))

    # Lower bounds: sum_j max(0, N (p_j - eps) - pinned_j) <= free. The left
    # side is convex piecewise linear and nonincreasing in eps.
    breaks = marginals - pinned / n
    points = sorted({0.0, *[float(b) for b in breaks if b > 0]})
    lower_need = 0.0
    for idx, start in enumerate(points):
        active = breaks > start
        if not np.any(active):
            lower_need = start
            break
        surplus = float(np.sum(n * marginals[active] - pinned[active]))
        root = (surplus - free) / (n * np.count_nonzero(active))
        end = points[idx + 1] if idx + 1 < len(points) else np.inf
        if root <= end:
            lower_need = max(start, root)
            break

    return max(upper_need, lower_need)


def check_feasible(constraints: ConstraintSpec, n: int) -> Tuple[bool, float]:
    """
    Check whether the constraint set is nonempty for n rows.

    Args:
        constraints: Marginals, slack and pinned rows
        n: Number of rows, at least the number of pinned rows

    Returns:
        Tuple of (feasible at constraints.epsilon, smallest feasible epsilon)
    """
    tol = settings.FEASIBILITY_TOL * max(1, n)
    lower, upper, free = _column_bounds(constraints, n, constraints.epsilon)
    feasible = bool(
        free >= 0
        and np.all(upper >= -tol)
        and lower.sum() <= free + tol
        and upper.sum() >= free - tol
    )
    return feasible, _min_feasible_epsilon(constraints, n)


def _check_marginals(constraints: ConstraintSpec) -> None:
    floor = settings.MARGINAL_FLOOR
    for group, value in enumerate(constraints.marginals):
        if value < floor:
            raise DegenerateMarginal(group, value, floor)


def _effective_epsilon(problem: SolveProblem, relax: bool) -> Tuple[float, bool]:
    constraints = problem.constraints
    feasible, min_epsilon = check_feasible(constraints, problem.n)
    if feasible:
        return constraints.epsilon, False
    if not relax:
        raise InfeasibleConstraints(constraints.epsilon, min_epsilon)

    relaxed = max(constraints.epsilon, min_epsilon + RELAXATION_MARGIN)
    still_feasible, _ = check_feasible(constraints.with_epsilon(relaxed), problem.n)
    if not still_feasible:
        raise InfeasibleConstraints(relaxed, min_epsilon)

    logger.warning(
        f"Constraint set empty at epsilon={constraints.epsilon:g} for "
        f"{problem.n} rows with {len(constraints.pinned)} pinned; "
        f"relaxed to {relaxed:.6g}"
    )
    return relaxed, True


def _greedy_totals(lower: np.ndarray, upper: np.ndarray, free: int) -> np.ndarray:
    """Column totals maximizing every prefix sum, columns in theta order."""
    m = lower.size
    totals = np.zeros(m)
    remaining = float(free)
    reserve = np.concatenate([np.cumsum(lower[::-1])[::-1][1:], [0.0]])
    for k in range(m - 1):
        take = min(upper[k], remaining - reserve[k])
        take = max(take, 0.0)
        totals[k] = take
        remaining -= take
    totals[-1] = max(remaining, 0.0)
    return totals


def _fill(row_order: np.ndarray, totals: np.ndarray) -> np.ndarray:
    """
    Northwest-corner fill: row r covers [r, r+1) on the mass axis, column k
    covers [T_{k-1}, T_k); the entry is the overlap length.
    """
    bounds = np.concatenate([[0.0], np.cumsum(totals)])
    bounds[-1] = float(row_order.size)
    starts = np.arange(row_order.size, dtype=float)[:, None]
    overlap = np.minimum(starts + 1.0, bounds[None, 1:]) - np.maximum(starts, bounds[None, :-1])
    return np.clip(overlap, 0.0, 1.0)


def objective_value(values: np.ndarray, losses: np.ndarray, theta: np.ndarray) -> float:
    """Linearized worst-off objective sum_ij g_ij theta_j l_i."""
    return float(losses @ values @ theta)


def solve_assignments(
    problem: SolveProblem, relax: bool = True
) -> Tuple[AssignmentMatrix, float]:
    """
    Solve the inner maximization over soft group assignments.

    Args:
        problem: Losses, group weights and constraints
        relax: Relax epsilon to the smallest feasible value (plus a margin)
            when pinned rows make the set empty; otherwise raise

    Returns:
        Tuple of (assignment matrix, objective)
    """
    _check_marginals(problem.constraints)
    epsilon, relaxed = _effective_epsilon(problem, relax)

    n, m = problem.n, problem.m
    losses = problem.losses
    theta = problem.theta
    values = np.zeros((n, m))

    pinned_rows = np.zeros(n, dtype=bool)
    for row, group in problem.constraints.pinned:
        values[row, group] = 1.0
        pinned_rows[row] = True

    free_rows = np.flatnonzero(~pinned_rows)
    if free_rows.size:
        lower, upper, free = _column_bounds(problem.constraints, n, epsilon)
        col_order = stable_argsort_desc(theta)
        row_order = free_rows[stable_argsort_desc(losses[free_rows])]
        totals = _greedy_totals(lower[col_order], upper[col_order], free)
        block = _fill(row_order, totals)
        values[np.ix_(row_order, col_order)] = block

    matrix = AssignmentMatrix(values=values, epsilon=epsilon, relaxed=relaxed)
    return matrix, objective_value(values, losses, theta)


def brute_force_oracle(
    problem: SolveProblem, relax: bool = True
) -> Tuple[AssignmentMatrix, float]:
    """
    Solve the same linear program with the dense exact simplex.

    Raises SizeLimitExceeded beyond ORACLE_MAX_ROWS x ORACLE_MAX_GROUPS.
    """
    n, m = problem.n, problem.m
    if n > settings.ORACLE_MAX_ROWS or m > settings.ORACLE_MAX_GROUPS:
        raise SizeLimitExceeded(n, m, settings.ORACLE_MAX_ROWS, settings.ORACLE_MAX_GROUPS)

    _check_marginals(problem.constraints)
    epsilon, relaxed = _effective_epsilon(problem, relax)
    losses = problem.losses
    theta = problem.theta

    values = np.zeros((n, m))
    pinned_rows = np.zeros(n, dtype=bool)
    for row, group in problem.constraints.pinned:
        values[row, group] = 1.0
        pinned_rows[row] = True
    free_rows = np.flatnonzero(~pinned_rows)
    f = free_rows.size

    if f:
        lower, upper, _ = _column_bounds(problem.constraints, n, epsilon)
        upper = np.maximum(upper, 0.0)
        n_x = f * m
        n_vars = n_x + 2 * m
        a = np.zeros((f + 2 * m, n_vars))
        b = np.zeros(f + 2 * m)
        for r in range(f):
            a[r, r * m:(r + 1) * m] = 1.0
            b[r] = 1.0
        for j in range(m):
            a[f + j, j:n_x:m] = 1.0
            a[f + j, n_x + j] = 1.0
            b[f + j] = upper[j]
            a[f + m + j, j:n_x:m] = 1.0
            a[f + m + j, n_x + m + j] = -1.0
            b[f + m + j] = lower[j]
        cost = np.zeros(n_vars)
        cost[:n_x] = np.outer(losses[free_rows], theta).ravel()
        x, _ = simplex_maximize(cost, a, b)
        values[free_rows] = x[:n_x].reshape(f, m)

    matrix = AssignmentMatrix(values=values, epsilon=epsilon, relaxed=relaxed)
    return matrix, objective_value(values, losses, theta)


def assignment_violations(
    matrix: AssignmentMatrix, constraints: ConstraintSpec, tol: float = ASSIGNMENT_TOL
) -> List[str]:
    """Invariant violations of an assignment under the slack it was solved with."""
    values = matrix.values
    n = values.shape[0]
    problems = []
    if values.shape[1] != constraints.n_groups:
        return [f"expected {constraints.n_groups} columns, got {values.shape[1]}"]
    if np.any(values < -tol) or np.any(values > 1 + tol):
        problems.append("entries outside [0, 1]")
    if np.any(np.abs(values.sum(axis=1) - 1.0) > tol):
        problems.append("rows do not sum to 1")
    for row, group in constraints.pinned:
        target = np.zeros(constraints.n_groups)
        target[group] = 1.0
        if np.any(np.abs(values[row] - target) > tol):
            problems.append(f"pinned row {row} is not one-hot at {group}")
    gaps = np.abs(values.mean(axis=0) - np.asarray(constraints.marginals))
    if np.any(gaps > matrix.epsilon + tol):
        problems.append("column marginals outside epsilon")
    return problems


class AssignmentSolver:
    """
    Reusable solver bound to marginals and slack; one solve per batch.
    """

    def __init__(self, marginals: Sequence[float], epsilon: float, relax: bool = True):
        self.marginals = [float(p) for p in marginals]
        self.epsilon = float(epsilon)
        self.relax = relax

    def problem(
        self,
        losses: np.ndarray,
        weights: GroupWeights,
        pinned: Optional[Sequence[Tuple[int, int]]] = None,
    ) -> SolveProblem:
        constraints = ConstraintSpec(
            marginals=self.marginals,
            epsilon=self.epsilon,
            pinned=list(pinned or []),
        )
        return SolveProblem(losses=losses, weights=weights, constraints=constraints)

    def solve(
        self,
        losses: np.ndarray,
        weights: GroupWeights,
        pinned: Optional[Sequence[Tuple[int, int]]] = None,
    ) -> Tuple[AssignmentMatrix, float]:
        return solve_assignments(self.problem(losses, weights, pinned), relax=self.relax)


def random_problem(
    rng: np.random.Generator, max_n: int = 8, max_m: int = 3
) -> SolveProblem:
    """Random small instance with random pins and a random slack."""
    n = int(rng.integers(1, max_n + 1))
    m = int(rng.integers(2, max_m + 1))
    marginals = rng.dirichlet(np.ones(m)) + 0.05
    marginals = marginals / marginals.sum()
    q = rng.dirichlet(np.ones(m)) + 1e-3
    q = q / q.sum()
    losses = rng.uniform(0.0, 3.0, size=n)

    pinned = []
    for row in range(n):
        if rng.random() < 0.3:
            pinned.append((row, int(rng.integers(0, m))))
    epsilon = 0.0 if rng.random() < 0.3 else float(rng.uniform(0.0, 0.3))

    return SolveProblem(
        losses=losses,
        weights=GroupWeights(values=q),
        constraints=ConstraintSpec(
            marginals=marginals.tolist(), epsilon=epsilon, pinned=pinned
        ),
    )


def verify_solver(instances: int = 200, seed: int = 0, tol: float = 1e-6) -> SolverReport:
    """
    Compare the greedy solver with the dense simplex on random instances.

    Every instance checks objective agreement within tol, the returned
    matrix's invariants, and the reported objective against a recomputation.
    """
    rng = np.random.default_rng(seed)
    violations = []
    max_gap = 0.0

    for index in range(instances):
        problem = random_problem(rng)
        matrix, objective = solve_assignments(problem)
        _, oracle_objective = brute_force_oracle(problem)
        gap = abs(objective - oracle_objective)
        max_gap = max(max_gap, gap)

        problems = assignment_violations(matrix, problem.constraints)
        recomputed = objective_value(matrix.values, problem.losses, problem.theta)
        if abs(recomputed - objective) > OBJECTIVE_TOL:
            problems.append("reported objective does not match matrix")
        if gap > tol:
            problems.append(f"objective gap {gap:.3g} against oracle")
        if problems:
            violations.append(
                {
                    "instance": index,
                    "n": problem.n,
                    "m": problem.m,
                    "problems": problems,
                }
            )

    logger.info(f"Solver check: {instances} instances, max gap {max_gap:.3g}, {len(violations)} violations")
    return SolverReport(
        instances=instances,
        max_objective_gap=max_gap,
        violations=violations,
        passed=not violations,
    )


def epsilon_nesting(problem: SolveProblem, eps_values: Sequence[float]) -> List[float]:
    """
    Optimal objective of one instance at each slack in eps_values.

    Larger slack means a larger constraint set, so the objectives are
    nondecreasing in epsilon.
    """
    objectives = []
    for eps in eps_values:
        constraints = problem.constraints.with_epsilon(eps)
        widened = problem.model_copy(update={"constraints": constraints})
        _, objective = solve_assignments(widened)
        objectives.append(objective)
    return objectives
