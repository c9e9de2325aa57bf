"""
Concentration bounds for the marginal constraint set and their Monte Carlo
checks, plus the property check that worst-off assignments upper-bound the
hard-label group objective.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence, Tuple, Optional, List

import numpy as np

from wdro.constants import BOUNDS_GRID, BOUNDS_P_STAR, BOUNDS_TRIALS, OBJECTIVE_TOL
from wdro.core.config import settings
from wdro.exceptions import InvalidConfig
from wdro.schemas import (
    CoverageReport,
    BoundsCheckRow,
    BoundsReport,
    UpperBoundReport,
    ConstraintSpec,
    SolveProblem,
    GroupWeights,
)
from wdro.services.assignment_solver import solve_assignments, epsilon_nesting

logger = logging.getLogger(__name__)

CONTAINMENT_TOL = 1e-12
MIN_TRIALS = 100
NESTING_EPSILONS = (0.0, 0.05, 0.2, 1.0)


def bound_true_marginal(n: int, eps: float) -> float:
    """1 - 2 exp(-2 n eps^2); negative values are returned as-is."""
    if n < 1:
        raise InvalidConfig("n", n, ">= 1")
    if eps <= 0:
        raise InvalidConfig("eps", eps, "> 0")
    return float(1.0 - 2.0 * np.exp(-2.0 * n * eps**2))


def bound_estimated_marginal(n: int, k: int, eps: float, delta: float) -> float:
    """1 - 2 exp(-2 n eps^2) - 2 exp(-2 k delta^2)."""
    if k < 1:
        raise InvalidConfig("k", k, ">= 1")
    if delta < 0:
        raise InvalidConfig("delta", delta, ">= 0")
    return bound_true_marginal(n, eps) - float(2.0 * np.exp(-2.0 * k * delta**2))


def _shard_sizes(trials: int, shards: int) -> List[int]:
    shards = max(1, min(shards, trials))
    base, extra = divmod(trials, shards)
    return [base + (1 if i < extra else 0) for i in range(shards)]


def _run_shards(worker, trials: int, seed: int, shards: Optional[int]) -> Tuple[np.ndarray, int]:
    """
    Run worker(rng, size) -> (per-group hits, joint hits) on independent
    shards and add up the counts.
    """
    sizes = _shard_sizes(trials, shards or settings.MC_SHARDS)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    rngs = [np.random.default_rng(child) for child in children]

    with ThreadPoolExecutor(max_workers=len(sizes)) as pool:
        results = list(pool.map(worker, rngs, sizes))

    per_group = np.sum([hits for hits, _ in results], axis=0)
    joint = int(sum(joint_hits for _, joint_hits in results))
    return per_group, joint


def _check_trials(trials: int) -> None:
    if trials < MIN_TRIALS:
        raise InvalidConfig("trials", trials, f">= {MIN_TRIALS}")


def _check_p_star(p_star: Sequence[float]) -> np.ndarray:
    p = np.asarray(p_star, dtype=float)
    if p.ndim != 1 or p.size < 1 or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise InvalidConfig("p_star", list(p_star), "a probability vector")
    return p / p.sum()


def monte_carlo_coverage(
    p_star: Sequence[float],
    n: int,
    eps: float,
    trials: int = BOUNDS_TRIALS,
    seed: int = 0,
    shards: Optional[int] = None,
) -> CoverageReport:
    """
    Frequency with which the empirical group frequencies of n draws from
    p_star fall within eps of p_star, per group and for all groups at once.
    """
    p = _check_p_star(p_star)
    _check_trials(trials)

    def worker(rng: np.random.Generator, size: int):
        empirical = rng.multinomial(n, p, size=size) / n
        inside = np.abs(empirical - p) <= eps + CONTAINMENT_TOL
        return inside.sum(axis=0), int(inside.all(axis=1).sum())

    per_group, joint = _run_shards(worker, trials, seed, shards)
    return CoverageReport(
        per_group_frequency=(per_group / trials).tolist(),
        joint_frequency=joint / trials,
        analytic_bound=bound_true_marginal(n, eps),
        trials=trials,
        n=n,
        eps=eps,
    )


def monte_carlo_coverage_estimated(
    p_star: Sequence[float],
    n: int,
    k: int,
    eps: float,
    delta: float,
    trials: int = BOUNDS_TRIALS,
    seed: int = 0,
    shared: bool = False,
    shards: Optional[int] = None,
) -> CoverageReport:
    """
    Frequency with which the empirical frequencies of n draws fall within
    eps + delta of the marginal estimated from k labeled draws.

    With shared=True the k labeled draws are the first k of the n draws;
    otherwise the two samples are independent.
    """
    p = _check_p_star(p_star)
    _check_trials(trials)
    if shared and k > n:
        raise InvalidConfig("k", k, f"<= n={n} for a shared sample")

    def worker(rng: np.random.Generator, size: int):
        labeled = rng.multinomial(k, p, size=size)
        if shared:
            counts = labeled + rng.multinomial(n - k, p, size=size)
        else:
            counts = rng.multinomial(n, p, size=size)
        inside = np.abs(counts / n - labeled / k) <= eps + delta + CONTAINMENT_TOL
        return inside.sum(axis=0), int(inside.all(axis=1).sum())

    per_group, joint = _run_shards(worker, trials, seed, shards)
    return CoverageReport(
        per_group_frequency=(per_group / trials).tolist(),
        joint_frequency=joint / trials,
        analytic_bound=bound_estimated_marginal(n, k, eps, delta),
        trials=trials,
        n=n,
        eps=eps,
        k=k,
        delta=delta,
    )


def _check_row(report: CoverageReport, kind: str) -> BoundsCheckRow:
    tolerance = 3.0 * np.sqrt(0.25 / report.trials)
    lowest = min(report.per_group_frequency)
    passed = report.analytic_bound <= 0 or lowest >= report.analytic_bound - tolerance
    return BoundsCheckRow(
        kind=kind,
        n=report.n,
        eps=report.eps,
        k=report.k,
        delta=report.delta,
        analytic_bound=report.analytic_bound,
        min_group_frequency=lowest,
        joint_frequency=report.joint_frequency,
        tolerance=float(tolerance),
        passed=bool(passed),
    )


def verify_bounds_grid(
    trials: int = BOUNDS_TRIALS,
    seed: int = 0,
    p_star: Sequence[float] = BOUNDS_P_STAR,
    grid: Optional[dict] = None,
) -> BoundsReport:
    """
    Per-group coverage against both analytic bounds over the n x eps (x k x
    delta) grid. A cell passes when the bound is vacuous or the lowest
    per-group frequency clears it within 3 Monte Carlo standard deviations.
    """
    grid = grid or BOUNDS_GRID
    rows = []
    cell = 0
    for n in grid["n"]:
        for eps in grid["eps"]:
            report = monte_carlo_coverage(p_star, int(n), eps, trials, seed + cell)
            rows.append(_check_row(report, "true_marginal"))
            cell += 1
            for k in grid["k"]:
                for delta in grid["delta"]:
                    report = monte_carlo_coverage_estimated(
                        p_star, int(n), int(k), eps, delta, trials, seed + cell
                    )
                    rows.append(_check_row(report, "estimated_marginal"))
                    cell += 1

    failed = [row for row in rows if not row.passed]
    logger.info(f"Coverage grid: {len(rows)} cells, {len(failed)} failed")
    return BoundsReport(rows=rows, trials=trials, passed=not failed)


def _exact_count_instance(rng: np.random.Generator) -> Tuple[SolveProblem, np.ndarray]:
    """
    Random instance whose group counts match N * p_bar exactly, so the
    ground truth is feasible at eps = 0. Returns the problem and true groups.
    """
    n = int(rng.integers(2, 9))
    m = int(rng.integers(2, min(3, n) + 1))
    counts = 1 + rng.multinomial(n - m, np.full(m, 1.0 / m))
    truth = rng.permutation(np.repeat(np.arange(m), counts))

    q = rng.dirichlet(np.ones(m)) + 1e-3
    losses = rng.uniform(0.0, 3.0, size=n)
    pinned = [(int(row), int(truth[row])) for row in range(n) if rng.random() < 0.5]

    problem = SolveProblem(
        losses=losses,
        weights=GroupWeights(values=q / q.sum()),
        constraints=ConstraintSpec(marginals=(counts / n).tolist(), epsilon=0.0, pinned=pinned),
    )
    return problem, truth


def group_objective(losses: np.ndarray, groups: np.ndarray, q: np.ndarray) -> float:
    """sum_j q_j * (mean loss of group j); empty groups contribute 0."""
    total = 0.0
    for j, weight in enumerate(q):
        members = losses[groups == j]
        if members.size:
            total += float(weight) * float(members.mean())
    return total


def verify_upper_bound(instances: int = 200, seed: int = 0) -> UpperBoundReport:
    """
    On random exact-count instances, check that the worst-off objective is at
    least the hard-label group objective at ground truth, and that the
    optimum never decreases as epsilon grows.
    """
    if instances < 1:
        raise InvalidConfig("instances", instances, ">= 1")
    rng = np.random.default_rng(seed)
    violations = []
    nesting_violations = []

    for index in range(instances):
        problem, truth = _exact_count_instance(rng)
        _, objective = solve_assignments(problem, relax=False)
        reference = group_objective(problem.losses, truth, problem.weights.values)
        if objective < reference - OBJECTIVE_TOL:
            violations.append(
                {"instance": index, "solver_objective": objective, "group_objective": reference}
            )

        path = epsilon_nesting(problem, NESTING_EPSILONS)
        if any(later < earlier - OBJECTIVE_TOL for earlier, later in zip(path, path[1:])):
            nesting_violations.append({"instance": index, "objectives": path})

    logger.info(
        f"Upper-bound check: {instances} instances, {len(violations)} violations, "
        f"{len(nesting_violations)} nesting violations"
    )
    return UpperBoundReport(
        instances=instances,
        violations=violations,
        nesting_violations=nesting_violations,
        passed=not violations and not nesting_violations,
    )
