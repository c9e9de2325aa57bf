"""
Training loops: ERM, Unsup DRO, Group DRO (oracle and partial) and
Worst-off DRO.

Every trainer shares one loop. Per batch it computes per-sample losses,
turns them into gradient weights (and, for the group methods, per-group
losses), takes a gradient step on w and then an exponentiated ascent step on
q. Batches are uniform random permutations of the usable training rows.
"""

import logging
from typing import Optional, Tuple, List, Sequence

import numpy as np

from wdro.constants import Algorithm, Split, OBJECTIVE_TOL
from wdro.exceptions import ConfigError, EmptyTrainSet, InvalidConfig, NonFiniteLoss, UpperBoundViolation
from wdro.schemas import (
    GroupedDataset,
    TrainConfig,
    TrainedRun,
    RunRecord,
    GroupWeights,
    ModelParams,
    ConstraintSpec,
    SolveProblem,
)
from wdro.services.assignment_solver import solve_assignments, assignment_violations, objective_value
from wdro.services.data_synth import estimate_marginals
from wdro.services.evaluation import evaluate
from wdro.services.group_weights import exp_ascent, soft_group_losses, soft_sample_weights, hard_assignment
from wdro.services.predictor import init_params, forward_loss, weighted_grad, sgd_step
from wdro.utils import make_rng, chunk_indices

logger = logging.getLogger(__name__)

MAX_WARNINGS = 1000

BatchWeights = Tuple[np.ndarray, Optional[np.ndarray]]


class BaseTrainer:
    """
    Shared SGD loop. Subclasses choose the usable rows and the per-batch
    sample weights.
    """

    algorithm: Algorithm = Algorithm.ERM
    uses_group_weights = False

    def __init__(self, ds: GroupedDataset, cfg: TrainConfig):
        self.ds = ds
        self.cfg = cfg
        self.warnings: List[str] = []
        self.eps_relaxations = 0
        self.q = GroupWeights.uniform(ds.n_groups)
        self._epoch = 0

    def usable_rows(self) -> np.ndarray:
        return np.arange(self.ds.n)

    def batch_weights(self, rows: np.ndarray, losses: np.ndarray, batch_no: int) -> BatchWeights:
        """Gradient weights for a batch and per-group losses (None if q is not used)."""
        raise NotImplementedError

    def warn(self, message: str) -> None:
        if len(self.warnings) < MAX_WARNINGS:
            self.warnings.append(message)

    def run(self) -> TrainedRun:
        cfg = self.cfg
        rows = self.usable_rows()
        if rows.size == 0:
            raise EmptyTrainSet(self.algorithm.value)

        params = init_params(cfg.model, self.ds.dim, make_rng(cfg.seed, "init"))
        batch_rng = make_rng(cfg.seed, "batches")
        velocity = np.zeros_like(params.weights)
        records: List[RunRecord] = []

        logger.info(
            f"Training {self.algorithm.value} on {rows.size} rows for {cfg.epochs} epochs "
            f"(batch={cfg.batch_size}, eta_w={cfg.eta_w:g}, eta_q={cfg.eta_q:g})"
        )

        for epoch in range(1, cfg.epochs + 1):
            self._epoch = epoch
            relaxations_before = self.eps_relaxations
            order = batch_rng.permutation(rows)

            for batch_no, batch in enumerate(chunk_indices(order, cfg.batch_limit)):
                params, velocity = self._step(params, velocity, batch, batch_no)

            result = evaluate(params, self.ds)
            record = RunRecord.from_evaluation(
                result,
                epoch=epoch,
                split=Split.TRAIN,
                q=self.q.to_list() if self.uses_group_weights else None,
                eps_relaxations=self.eps_relaxations - relaxations_before,
            )
            records.append(record)
            logger.debug(
                f"{self.algorithm.value} epoch {epoch}: loss={result.loss:.6f} "
                f"acc={result.acc_overall:.4f} min_group_acc={min(result.acc_group):.4f}"
            )

        if self.eps_relaxations:
            logger.info(f"{self.algorithm.value}: {self.eps_relaxations} batches relaxed epsilon")

        return TrainedRun(
            algorithm=self.algorithm,
            params=params,
            records=records,
            warnings=self.warnings,
            eps_relaxations=self.eps_relaxations,
            final_q=self.q.to_list(),
        )

    def _step(
        self, params: ModelParams, velocity: np.ndarray, batch: np.ndarray, batch_no: int
    ) -> Tuple[ModelParams, np.ndarray]:
        cfg = self.cfg
        features = self.ds.features[batch]
        labels = self.ds.labels[batch]

        losses = forward_loss(params, features, labels).per_sample
        if not np.all(np.isfinite(losses)):
            raise NonFiniteLoss()

        sample_weights, group_losses = self.batch_weights(batch, losses, batch_no)
        gradient = weighted_grad(params, features, labels, sample_weights, cfg.weight_decay)
        if not np.all(np.isfinite(gradient)):
            raise NonFiniteLoss()

        if cfg.momentum > 0:
            velocity = cfg.momentum * velocity + gradient
            params = sgd_step(params, velocity, cfg.eta_w)
        else:
            params = sgd_step(params, gradient, cfg.eta_w)

        if group_losses is not None:
            self.q = exp_ascent(self.q, group_losses, cfg.eta_q)
        return params, velocity


class ERMTrainer(BaseTrainer):
    algorithm = Algorithm.ERM

    def batch_weights(self, rows, losses, batch_no):
        return np.full(rows.size, 1.0 / rows.size), None


class UnsupDROTrainer(BaseTrainer):
    """
    Mean loss of the batch samples at or above the eta_udro loss quantile.
    """

    algorithm = Algorithm.UNSUP_DRO

    def batch_weights(self, rows, losses, batch_no):
        return quantile_weights(losses, self.cfg.eta_udro), None


def quantile_weights(losses: np.ndarray, eta: float) -> np.ndarray:
    """
    Uniform weights over losses >= the sorted loss at index floor(eta * N);
    every other sample gets weight 0.
    """
    n = losses.size
    position = min(int(np.floor(eta * n)), n - 1)
    threshold = np.sort(losses)[position]
    keep = losses >= threshold
    return keep / keep.sum()


class GroupDROTrainer(BaseTrainer):
    """
    Hard-label group DRO. The oracle variant uses true groups for every row;
    the partial variant trains only on rows with an observed group label.
    """

    uses_group_weights = True

    def __init__(self, ds: GroupedDataset, cfg: TrainConfig, oracle: bool):
        super().__init__(ds, cfg)
        self.oracle = oracle
        self.algorithm = Algorithm.GROUP_DRO_ORACLE if oracle else Algorithm.GROUP_DRO_PARTIAL
        self.groups = ds.true_groups if oracle else ds.groups

    def usable_rows(self) -> np.ndarray:
        if self.oracle:
            return np.arange(self.ds.n)
        return np.flatnonzero(self.ds.labeled_mask)

    def batch_weights(self, rows, losses, batch_no):
        assign = hard_assignment(self.groups[rows], self.ds.n_groups)
        return soft_sample_weights(assign, self.q), soft_group_losses(assign, losses)


class WorstOffDROTrainer(BaseTrainer):
    """
    Group DRO over worst-off soft assignments of the unlabeled rows.

    Each batch pins its labeled rows to their groups, solves for the soft
    assignment maximizing the linearized weighted group loss under the
    marginal constraints (N = batch size), then weights gradients with the
    true soft column sums.
    """

    algorithm = Algorithm.WORSTOFF_DRO
    uses_group_weights = True

    def __init__(self, ds: GroupedDataset, cfg: TrainConfig, marginals: Optional[Sequence[float]] = None):
        super().__init__(ds, cfg)
        if ds.n_groups < 2:
            raise InvalidConfig("n_groups", ds.n_groups, ">= 2 for worst-off assignments")
        if marginals is None:
            marginals = estimate_marginals(ds).p_bar
        self.marginals = [float(p) for p in marginals]

    def batch_weights(self, rows, losses, batch_no):
        groups = self.ds.groups[rows]
        labeled = np.flatnonzero(groups >= 0)
        pinned = [(int(pos), int(groups[pos])) for pos in labeled]

        constraints = ConstraintSpec(marginals=self.marginals, epsilon=self.cfg.epsilon, pinned=pinned)
        problem = SolveProblem(losses=losses, weights=self.q, constraints=constraints)
        assign, objective = solve_assignments(problem)

        if assign.relaxed:
            self.eps_relaxations += 1
            self.warn(
                f"epoch {self._epoch} batch {batch_no}: epsilon relaxed "
                f"{self.cfg.epsilon:g} -> {assign.epsilon:.6g}"
            )
        if self.cfg.audit_upper_bound:
            self._audit(rows, problem, assign.epsilon, objective, batch_no)

        return soft_sample_weights(assign, self.q), soft_group_losses(assign, losses)

    def _audit(self, rows: np.ndarray, problem: SolveProblem, epsilon: float, objective: float, batch_no: int) -> None:
        truth = hard_assignment(self.ds.true_groups[rows], self.ds.n_groups).model_copy(update={"epsilon": epsilon})
        if assignment_violations(truth, problem.constraints.with_epsilon(epsilon)):
            return
        truth_objective = objective_value(truth.values, problem.losses, problem.theta)
        if objective < truth_objective - OBJECTIVE_TOL:
            raise UpperBoundViolation(self._epoch, batch_no, objective, truth_objective)


def train_erm(ds: GroupedDataset, cfg: TrainConfig) -> TrainedRun:
    return ERMTrainer(ds, cfg).run()


def train_unsup_dro(ds: GroupedDataset, cfg: TrainConfig) -> TrainedRun:
    return UnsupDROTrainer(ds, cfg).run()


def train_group_dro(ds: GroupedDataset, cfg: TrainConfig, oracle: bool) -> TrainedRun:
    return GroupDROTrainer(ds, cfg, oracle=oracle).run()


def train_worstoff_dro(
    ds: GroupedDataset, cfg: TrainConfig, marginals: Optional[Sequence[float]] = None
) -> TrainedRun:
    return WorstOffDROTrainer(ds, cfg, marginals=marginals).run()


def train(ds: GroupedDataset, cfg: TrainConfig) -> TrainedRun:
    """Dispatch on cfg.algorithm."""
    if cfg.algorithm == Algorithm.ERM:
        return train_erm(ds, cfg)
    if cfg.algorithm == Algorithm.UNSUP_DRO:
        return train_unsup_dro(ds, cfg)
    if cfg.algorithm == Algorithm.GROUP_DRO_ORACLE:
        return train_group_dro(ds, cfg, oracle=True)
    if cfg.algorithm == Algorithm.GROUP_DRO_PARTIAL:
        return train_group_dro(ds, cfg, oracle=False)
    if cfg.algorithm == Algorithm.WORSTOFF_DRO:
        return train_worstoff_dro(ds, cfg)
    raise ConfigError(f"Unknown algorithm {cfg.algorithm!r}")
