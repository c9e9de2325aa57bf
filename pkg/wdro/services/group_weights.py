"""
Simplex group weights and the exponentiated-gradient ascent on them.
"""

import logging

import numpy as np

from wdro.constants import EMPTY_GROUP_MASS
from wdro.exceptions import NonFiniteLoss, InvalidConfig
from wdro.schemas import GroupWeights, AssignmentMatrix

logger = logging.getLogger(__name__)


def exp_ascent(q: GroupWeights, group_losses: np.ndarray, eta_q: float) -> GroupWeights:
    """
    One exponentiated-gradient step q_j <- q_j exp(eta_q L_j), renormalized.

    The gradient of sum_j q_j L_j with respect to q_j is L_j, so the update is
    done in log space and normalized with log-sum-exp.

    Args:
        q: Current group weights
        group_losses: Per-group losses L_j
        eta_q: Step size, nonnegative

    Returns:
        Updated group weights
    """
    losses = np.asarray(group_losses, dtype=float)
    if losses.shape != q.values.shape:
        raise InvalidConfig("group_losses", losses.shape, f"shape {q.values.shape}")
    if eta_q < 0:
        raise InvalidConfig("eta_q", eta_q, ">= 0")
    bad = np.flatnonzero(~np.isfinite(losses))
    if bad.size:
        raise NonFiniteLoss(int(bad[0]))

    log_q = np.log(q.values) + eta_q * losses
    log_q = log_q - np.logaddexp.reduce(log_q)
    values = np.exp(log_q)

    tiny = np.finfo(float).tiny
    if np.any(values < tiny):
        # Underflowed groups stay strictly positive.
        values = np.maximum(values, tiny)
        values = values / values.sum()

    return GroupWeights(values=values)


def soft_group_losses(assign: AssignmentMatrix, losses: np.ndarray) -> np.ndarray:
    """
    Per-group average loss under soft assignments.

    L_j = sum_i g_ij l_i / sum_i g_ij; a group whose soft mass is below
    EMPTY_GROUP_MASS gets L_j = 0.
    """
    losses = np.asarray(losses, dtype=float)
    if losses.shape != (assign.n,):
        raise InvalidConfig("losses", losses.shape, f"shape ({assign.n},)")

    mass = assign.column_sums()
    totals = assign.values.T @ losses
    nonempty = mass >= EMPTY_GROUP_MASS
    result = np.zeros(assign.m)
    result[nonempty] = totals[nonempty] / mass[nonempty]
    return result


def soft_sample_weights(assign: AssignmentMatrix, q: GroupWeights) -> np.ndarray:
    """
    Per-sample gradient weights w_i = sum_j q_j g_ij / sum_i' g_i'j.

    With these weights, sum_i w_i l_i equals sum_j q_j L_j for the soft
    per-group averages L_j, using the true soft column sums.
    """
    mass = assign.column_sums()
    nonempty = mass >= EMPTY_GROUP_MASS
    coef = np.zeros(assign.m)
    coef[nonempty] = q.values[nonempty] / mass[nonempty]
    return assign.values @ coef


def hard_assignment(groups: np.ndarray, m: int) -> AssignmentMatrix:
    """One-hot assignment matrix from hard group labels."""
    groups = np.asarray(groups, dtype=np.int64)
    values = np.zeros((groups.size, m))
    values[np.arange(groups.size), groups] = 1.0
    return AssignmentMatrix(values=values)
