"""
Per-group accuracy and NVP model selection.
"""

import logging

import numpy as np

from wdro.constants import NVP_TOP_K
from wdro.exceptions import EmptySplit, TrainingError
from wdro.schemas import ModelParams, GroupedDataset, EvaluationResult, SweepResult, SweepEntry, TrainConfig
from wdro.services.predictor import predict, forward_loss

logger = logging.getLogger(__name__)


def evaluate(params: ModelParams, ds: GroupedDataset) -> EvaluationResult:
    """
    Overall and per-true-group accuracy of a predictor on one split.

    Groups with no sample in the split report accuracy 1 and are flagged
    absent.
    """
    if ds.n == 0:
        raise EmptySplit(ds.split.value)

    correct = (predict(params, ds.features) == ds.labels).astype(float)
    counts = np.bincount(ds.true_groups, minlength=ds.n_groups)
    hits = np.bincount(ds.true_groups, weights=correct, minlength=ds.n_groups)
    absent = counts == 0
    acc_group = np.ones(ds.n_groups)
    acc_group[~absent] = hits[~absent] / counts[~absent]

    return EvaluationResult(
        loss=forward_loss(params, ds.features, ds.labels).mean,
        acc_overall=float(correct.mean()),
        acc_group=acc_group.tolist(),
        group_counts=counts.astype(int).tolist(),
        absent=absent.tolist(),
    )


def minority_group(ds: GroupedDataset) -> int:
    """True group with the fewest samples; lowest index on ties."""
    return int(np.argmin(ds.group_counts()))


def nvp_select_entry(sweep: SweepResult, top_k: int = NVP_TOP_K) -> SweepEntry:
    """
    Rank successful runs by validation accuracy, keep the top_k, and return
    the one with the best validation accuracy on the minority group.

    Ties go to the earlier configuration at both stages.
    """
    candidates = [entry for entry in sweep.entries if entry.val is not None]
    if not candidates:
        raise TrainingError("No successful run to select from", details={"entries": len(sweep.entries)})

    overall = np.array([entry.val.acc_overall for entry in candidates])
    ranked = np.argsort(-overall, kind="stable")[:top_k]

    best = int(ranked[0])
    for index in ranked[1:]:
        current = candidates[index].val.acc_group[sweep.minority_group]
        incumbent = candidates[best].val.acc_group[sweep.minority_group]
        if current > incumbent or (current == incumbent and index < best):
            best = int(index)
    selected = candidates[best]
    logger.info(f"NVP selected config {selected.config_id} of {len(sweep.entries)}")
    return selected


def nvp_select(sweep: SweepResult, top_k: int = NVP_TOP_K) -> TrainConfig:
    return nvp_select_entry(sweep, top_k).config
