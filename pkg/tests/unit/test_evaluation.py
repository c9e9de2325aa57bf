"""
Unit tests for per-group evaluation and NVP model selection.
"""

import numpy as np
import pytest

from wdro.constants import Split
from wdro.exceptions import EmptySplit, TrainingError
from wdro.schemas import GroupedDataset, ModelParams, RunRecord, SweepEntry, SweepResult, TrainConfig
from wdro.services.evaluation import evaluate, minority_group, nvp_select, nvp_select_entry


def threshold_model(weight: float = 1.0) -> ModelParams:
    """Linear model on one feature: predicts 1 iff weight * x >= 0."""
    return ModelParams(input_dim=1, weights=[weight, 0.0])


def entry(config_id: int, overall: float, minority: float, error: str = None) -> SweepEntry:
    val = None
    if error is None:
        val = RunRecord(
            epoch=1,
            split=Split.VAL,
            loss=0.5,
            acc_overall=overall,
            acc_group=[0.9, 0.9, minority],
        )
    return SweepEntry(config_id=config_id, config=TrainConfig(seed=config_id), val=val, error=error)


class TestEvaluate:
    """Accuracy by true group."""

    def test_per_group_accuracy(self):
        ds = GroupedDataset(
            features=[[1.0], [-1.0], [2.0], [-3.0], [0.5]],
            labels=[1, 1, 1, 0, 0],
            groups=[0, 0, 1, 1, 1],
            true_groups=[0, 0, 1, 1, 1],
            n_groups=2,
            split=Split.TEST,
        )
        result = evaluate(threshold_model(), ds)
        assert result.acc_overall == pytest.approx(3 / 5)
        assert result.acc_group == pytest.approx([0.5, 2 / 3])
        assert result.group_counts == [2, 3]
        assert result.absent == [False, False]

    def test_absent_group_is_flagged(self):
        ds = GroupedDataset(
            features=[[1.0], [-1.0]],
            labels=[1, 0],
            groups=[0, 0],
            true_groups=[0, 0],
            n_groups=3,
            split=Split.VAL,
        )
        result = evaluate(threshold_model(), ds)
        assert result.acc_group == [1.0, 1.0, 1.0]
        assert result.absent == [False, True, True]

    def test_empty_split(self):
        ds = GroupedDataset(
            features=np.zeros((0, 1)), labels=[], groups=[], true_groups=[], n_groups=2, split=Split.TEST
        )
        with pytest.raises(EmptySplit):
            evaluate(threshold_model(), ds)

    def test_minority_group(self, small_train):
        counts = small_train.group_counts()
        assert minority_group(small_train) == int(np.argmin(counts))
        assert minority_group(small_train) == 2


class TestNvpSelection:
    """Top-k by validation accuracy, then best minority accuracy."""

    OVERALL = [0.90, 0.85, 0.95, 0.80, 0.92, 0.88, 0.93]
    MINORITY = [0.50, 0.90, 0.40, 0.99, 0.60, 0.70, 0.60]

    def sweep(self, minority=None, errors=()):
        minority = minority or self.MINORITY
        entries = [
            entry(i, overall, low, error="TRAINING_ERROR: boom" if i in errors else None)
            for i, (overall, low) in enumerate(zip(self.OVERALL, minority))
        ]
        return SweepResult(entries=entries, minority_group=2)

    def test_hand_ranked_selection(self):
        # top five by overall: 2, 6, 4, 0, 5; best minority among them is 5
        assert nvp_select_entry(self.sweep(), top_k=5).config_id == 5

    def test_top_one_is_plain_validation_accuracy(self):
        assert nvp_select_entry(self.sweep(), top_k=1).config_id == 2

    def test_minority_ties_go_to_earlier_config(self):
        minority = list(self.MINORITY)
        minority[5] = 0.60
        assert nvp_select_entry(self.sweep(minority), top_k=5).config_id == 4

    def test_failed_runs_are_skipped(self):
        selected = nvp_select_entry(self.sweep(errors=(5,)), top_k=5)
        # top five of the rest: 2, 6, 4, 0, 1
        assert selected.config_id == 1

    def test_returns_config(self):
        assert nvp_select(self.sweep(), top_k=5) == TrainConfig(seed=5)

    def test_no_successful_run(self):
        with pytest.raises(TrainingError):
            nvp_select_entry(self.sweep(errors=range(7)))
