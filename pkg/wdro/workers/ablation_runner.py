"""
Seed-averaged ablations over the labeled fraction and over epsilon.
"""

import csv
import logging
from pathlib import Path
from typing import List, Sequence, Tuple

from wdro.constants import Split, ABLATION_COLUMNS
from wdro.schemas import AblationRow, TrainConfig
from wdro.services.data_synth import mask_mcar
from wdro.services.evaluation import minority_group
from wdro.services.pipeline import Splits, run_training
from wdro.utils import derive_seed, mean_and_sd
from wdro.workers.sweep_runner import run_parallel

logger = logging.getLogger(__name__)

# (label, value, train config, splits)
AblationTask = Tuple[str, float, TrainConfig, Splits]


def _ablation_task(task: AblationTask) -> Tuple[float, float]:
    """Train one cell and return (test minority accuracy, test overall accuracy)."""
    _, _, cfg, splits = task
    _, records = run_training(splits, cfg)
    test = records[Split.TEST]
    return test.acc_group[minority_group(splits[Split.TRAIN])], test.acc_overall


def _aggregate(kind: str, values: Sequence[float], seeds: Sequence[int], results: List[Tuple[float, float]]) -> List[AblationRow]:
    rows = []
    for index, value in enumerate(values):
        cell = results[index * len(seeds):(index + 1) * len(seeds)]
        min_mean, min_sd = mean_and_sd([minority for minority, _ in cell])
        avg_mean, avg_sd = mean_and_sd([overall for _, overall in cell])
        rows.append(
            AblationRow(
                config_id=f"{kind}-{index}",
                value=float(value),
                seed_count=len(cell),
                min_acc_mean=min_mean,
                min_acc_sd=min_sd,
                avg_acc_mean=avg_mean,
                avg_acc_sd=avg_sd,
            )
        )
        logger.info(f"{kind}={value:g}: minority {min_mean:.4f} +/- {min_sd:.4f}, overall {avg_mean:.4f}")
    return rows


def ablate_labeled_fraction(
    splits: Splits, base: TrainConfig, fractions: Sequence[float], seeds: Sequence[int], jobs: int = 1
) -> List[AblationRow]:
    """
    Re-mask the training split at each labeled fraction (masks derived from
    the true groups) and train once per seed.
    """
    tasks: List[AblationTask] = []
    for fraction in fractions:
        for seed in seeds:
            masked = mask_mcar(splits[Split.TRAIN], fraction, derive_seed(seed, "mask", repr(float(fraction))))
            cell_splits = {**splits, Split.TRAIN: masked}
            cfg = base.model_copy(update={"seed": seed})
            tasks.append(("fraction", fraction, cfg, cell_splits))
    return _aggregate("fraction", fractions, seeds, run_parallel(_ablation_task, tasks, jobs))


def ablate_epsilon(
    splits: Splits, base: TrainConfig, eps_values: Sequence[float], seeds: Sequence[int], jobs: int = 1
) -> List[AblationRow]:
    """
    Train once per (epsilon, seed). Each seed re-masks the training split at
    its observed labeled fraction; every epsilon shares that seed's mask.
    """
    train_split = splits[Split.TRAIN]
    fraction = float(train_split.labeled_mask.mean())
    seed_splits = {}
    for seed in seeds:
        if fraction > 0.0:
            masked = mask_mcar(train_split, fraction, derive_seed(seed, "mask", "eps"))
            seed_splits[seed] = {**splits, Split.TRAIN: masked}
        else:
            seed_splits[seed] = splits

    tasks: List[AblationTask] = []
    for eps in eps_values:
        for seed in seeds:
            cfg = base.model_copy(update={"epsilon": float(eps), "seed": seed})
            tasks.append(("eps", eps, cfg, seed_splits[seed]))
    return _aggregate("eps", eps_values, seeds, run_parallel(_ablation_task, tasks, jobs))


def write_table_csv(rows: List[AblationRow], path: Path) -> Path:
    """CSV with the fixed ablation column order."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=ABLATION_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.model_dump())
    return path
