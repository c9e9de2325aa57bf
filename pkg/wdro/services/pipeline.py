"""
Glue between datasets, trainers and run artifacts.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Tuple, List, Optional

from wdro.constants import Split
from wdro.core.config import settings
from wdro.exceptions import ConfigError, DatasetIOError
from wdro.schemas import (
    ExperimentConfig,
    GroupedDataset,
    TrainConfig,
    TrainedRun,
    RunRecord,
)
from wdro.services.data_synth import generate_splits
from wdro.services.dataset_io import read_splits
from wdro.services.evaluation import evaluate
from wdro.services.trainers import train
from wdro.utils import dumps_stable

logger = logging.getLogger(__name__)

Splits = Dict[Split, GroupedDataset]


def load_experiment(path: str) -> ExperimentConfig:
    """Read an ExperimentConfig JSON file; invalid content becomes ConfigError."""
    try:
        raw = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"Cannot read config '{path}': {e}")
    try:
        return ExperimentConfig.model_validate_json(raw)
    except ValueError as e:
        raise ConfigError(f"Invalid config '{path}'", details={"errors": str(e)})


def load_splits(experiment: ExperimentConfig, seed: Optional[int] = None) -> Splits:
    """Generate splits from the inline dataset config or read them from disk."""
    if experiment.dataset_path is not None:
        path = Path(experiment.dataset_path)
        if not path.is_dir():
            raise DatasetIOError(str(path), "expected a directory with dataset.json")
        return read_splits(path)
    return generate_splits(experiment.dataset, seed)


def final_records(run: TrainedRun, splits: Splits, epoch: int) -> Dict[Split, RunRecord]:
    """Validation and test records of the final parameters."""
    records = {}
    for split in (Split.VAL, Split.TEST):
        result = evaluate(run.params, splits[split])
        records[split] = RunRecord.from_evaluation(
            result,
            epoch=epoch,
            split=split,
            q=run.final_q if run.records and run.records[-1].q else None,
        )
    return records


def run_training(splits: Splits, cfg: TrainConfig) -> Tuple[TrainedRun, Dict[Split, RunRecord]]:
    run = train(splits[Split.TRAIN], cfg)
    return run, final_records(run, splits, cfg.epochs)


def write_run(run: TrainedRun, evaluations: Dict[Split, RunRecord], out_dir: Path) -> List[Path]:
    """
    Write metrics.jsonl (train records per epoch, then final val/test),
    params.json and warnings.json. No timestamps, so reruns are identical.
    """
    out_dir.mkdir(parents=True, exist_ok=True)

    metrics_path = out_dir / settings.METRICS_FILENAME
    lines = [dumps_stable(record.model_dump(mode="json")) for record in run.records]
    lines += [dumps_stable(evaluations[split].model_dump(mode="json")) for split in (Split.VAL, Split.TEST)]
    metrics_path.write_text("\n".join(lines) + "\n")

    params_path = out_dir / settings.PARAMS_FILENAME
    params_path.write_text(run.params.to_json() + "\n")

    warnings_path = out_dir / settings.WARNINGS_FILENAME
    warnings_path.write_text(
        json.dumps(
            {"algorithm": run.algorithm.value, "eps_relaxations": run.eps_relaxations, "warnings": run.warnings},
            sort_keys=True,
            indent=2,
        )
        + "\n"
    )
    logger.info(f"Wrote run artifacts to {out_dir}")
    return [metrics_path, params_path, warnings_path]
