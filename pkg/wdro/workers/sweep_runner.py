"""
Parallel execution of independent training runs.

Runs share no mutable state; results come back in submission order, so the
output does not depend on scheduling.
"""

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Sequence, Tuple, TypeVar

from pydantic import ValidationError

from wdro.constants import Split
from wdro.exceptions import ConfigError, WdroException
from wdro.schemas import TrainConfig, SweepEntry, SweepResult
from wdro.services.evaluation import minority_group
from wdro.services.pipeline import Splits, run_training

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def run_parallel(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """Map fn over items with up to `jobs` worker processes, preserving order."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def expand_grid(base: TrainConfig, grid: Dict[str, Sequence[Any]]) -> List[TrainConfig]:
    """
    Cartesian product of the grid over the base config. Keys vary in file
    order with the last key changing fastest.
    """
    if not grid:
        return [base]
    keys = list(grid)
    configs = []
    for values in itertools.product(*(grid[key] for key in keys)):
        update = dict(zip(keys, values))
        try:
            configs.append(TrainConfig.model_validate({**base.model_dump(), **update}))
        except ValidationError as e:
            raise ConfigError("Invalid sweep grid point", details={"point": update, "errors": str(e)})
    return configs


def _sweep_task(task: Tuple[int, TrainConfig, Splits]) -> SweepEntry:
    config_id, cfg, splits = task
    try:
        _, records = run_training(splits, cfg)
    except WdroException as e:
        logger.error(f"Sweep config {config_id} failed: {e.message}")
        return SweepEntry(config_id=config_id, config=cfg, error=f"{e.error_code}: {e.message}")
    except Exception as e:
        logger.exception(f"Sweep config {config_id} failed unexpectedly")
        return SweepEntry(config_id=config_id, config=cfg, error=f"{type(e).__name__}: {e}")
    return SweepEntry(config_id=config_id, config=cfg, val=records[Split.VAL], test=records[Split.TEST])


def run_sweep(
    splits: Splits, base: TrainConfig, grid: Dict[str, Sequence[Any]], jobs: int = 1
) -> SweepResult:
    """Train every grid point; a failed run is recorded and the rest continue."""
    configs = expand_grid(base, grid)
    logger.info(f"Sweep over {len(configs)} configs with {jobs} jobs")
    tasks = [(config_id, cfg, splits) for config_id, cfg in enumerate(configs)]
    entries = run_parallel(_sweep_task, tasks, jobs)
    return SweepResult(entries=entries, minority_group=minority_group(splits[Split.TRAIN]))

