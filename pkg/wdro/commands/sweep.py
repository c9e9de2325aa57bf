"""
sweep: grid search with NVP selection.
"""

import argparse
import csv
import json
import logging
from pathlib import Path

from wdro.commands.base import require_experiment, resolve_out, resolve_jobs, print_json
from wdro.constants import EXIT_OK, SWEEP_COLUMNS
from wdro.core.config import settings
from wdro.schemas import SweepResult
from wdro.services.evaluation import nvp_select_entry
from wdro.services.pipeline import load_splits
from wdro.workers.sweep_runner import run_sweep

logger = logging.getLogger(__name__)

SWEEP_FILENAME = "sweep.csv"
SELECTION_FILENAME = "selection.json"


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("sweep", help="grid search with NVP model selection")
    parser.set_defaults(handler=handle)
    return parser


def sweep_rows(sweep: SweepResult):
    minority = sweep.minority_group
    for entry in sweep.entries:
        cfg = entry.config
        yield {
            "config_id": entry.config_id,
            "algorithm": cfg.algorithm.value,
            "eta_w": cfg.eta_w,
            "eta_q": cfg.eta_q,
            "weight_decay": cfg.weight_decay,
            "epsilon": cfg.epsilon,
            "eta_udro": cfg.eta_udro,
            "val_acc_overall": entry.val.acc_overall if entry.val else "",
            "val_acc_minority": entry.val.acc_group[minority] if entry.val else "",
            "test_acc_overall": entry.test.acc_overall if entry.test else "",
            "test_acc_minority": entry.test.acc_group[minority] if entry.test else "",
            "error": entry.error or "",
        }


def write_sweep_csv(sweep: SweepResult, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(sweep_rows(sweep))
    return path


def handle(args: argparse.Namespace) -> int:
    experiment = require_experiment(args)
    base = experiment.train
    if args.seed is not None:
        base = base.model_copy(update={"seed": args.seed})

    out_dir = resolve_out(args, experiment)
    splits = load_splits(experiment, args.seed)
    sweep = run_sweep(splits, base, experiment.grid, resolve_jobs(args, settings.DEFAULT_JOBS))
    write_sweep_csv(sweep, out_dir / SWEEP_FILENAME)

    selected = nvp_select_entry(sweep, experiment.top_k)
    selection = {
        "config_id": selected.config_id,
        "config": selected.config.model_dump(mode="json"),
        "minority_group": sweep.minority_group,
        "val": selected.val.model_dump(mode="json"),
        "test": selected.test.model_dump(mode="json"),
        "failed_configs": [entry.config_id for entry in sweep.entries if entry.error],
    }
    (out_dir / SELECTION_FILENAME).write_text(json.dumps(selection, sort_keys=True, indent=2) + "\n")
    print_json(selection)
    return EXIT_OK
