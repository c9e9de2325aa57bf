"""
train: one training run with metrics, parameters and warnings written to --out.
"""

import argparse
import logging

from pydantic import ValidationError

from wdro.commands.base import require_experiment, resolve_out, print_json
from wdro.constants import EXIT_OK, Split
from wdro.exceptions import ConfigError
from wdro.schemas import TrainConfig
from wdro.services.pipeline import load_splits, run_training, write_run

logger = logging.getLogger(__name__)


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("train", help="train one configuration")
    parser.add_argument("--algorithm", default=None, help="override the configured algorithm")
    parser.set_defaults(handler=handle)
    return parser


def handle(args: argparse.Namespace) -> int:
    experiment = require_experiment(args)
    cfg = experiment.train
    updates = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.algorithm is not None:
        updates["algorithm"] = args.algorithm
    if updates:
        try:
            cfg = TrainConfig.model_validate({**cfg.model_dump(), **updates})
        except ValidationError as e:
            raise ConfigError("Invalid training overrides", details={"overrides": updates, "errors": str(e)})

    out_dir = resolve_out(args, experiment)
    splits = load_splits(experiment, args.seed)
    run, evaluations = run_training(splits, cfg)
    write_run(run, evaluations, out_dir)

    summary = {
        "algorithm": run.algorithm.value,
        "epochs": cfg.epochs,
        "eps_relaxations": run.eps_relaxations,
        "final_q": run.final_q,
        "train_acc": run.records[-1].acc_overall if run.records else None,
    }
    for split in (Split.VAL, Split.TEST):
        summary[f"{split.value}_acc"] = evaluations[split].acc_overall
        summary[f"{split.value}_acc_group"] = evaluations[split].acc_group
    print_json(summary)
    return EXIT_OK
