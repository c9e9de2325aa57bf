"""
gen-data: generate train/val/test files and print their counts.
"""

import argparse
import logging
import sys

from wdro.commands.base import require_experiment, resolve_out
from wdro.constants import EXIT_OK
from wdro.exceptions import ConfigError
from wdro.services.data_synth import generate_splits, summarize
from wdro.services.dataset_io import write_splits

logger = logging.getLogger(__name__)

TABLE_HEADER = ("split", "# labeled", "# unlabeled", "total samples", "# groups", "# minority", "# majority")


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("gen-data", help="generate a synthetic dataset")
    parser.set_defaults(handler=handle)
    return parser


def handle(args: argparse.Namespace) -> int:
    experiment = require_experiment(args)
    if experiment.dataset is None:
        raise ConfigError("gen-data needs an inline 'dataset' config")

    config = experiment.dataset
    if args.seed is not None:
        config = config.model_copy(update={"seed": args.seed})

    out_dir = resolve_out(args, experiment)
    splits = generate_splits(config)
    write_splits(splits, out_dir, config)

    rows = [TABLE_HEADER]
    for split, ds in splits.items():
        s = summarize(ds)
        rows.append(
            (split.value, s.labeled, s.unlabeled, s.total, s.groups, s.minority_samples, s.majority_samples)
        )
    widths = [max(len(str(row[i])) for row in rows) for i in range(len(TABLE_HEADER))]
    for row in rows:
        sys.stdout.write("  ".join(str(cell).rjust(width) for cell, width in zip(row, widths)) + "\n")

    logger.info(f"Dataset written to {out_dir}")
    return EXIT_OK
