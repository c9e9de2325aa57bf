"""
ablate-fraction and ablate-eps: seed-averaged ablation tables as CSV.
"""

import argparse
import logging
import sys

from wdro.commands.base import require_experiment, resolve_out, resolve_jobs
from wdro.constants import EXIT_OK
from wdro.core.config import settings
from wdro.services.pipeline import load_splits
from wdro.workers.ablation_runner import ablate_labeled_fraction, ablate_epsilon, write_table_csv

logger = logging.getLogger(__name__)


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("ablate-fraction", help="minority accuracy across labeled fractions")
    parser.set_defaults(handler=handle_fraction)
    return parser


def register_eps(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("ablate-eps", help="minority accuracy across epsilon values")
    parser.set_defaults(handler=handle_eps)
    return parser


def _echo(path) -> None:
    sys.stdout.write(path.read_text())


def handle_fraction(args: argparse.Namespace) -> int:
    experiment = require_experiment(args)
    out_dir = resolve_out(args, experiment)
    splits = load_splits(experiment, args.seed)
    rows = ablate_labeled_fraction(
        splits,
        experiment.train,
        experiment.fractions,
        experiment.seeds,
        resolve_jobs(args, settings.DEFAULT_JOBS),
    )
    _echo(write_table_csv(rows, out_dir / "ablate_fraction.csv"))
    return EXIT_OK


def handle_eps(args: argparse.Namespace) -> int:
    experiment = require_experiment(args)
    out_dir = resolve_out(args, experiment)
    splits = load_splits(experiment, args.seed)
    rows = ablate_epsilon(
        splits,
        experiment.train,
        experiment.eps_values,
        experiment.seeds,
        resolve_jobs(args, settings.DEFAULT_JOBS),
    )
    _echo(write_table_csv(rows, out_dir / "ablate_eps.csv"))
    return EXIT_OK
