"""
Shared helpers for subcommands.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional

from wdro.core.logging_config import attach_run_log
from wdro.exceptions import ConfigError
from wdro.schemas import ExperimentConfig
from wdro.services.pipeline import load_experiment


def add_global_flags(parser: argparse.ArgumentParser, suppress: bool = False) -> None:
    """
    --config, --out, --seed and --jobs. Subcommand parsers suppress defaults
    so a flag given before the subcommand is not overwritten.
    """
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", metavar="PATH", default=default, help="experiment JSON file")
    parser.add_argument("--out", metavar="DIR", default=default, help="output directory")
    parser.add_argument("--seed", type=int, metavar="U64", default=default, help="master seed override")
    parser.add_argument("--jobs", type=int, metavar="N", default=default, help="parallel worker processes")


def require_experiment(args: argparse.Namespace) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("--config is required for this command")
    return load_experiment(args.config)


def resolve_out(args: argparse.Namespace, experiment: Optional[ExperimentConfig] = None) -> Path:
    """Output directory from --out or the experiment; created, with run.log attached."""
    if args.out:
        out_dir = Path(args.out)
    elif experiment is not None:
        out_dir = Path(experiment.out_dir)
    else:
        raise ConfigError("--out is required for this command")
    attach_run_log(out_dir)
    return out_dir


def resolve_jobs(args: argparse.Namespace, default: int) -> int:
    jobs = args.jobs if args.jobs is not None else default
    if jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    return jobs


def print_json(payload: Any) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
