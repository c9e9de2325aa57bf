"""
verify: property suites for the solver, the upper-bound property and the
coverage bounds. Exit code 3 on any violation.
"""

import argparse
import json
import logging

from wdro.commands.base import resolve_out, print_json
from wdro.constants import EXIT_OK, EXIT_VERIFICATION, BOUNDS_TRIALS
from wdro.core.config import settings
from wdro.services.assignment_solver import verify_solver
from wdro.services.bounds_lab import verify_bounds_grid, verify_upper_bound

logger = logging.getLogger(__name__)

REPORT_FILENAME = "verify.json"


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("verify", help="run verification suites")
    parser.add_argument("--bounds", action="store_true", help="Monte Carlo coverage grid")
    parser.add_argument("--solver", action="store_true", help="greedy solver against the exact oracle")
    parser.add_argument(
        "--upper-bound", "--lemma1", dest="upper_bound", action="store_true",
        help="worst-off objective bounds the group objective",
    )
    parser.add_argument("--instances", type=int, default=200, help="random instances per property")
    parser.add_argument("--trials", type=int, default=BOUNDS_TRIALS, help="Monte Carlo trials per cell")
    parser.set_defaults(handler=handle)
    return parser


def handle(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else settings.DEFAULT_SEED
    selected = {"bounds": args.bounds, "solver": args.solver, "upper_bound": args.upper_bound}
    if not any(selected.values()):
        selected = {name: True for name in selected}

    reports = {}
    if selected["solver"]:
        reports["solver"] = verify_solver(args.instances, seed)
    if selected["upper_bound"]:
        reports["upper_bound"] = verify_upper_bound(args.instances, seed)
    if selected["bounds"]:
        reports["bounds"] = verify_bounds_grid(args.trials, seed)

    payload = {name: report.model_dump(mode="json") for name, report in reports.items()}
    payload["passed"] = all(report.passed for report in reports.values())

    if args.out:
        out_dir = resolve_out(args)
        (out_dir / REPORT_FILENAME).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    print_json(payload)

    if not payload["passed"]:
        failed = [name for name, report in reports.items() if not report.passed]
        logger.error(f"Verification failed: {', '.join(failed)}")
        return EXIT_VERIFICATION
    return EXIT_OK
