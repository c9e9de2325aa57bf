"""
assign: solve a single assignment instance and print the matrix as CSV.
"""

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from wdro.constants import EXIT_OK
from wdro.exceptions import ConfigError, DatasetIOError
from wdro.schemas import ConstraintSpec, GroupWeights, SolveProblem
from wdro.services.assignment_solver import solve_assignments
from wdro.utils import parse_float_list, parse_pins

logger = logging.getLogger(__name__)


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("assign", help="solve one worst-off assignment instance")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--losses", metavar="PATH", help="file of losses, comma or newline separated")
    source.add_argument("--loss-values", metavar="L1,L2,...", help="losses inline")
    parser.add_argument("--marginals", required=True, metavar="P1,P2,...")
    parser.add_argument("--eps", type=float, default=0.0)
    parser.add_argument("--q", default=None, metavar="Q1,Q2,...", help="group weights (default uniform)")
    parser.add_argument("--pins", default=None, metavar="ROW:GROUP,...")
    parser.add_argument("--relax", action="store_true", help="relax epsilon instead of failing when infeasible")
    parser.set_defaults(handler=handle)
    return parser


def read_losses(args: argparse.Namespace) -> list:
    if args.loss_values is not None:
        return parse_float_list(args.loss_values)
    path = Path(args.losses)
    try:
        text = path.read_text()
    except OSError as e:
        raise DatasetIOError(str(path), str(e))
    return parse_float_list(text.replace("\n", ","))


def handle(args: argparse.Namespace) -> int:
    try:
        losses = read_losses(args)
        marginals = parse_float_list(args.marginals)
        q = parse_float_list(args.q) if args.q else [1.0 / len(marginals)] * len(marginals)
        problem = SolveProblem(
            losses=losses,
            weights=GroupWeights(values=q),
            constraints=ConstraintSpec(marginals=marginals, epsilon=args.eps, pinned=parse_pins(args.pins)),
        )
    except (ValidationError, ValueError) as e:
        raise ConfigError("Invalid assignment instance", details={"errors": str(e)})

    matrix, objective = solve_assignments(problem, relax=args.relax)
    if matrix.relaxed:
        logger.warning(f"Epsilon relaxed to {matrix.epsilon:.12g}")

    for row in matrix.values:
        sys.stdout.write(",".join(f"{value:.12g}" for value in row) + "\n")
    sys.stdout.write(f"objective,{objective:.12g}\n")
    return EXIT_OK
