import argparse
import json
import logging
import sys
from typing import List, Optional

from wdro.commands import REGISTRARS
from wdro.commands.base import add_global_flags
from wdro.constants import EXIT_RUNTIME
from wdro.core.config import settings
from wdro.core.logging_config import configure_logging
from wdro.exceptions import ConfigError, WdroException

logger = logging.getLogger(__name__)


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as ConfigError (exit code 1)."""

    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> CliParser:
    parser = CliParser(prog="wdro", description="Worst-off DRO experiments under partial group labels")
    parser.add_argument("--log-level", default=None, help=f"logging level (default {settings.LOG_LEVEL})")
    parser.add_argument("--version", action="version", version=f"{settings.PROJECT_NAME} {settings.VERSION}")
    add_global_flags(parser)

    subparsers = parser.add_subparsers(dest="command", parser_class=CliParser)
    subparsers.required = True
    for register in REGISTRARS:
        add_global_flags(register(subparsers), suppress=True)
    return parser


def _report(exc: WdroException) -> None:
    sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True, default=str) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and map errors to exit codes."""
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        if args.log_level:
            configure_logging(args.log_level)
        return args.handler(args)
    except WdroException as exc:
        logger.error(f"{exc.error_code}: {exc.message}")
        _report(exc)
        return exc.exit_code
    except Exception as exc:
        logger.exception(f"Unexpected error: {exc}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
