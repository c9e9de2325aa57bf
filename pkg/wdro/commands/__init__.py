"""
CLI subcommands. Each module registers its parser and sets a handler that
returns the process exit code.
"""

from wdro.commands import data, train, sweep, verify, assign, ablate

REGISTRARS = [
    data.register,
    train.register,
    sweep.register,
    verify.register,
    assign.register,
    ablate.register,
    ablate.register_eps,
]

__all__ = ["REGISTRARS"]
