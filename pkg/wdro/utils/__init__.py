"""
Utility module initialization.
"""

from .helpers import (
    derive_seed,
    make_rng,
    stable_argsort_desc,
    chunk_indices,
    parse_float_list,
    parse_pins,
    mean_and_sd,
    dumps_stable
)

__all__ = [
    "derive_seed",
    "make_rng",
    "stable_argsort_desc",
    "chunk_indices",
    "parse_float_list",
    "parse_pins",
    "mean_and_sd",
    "dumps_stable"
]
