"""
Common utility functions for the package.
"""

import hashlib
import json
from typing import Optional, List, Tuple, Sequence, Union, Any

import numpy as np


def derive_seed(master_seed: int, *labels: Union[str, int]) -> int:
    """
    Derive a child seed from a master seed and stable consumer labels.

    The child is the first 8 bytes of SHA-256 over "master:label1:label2...",
    so each consumer (generator, mask, init, batch order) gets an independent
    stream that does not shift when another consumer is added.

    Args:
        master_seed: Master seed of the experiment
        labels: Consumer labels, e.g. ("data", "train") or ("train", 3)

    Returns:
        Unsigned 63-bit seed
    """
    key = ":".join([str(master_seed), *(str(label) for label in labels)])
    digest = hashlib.sha256(key.encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def make_rng(master_seed: int, *labels: Union[str, int]) -> np.random.Generator:
    """Build a numpy Generator seeded by derive_seed."""
    return np.random.default_rng(derive_seed(master_seed, *labels))


def stable_argsort_desc(values: np.ndarray) -> np.ndarray:
    """
    Indices sorting values descending, ties broken by original index ascending.
    """
    order = np.lexsort((np.arange(len(values)), -np.asarray(values, dtype=float)))
    return order


def chunk_indices(indices: np.ndarray, chunk_size: Optional[int]) -> List[np.ndarray]:
    """
    Split an index array into consecutive chunks.

    Args:
        indices: Index array to chunk
        chunk_size: Size of each chunk; None keeps one chunk

    Returns:
        List of chunks; the last one may be shorter
    """
    if chunk_size is None or chunk_size >= len(indices):
        return [indices]
    return [indices[i:i + chunk_size] for i in range(0, len(indices), chunk_size)]


def parse_float_list(raw: Union[str, Sequence[float], None]) -> List[float]:
    """
    Parse floats from a comma-separated string or a sequence.

    Args:
        raw: "0.6,0.4" or [0.6, 0.4]

    Returns:
        List of floats
    """
    if raw is None:
        return []
    if isinstance(raw, str):
        return [float(token) for token in raw.split(",") if token.strip()]
    return [float(value) for value in raw]


def parse_pins(raw: Optional[str]) -> List[Tuple[int, int]]:
    """
    Parse pinned rows from "row:group,row:group".

    Args:
        raw: Pin specification string

    Returns:
        List of (row, group) pairs
    """
    if not raw:
        return []
    pins = []
    for token in raw.split(","):
        token = token.strip()
        if not token:
            continue
        row, group = token.split(":")
        pins.append((int(row), int(group)))
    return pins


def mean_and_sd(values: Sequence[float]) -> Tuple[float, float]:
    """
    Sample mean and standard deviation (ddof=1, 0 for a single value).
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return float("nan"), float("nan")
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), sd


def dumps_stable(payload: Any) -> str:
    """Serialize to JSON with sorted keys so reruns are byte-identical."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))
