"""
Dataset files: a CSV with header f0,...,f{d-1},y,g (g = -1 for a missing
group label), a sibling ".truth" file with one true group per line, and a
dataset.json descriptor per directory.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Union

import numpy as np

from wdro.constants import Split, MISSING_GROUP
from wdro.exceptions import DatasetIOError
from wdro.schemas import GroupedDataset, DataConfig

logger = logging.getLogger(__name__)

META_FILENAME = "dataset.json"

PathLike = Union[str, Path]


def truth_path(path: PathLike) -> Path:
    return Path(path).with_suffix(".truth")


def write_dataset(ds: GroupedDataset, path: PathLike) -> Path:
    """
    Write one split and its .truth sibling. Floats use %.17g so a read-back
    is exact.
    """
    path = Path(path)
    header = ",".join([f"f{j}" for j in range(ds.dim)] + ["y", "g"])
    table = np.column_stack([ds.features, ds.labels, ds.groups])
    fmt = ["%.17g"] * ds.dim + ["%d", "%d"]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, table, fmt=fmt, delimiter=",", header=header, comments="")
        np.savetxt(truth_path(path), ds.true_groups, fmt="%d")
    except OSError as e:
        raise DatasetIOError(str(path), str(e))
    logger.debug(f"Wrote {ds.n} rows to {path}")
    return path


def read_dataset(path: PathLike, n_groups: int, split: Split) -> GroupedDataset:
    """
    Read one split. Without a .truth sibling the observed groups are taken as
    truth, which requires a fully labeled file.
    """
    path = Path(path)
    if not path.exists():
        raise DatasetIOError(str(path), "file not found")
    try:
        with path.open() as handle:
            header = handle.readline().strip().split(",")
        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as e:
        raise DatasetIOError(str(path), str(e))

    if header[-2:] != ["y", "g"] or table.shape[1] != len(header):
        raise DatasetIOError(str(path), "expected header f0,...,f{d-1},y,g")

    groups = table[:, -1].astype(np.int64)
    truth_file = truth_path(path)
    if truth_file.exists():
        true_groups = np.loadtxt(truth_file, dtype=np.int64, ndmin=1)
    elif np.any(groups == MISSING_GROUP):
        raise DatasetIOError(str(path), "missing group labels need a .truth file")
    else:
        true_groups = groups.copy()

    try:
        return GroupedDataset(
            features=table[:, :-2],
            labels=table[:, -2].astype(np.int64),
            groups=groups,
            true_groups=true_groups,
            n_groups=n_groups,
            split=split,
        )
    except ValueError as e:
        raise DatasetIOError(str(path), str(e))


def write_splits(splits: Dict[Split, GroupedDataset], out_dir: PathLike, config: DataConfig) -> Path:
    """Write every split plus the dataset.json descriptor."""
    out_dir = Path(out_dir)
    files = {}
    for split, ds in splits.items():
        files[split.value] = write_dataset(ds, out_dir / f"{split.value}.csv").name
    n_groups = next(iter(splits.values())).n_groups
    meta = {"n_groups": n_groups, "files": files, "config": config.model_dump(mode="json")}
    meta_path = out_dir / META_FILENAME
    meta_path.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    return meta_path


def read_splits(data_dir: PathLike) -> Dict[Split, GroupedDataset]:
    """Read every split listed in a dataset.json descriptor."""
    data_dir = Path(data_dir)
    meta_path = data_dir / META_FILENAME
    if not meta_path.exists():
        raise DatasetIOError(str(meta_path), "dataset descriptor not found")
    try:
        meta = json.loads(meta_path.read_text())
        n_groups = int(meta["n_groups"])
        files = meta["files"]
    except (ValueError, KeyError) as e:
        raise DatasetIOError(str(meta_path), f"malformed descriptor: {e}")

    splits = {}
    for split in Split:
        if split.value not in files:
            raise DatasetIOError(str(meta_path), f"no file for split '{split.value}'")
        splits[split] = read_dataset(data_dir / files[split.value], n_groups, split)
    return splits
