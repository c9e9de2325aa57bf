"""
Synthetic grouped datasets with controllable spurious correlation, MCAR
group-label masking and marginal estimation.
"""

import logging
from typing import Sequence, Dict, Optional

import numpy as np

from wdro.constants import (
    Split,
    GeneratorName,
    MISSING_GROUP,
    CMNIST_FLIP_PROBS,
    CMNIST_GROUP_FRACTIONS,
    CMNIST_CORE_SNR,
    CMNIST_SPURIOUS_SNR,
    ADULT_POS_RATES,
    ADULT_GROUP_FRACTIONS,
    ADULT_CORE_SNR,
    ADULT_GROUP_SNR,
    DEFAULT_DIM,
)
from wdro.exceptions import InvalidConfig, UnobservedGroup
from wdro.schemas import GroupedDataset, MarginalEstimate, DataConfig, DatasetSummary
from wdro.utils import derive_seed

logger = logging.getLogger(__name__)


def _check_fractions(group_fractions: Sequence[float]) -> np.ndarray:
    fractions = np.asarray(group_fractions, dtype=float)
    if fractions.ndim != 1 or fractions.size < 1:
        raise InvalidConfig("group_fractions", list(group_fractions), "a non-empty vector")
    if np.any(fractions < 0) or abs(fractions.sum() - 1.0) > 1e-6:
        raise InvalidConfig("group_fractions", list(group_fractions), "nonnegative, summing to 1")
    return fractions / fractions.sum()


def _check_probs(name: str, values: Sequence[float], m: int) -> np.ndarray:
    probs = np.asarray(values, dtype=float)
    if probs.shape != (m,):
        raise InvalidConfig(name, list(values), f"{m} entries, one per group")
    if np.any(probs < 0) or np.any(probs > 1):
        raise InvalidConfig(name, list(values), "probabilities in [0, 1]")
    return probs


def gen_cmnist_like(
    n: int,
    flip_probs: Sequence[float] = CMNIST_FLIP_PROBS,
    group_fractions: Sequence[float] = CMNIST_GROUP_FRACTIONS,
    core_snr: float = CMNIST_CORE_SNR,
    spurious_snr: float = CMNIST_SPURIOUS_SNR,
    dim: int = DEFAULT_DIM,
    seed: int = 0,
    split: Split = Split.TRAIN,
) -> GroupedDataset:
    """
    Colored-digit style data: a weak core feature and a strong color feature.

    The color c equals the label except with group-specific flip
    probability; coordinate 0 carries (2y-1) * core_snr and coordinate 1
    carries (2c-1) * spurious_snr, on top of unit Gaussian noise.

    Args:
        n: Number of samples
        flip_probs: P(c != y) per group
        group_fractions: Group sampling probabilities
        core_snr: Mean shift of the label-causal coordinate
        spurious_snr: Mean shift of the color coordinate
        dim: Feature dimension, at least 2
        seed: Generator seed
        split: Split tag of the result

    Returns:
        Fully labeled GroupedDataset
    """
    if n < 1:
        raise InvalidConfig("n", n, ">= 1")
    if dim < 2:
        raise InvalidConfig("dim", dim, ">= 2")
    fractions = _check_fractions(group_fractions)
    flips = _check_probs("flip_probs", flip_probs, fractions.size)

    rng = np.random.default_rng(seed)
    labels = (rng.random(n) < 0.5).astype(np.int64)
    groups = rng.choice(fractions.size, size=n, p=fractions)
    flipped = rng.random(n) < flips[groups]
    color = np.where(flipped, 1 - labels, labels)

    features = rng.standard_normal((n, dim))
    features[:, 0] += (2 * labels - 1) * core_snr
    features[:, 1] += (2 * color - 1) * spurious_snr

    return GroupedDataset(
        features=features,
        labels=labels,
        groups=groups,
        true_groups=groups.copy(),
        n_groups=fractions.size,
        split=split,
    )


def gen_adult_like(
    n: int,
    pos_rates: Sequence[float] = ADULT_POS_RATES,
    group_fractions: Sequence[float] = ADULT_GROUP_FRACTIONS,
    core_snr: float = ADULT_CORE_SNR,
    group_snr: float = ADULT_GROUP_SNR,
    dim: int = DEFAULT_DIM,
    seed: int = 0,
    split: Split = Split.TRAIN,
) -> GroupedDataset:
    """
    Tabular style data: group-conditional Gaussians with group-dependent
    positive rates.

    Group j shifts coordinate 1 + j by group_snr; coordinate 0 carries
    (2y-1) * core_snr. Labels are Bernoulli(pos_rates[g]), so group identity
    is predictive of the label.
    """
    if n < 1:
        raise InvalidConfig("n", n, ">= 1")
    fractions = _check_fractions(group_fractions)
    rates = _check_probs("pos_rates", pos_rates, fractions.size)
    if dim < fractions.size + 1:
        raise InvalidConfig("dim", dim, f">= {fractions.size + 1} for {fractions.size} groups")

    rng = np.random.default_rng(seed)
    groups = rng.choice(fractions.size, size=n, p=fractions)
    labels = (rng.random(n) < rates[groups]).astype(np.int64)

    features = rng.standard_normal((n, dim))
    features[:, 0] += (2 * labels - 1) * core_snr
    features[np.arange(n), 1 + groups] += group_snr

    return GroupedDataset(
        features=features,
        labels=labels,
        groups=groups,
        true_groups=groups.copy(),
        n_groups=fractions.size,
        split=split,
    )


def mask_mcar(ds: GroupedDataset, labeled_fraction: float, seed: int) -> GroupedDataset:
    """
    Hide group labels completely at random.

    Each sample keeps its true group with probability labeled_fraction,
    independently of features, labels and groups; the rest get MISSING.
    """
    if not 0.0 < labeled_fraction <= 1.0:
        raise InvalidConfig("labeled_fraction", labeled_fraction, "in (0, 1]")
    if ds.split != Split.TRAIN:
        raise InvalidConfig("split", ds.split.value, "train")

    rng = np.random.default_rng(seed)
    keep = rng.random(ds.n) < labeled_fraction
    groups = np.where(keep, ds.true_groups, MISSING_GROUP)
    logger.debug(f"MCAR mask kept {int(keep.sum())} of {ds.n} group labels")

    return GroupedDataset(
        features=ds.features,
        labels=ds.labels,
        groups=groups,
        true_groups=ds.true_groups,
        n_groups=ds.n_groups,
        split=ds.split,
    )


def estimate_marginals(ds: GroupedDataset) -> MarginalEstimate:
    """
    Group frequencies among the labeled samples.

    Raises:
        UnobservedGroup: if some group has no labeled sample
    """
    labeled = ds.groups[ds.labeled_mask]
    counts = np.bincount(labeled, minlength=ds.n_groups)
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        raise UnobservedGroup(int(empty[0]))
    k = int(counts.sum())
    return MarginalEstimate(p_bar=(counts / k).tolist(), labeled_count=k)


def summarize(ds: GroupedDataset, path: Optional[str] = None) -> DatasetSummary:
    """Labeled/unlabeled counts and extreme group sizes of one split."""
    counts = ds.group_counts()
    labeled = int(ds.labeled_mask.sum())
    return DatasetSummary(
        split=ds.split,
        labeled=labeled,
        unlabeled=ds.n - labeled,
        total=ds.n,
        groups=ds.n_groups,
        minority_samples=int(counts.min()),
        majority_samples=int(counts.max()),
        path=path,
    )


def generate_split(config: DataConfig, split: Split, n: int, master_seed: int) -> GroupedDataset:
    """Generate one split from a DataConfig with a seed derived per split."""
    seed = derive_seed(master_seed, "data", split.value)
    if config.generator == GeneratorName.ADULT_LIKE:
        return gen_adult_like(
            n,
            pos_rates=config.pos_rates,
            group_fractions=config.group_fractions,
            core_snr=config.core_snr,
            group_snr=config.group_snr,
            dim=config.dim,
            seed=seed,
            split=split,
        )
    return gen_cmnist_like(
        n,
        flip_probs=config.flip_probs,
        group_fractions=config.group_fractions,
        core_snr=config.core_snr,
        spurious_snr=config.spurious_snr,
        dim=config.dim,
        seed=seed,
        split=split,
    )


def generate_splits(config: DataConfig, master_seed: Optional[int] = None) -> Dict[Split, GroupedDataset]:
    """
    Train, validation and test splits; the train split is MCAR-masked.
    """
    seed = config.seed if master_seed is None else master_seed
    sizes = {Split.TRAIN: config.n_train, Split.VAL: config.n_val, Split.TEST: config.n_test}
    splits = {split: generate_split(config, split, n, seed) for split, n in sizes.items()}

    mask_seed = derive_seed(seed, "mask")
    splits[Split.TRAIN] = mask_mcar(splits[Split.TRAIN], config.labeled_fraction, mask_seed)
    return splits
