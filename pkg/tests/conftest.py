import os

import numpy as np
import pytest

# Keep test runs independent of a developer .env
os.environ.update({
    "WDRO_LOG_LEVEL": "WARNING",
    "WDRO_MC_SHARDS": "2",
})

from wdro.constants import Split  # noqa: E402
from wdro.schemas import (  # noqa: E402
    ConstraintSpec,
    GroupWeights,
    SolveProblem,
    TrainConfig,
    DataConfig,
    ExperimentConfig,
)
from wdro.services.data_synth import gen_cmnist_like, mask_mcar, generate_splits  # noqa: E402


@pytest.fixture
def example_problem():
    """Three decreasing losses, two groups, the first group worst-off."""
    return SolveProblem(
        losses=np.array([3.0, 2.0, 1.0]),
        weights=GroupWeights(values=[0.7, 0.3]),
        constraints=ConstraintSpec(marginals=[0.6, 0.4], epsilon=0.0),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_train():
    """Small fully labeled cmnist-like train split."""
    return gen_cmnist_like(600, dim=5, seed=7)


@pytest.fixture
def small_masked_train(small_train):
    return mask_mcar(small_train, 0.3, seed=11)


@pytest.fixture
def small_data_config():
    return DataConfig(n_train=600, n_val=200, n_test=300, dim=5, labeled_fraction=0.3, seed=3)


@pytest.fixture
def small_splits(small_data_config):
    return generate_splits(small_data_config)


@pytest.fixture
def fast_train_config():
    return TrainConfig(eta_w=0.2, eta_q=0.05, epochs=5, batch_size=128, seed=0)


@pytest.fixture
def experiment_file(tmp_path, small_data_config, fast_train_config):
    """Write a small ExperimentConfig to disk and return its path."""
    experiment = ExperimentConfig(
        dataset=small_data_config,
        train=fast_train_config,
        out_dir=str(tmp_path / "runs"),
        fractions=[0.3, 1.0],
        eps_values=[0.0, 1.0],
        seeds=[0, 1],
    )
    path = tmp_path / "experiment.json"
    path.write_text(experiment.model_dump_json(indent=2))
    return path


@pytest.fixture
def train_split(small_splits):
    return small_splits[Split.TRAIN]


@pytest.fixture
def run_cli(capsys):
    """Run the wdro entry point and return (exit code, stdout, stderr)."""
    from wdro.main import main

    def _run(*argv):
        code = main([str(arg) for arg in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run
