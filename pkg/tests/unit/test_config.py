"""
Unit tests for settings, configuration models and experiment loading.
"""

import json
import logging

import pytest

from wdro.constants import Algorithm, FULL_BATCH
from wdro.core.config import Settings
from wdro.core.logging_config import attach_run_log, configure_logging
from wdro.exceptions import ConfigError
from wdro.schemas import DataConfig, ExperimentConfig, TrainConfig
from wdro.services.pipeline import load_experiment


class TestSettings:
    """Test environment-driven settings."""

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("WDRO_MC_SHARDS", raising=False)
        settings = Settings(_env_file=None)
        assert settings.MC_SHARDS == 4
        assert settings.FEASIBILITY_TOL == 1e-9
        assert settings.ORACLE_MAX_ROWS == 10

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("WDRO_MARGINAL_FLOOR", "1e-4")
        monkeypatch.setenv("WDRO_DEFAULT_JOBS", "3")
        settings = Settings(_env_file=None)
        assert settings.MARGINAL_FLOOR == 1e-4
        assert settings.DEFAULT_JOBS == 3


class TestTrainConfig:
    """Test training configuration validation."""

    def test_defaults(self):
        cfg = TrainConfig()
        assert cfg.algorithm == Algorithm.ERM
        assert cfg.batch_size == FULL_BATCH
        assert cfg.batch_limit is None
        assert cfg.momentum == 0.0

    def test_integer_batch(self):
        assert TrainConfig(batch_size=64).batch_limit == 64

    @pytest.mark.parametrize("field,value", [
        ("batch_size", 0),
        ("batch_size", "half"),
        ("epsilon", -0.1),
        ("eta_udro", 1.0),
        ("momentum", 1.0),
        ("epochs", -1),
        ("algorithm", "sgd"),
    ])
    def test_invalid_fields(self, field, value):
        with pytest.raises(ValueError):
            TrainConfig(**{field: value})


class TestExperimentConfig:
    """Test experiment configuration validation."""

    def test_needs_exactly_one_dataset_source(self):
        with pytest.raises(ValueError):
            ExperimentConfig()
        with pytest.raises(ValueError):
            ExperimentConfig(dataset=DataConfig(), dataset_path="data")

    def test_grid_keys_must_be_train_fields(self):
        with pytest.raises(ValueError, match="Unknown grid"):
            ExperimentConfig(dataset=DataConfig(), grid={"learning_rate": [0.1]})

    def test_data_config_group_lengths(self):
        with pytest.raises(ValueError):
            DataConfig(group_fractions=[0.5, 0.5], flip_probs=[0.1, 0.2, 0.3])


class TestLoadExperiment:
    """Test reading experiment files."""

    def test_load(self, experiment_file):
        experiment = load_experiment(str(experiment_file))
        assert experiment.dataset.n_train == 600
        assert experiment.train.epochs == 5

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_experiment(str(path))

    def test_invalid_values(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dataset": {"labeled_fraction": 0}}))
        with pytest.raises(ConfigError) as exc_info:
            load_experiment(str(path))
        assert exc_info.value.exit_code == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_experiment(str(tmp_path / "missing.json"))

    def test_shipped_configs_load(self):
        from pathlib import Path

        root = Path(__file__).resolve().parents[2] / "configs"
        for path in sorted(root.glob("*.json")):
            load_experiment(str(path))

    def test_colored_digit_group_steps_stay_small(self):
        """Test the shipped colored-digit configs keep eta_q within 1e-4..1e-2."""
        from pathlib import Path

        root = Path(__file__).resolve().parents[2] / "configs"
        for name in ("cmnist_worstoff.json", "cmnist_ablations.json"):
            assert 1e-4 <= load_experiment(str(root / name)).train.eta_q <= 1e-2
        sweep = load_experiment(str(root / "cmnist_sweep.json"))
        assert sweep.grid["eta_q"] == [0.01, 0.001, 0.0001]
        assert len(sweep.grid["eta_w"]) * len(sweep.grid["weight_decay"]) * len(sweep.grid["eta_q"]) == 27


class TestLogging:
    """Test run log attachment."""

    def test_run_log_is_attached_once(self, tmp_path):
        configure_logging("INFO")
        first = attach_run_log(tmp_path)
        second = attach_run_log(tmp_path)
        assert first == second == tmp_path / "run.log"

        file_handlers = [h for h in logging.getLogger().handlers if isinstance(h, logging.FileHandler)]
        assert len(file_handlers) == 1

        logging.getLogger("wdro.test").info("hello run log")
        file_handlers[0].flush()
        assert "hello run log" in first.read_text()
        configure_logging("WARNING")
