import json

import pytest

from wdro.constants import EXIT_OK, EXIT_USAGE, EXIT_RUNTIME

pytestmark = pytest.mark.integration


def error_payload(stderr: str) -> dict:
    return json.loads(stderr.strip().splitlines()[-1])


class TestAssignCommand:
    """Test the single-instance solver command."""

    def test_worked_example(self, run_cli):
        """Test matrix rows and objective on three samples, two groups."""
        code, out, _ = run_cli(
            "assign", "--loss-values", "3,2,1", "--marginals", "0.6,0.4", "--q", "0.7,0.3"
        )

        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[:3] == ["1,0", "0.8,0.2", "0,1"]
        name, value = lines[3].split(",")
        assert name == "objective"
        assert float(value) == pytest.approx(0.7 / 1.8 * 4.6 + 0.3 / 1.2 * 1.4, abs=1e-9)

    def test_losses_from_file(self, run_cli, tmp_path):
        path = tmp_path / "losses.txt"
        path.write_text("3\n2\n1\n")
        code, out, _ = run_cli("assign", "--losses", path, "--marginals", "0.6,0.4", "--eps", "1")
        assert code == EXIT_OK
        # uniform q: the smaller marginal has the larger theta
        assert out.splitlines()[:3] == ["0,1", "0,1", "0,1"]

    def test_infeasible_pins_fail_without_relax(self, run_cli):
        """Test strict mode reports the smallest feasible epsilon."""
        args = ("assign", "--loss-values", "1,2,3,4", "--marginals", "0.9,0.1", "--pins", "0:1,1:1,2:1")
        code, _, err = run_cli(*args)

        assert code == EXIT_RUNTIME
        payload = error_payload(err)
        assert payload["error"] == "INFEASIBLE_CONSTRAINTS"
        assert payload["details"]["min_epsilon"] == pytest.approx(0.65)

        code, out, _ = run_cli(*args, "--relax")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "0,1"

    @pytest.mark.parametrize("argv", [
        ("assign", "--loss-values", "1,2", "--marginals", "0.6,0.6"),
        ("assign", "--loss-values", "1,2", "--marginals", "0.5,0.5", "--pins", "0-1"),
        ("assign", "--loss-values", "1,2", "--marginals", "0.5,0.5", "--q", "0.2,0.2,0.6"),
        ("assign", "--marginals", "0.5,0.5"),
        ("frobnicate",),
    ])
    def test_usage_errors(self, run_cli, argv):
        code, _, err = run_cli(*argv)
        assert code == EXIT_USAGE
        assert error_payload(err)["error"] == "CONFIG_ERROR"


class TestDataCommand:
    """Test dataset generation."""

    def test_gen_data_is_reproducible(self, run_cli, experiment_file, tmp_path):
        code, out, _ = run_cli("gen-data", "--config", experiment_file, "--out", tmp_path / "a")
        assert code == EXIT_OK
        assert "# labeled" in out.splitlines()[0]
        assert len(out.strip().splitlines()) == 4

        run_cli("gen-data", "--config", experiment_file, "--out", tmp_path / "b")
        for name in ("train.csv", "train.truth", "val.csv", "test.csv", "dataset.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        assert (tmp_path / "a" / "run.log").exists()

    def test_seed_override_changes_data(self, run_cli, experiment_file, tmp_path):
        run_cli("gen-data", "--config", experiment_file, "--out", tmp_path / "a")
        run_cli("--seed", "5", "gen-data", "--config", experiment_file, "--out", tmp_path / "b")
        assert (tmp_path / "a" / "train.csv").read_bytes() != (tmp_path / "b" / "train.csv").read_bytes()

    def test_generated_directory_can_be_trained_on(self, run_cli, experiment_file, tmp_path):
        run_cli("gen-data", "--config", experiment_file, "--out", tmp_path / "data")
        experiment = json.loads(experiment_file.read_text())
        experiment.pop("dataset")
        experiment["dataset_path"] = str(tmp_path / "data")
        config = tmp_path / "from_disk.json"
        config.write_text(json.dumps(experiment))

        code, out, _ = run_cli("train", "--config", config, "--out", tmp_path / "run")
        assert code == EXIT_OK
        assert json.loads(out)["algorithm"] == "erm"


class TestTrainCommand:
    """Test single training runs."""

    def test_artifacts(self, run_cli, experiment_file, tmp_path):
        out_dir = tmp_path / "run"
        code, out, _ = run_cli(
            "train", "--config", experiment_file, "--out", out_dir, "--algorithm", "worstoff_dro"
        )

        assert code == EXIT_OK
        summary = json.loads(out)
        assert summary["algorithm"] == "worstoff_dro"
        assert len(summary["final_q"]) == 3

        metrics = [json.loads(line) for line in (out_dir / "metrics.jsonl").read_text().splitlines()]
        assert [m["split"] for m in metrics] == ["train"] * 5 + ["val", "test"]
        assert [m["epoch"] for m in metrics[:5]] == [1, 2, 3, 4, 5]
        assert all(len(m["q"]) == 3 for m in metrics[:5])

        params = json.loads((out_dir / "params.json").read_text())
        assert params["kind"] == "linear"
        assert params["input_dim"] == 5
        warnings = json.loads((out_dir / "warnings.json").read_text())
        assert warnings["algorithm"] == "worstoff_dro"
        assert (out_dir / "run.log").exists()

    def test_reruns_are_byte_identical(self, run_cli, experiment_file, tmp_path):
        for name in ("a", "b"):
            run_cli("train", "--config", experiment_file, "--out", tmp_path / name, "--algorithm", "group_dro_partial")
        for name in ("metrics.jsonl", "params.json", "warnings.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_unknown_algorithm(self, run_cli, experiment_file, tmp_path):
        code, _, err = run_cli("train", "--config", experiment_file, "--out", tmp_path, "--algorithm", "sgd")
        assert code == EXIT_USAGE
        assert "overrides" in error_payload(err)["details"]

    def test_config_is_required(self, run_cli):
        code, _, err = run_cli("train")
        assert code == EXIT_USAGE
        assert "--config" in error_payload(err)["message"]

    def test_global_flags_before_subcommand(self, run_cli, experiment_file, tmp_path):
        code, _, _ = run_cli("--config", experiment_file, "--out", tmp_path / "run", "train")
        assert code == EXIT_OK
        assert (tmp_path / "run" / "metrics.jsonl").exists()


class TestVerifyCommand:
    """Test verification suites."""

    def test_solver_suite(self, run_cli, tmp_path):
        code, out, _ = run_cli("verify", "--solver", "--instances", "30", "--out", tmp_path)
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["passed"] is True
        assert set(payload) == {"solver", "passed"}
        assert json.loads((tmp_path / "verify.json").read_text()) == payload

    def test_upper_bound_suite(self, run_cli):
        code, out, _ = run_cli("verify", "--upper-bound", "--instances", "50")
        assert code == EXIT_OK
        assert json.loads(out)["upper_bound"]["instances"] == 50

    def test_alias_flag_selects_upper_bound_suite(self, run_cli):
        """Test the alias flag runs only the upper-bound suite."""
        code, out, _ = run_cli("verify", "--lemma1", "--instances", "50")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert set(payload) == {"upper_bound", "passed"}
        assert payload["upper_bound"]["instances"] == 50


class TestAblationCommands:
    """Test ablation tables."""

    def test_ablate_eps(self, run_cli, experiment_file, tmp_path):
        code, out, _ = run_cli("ablate-eps", "--config", experiment_file, "--out", tmp_path)
        assert code == EXIT_OK
        lines = (tmp_path / "ablate_eps.csv").read_text().splitlines()
        assert out.splitlines() == lines
        assert lines[0] == "config_id,value,seed_count,min_acc_mean,min_acc_sd,avg_acc_mean,avg_acc_sd"
        assert [line.split(",")[0] for line in lines[1:]] == ["eps-0", "eps-1"]
        assert all(line.split(",")[2] == "2" for line in lines[1:])

    def test_ablate_fraction(self, run_cli, experiment_file, tmp_path):
        code, _, _ = run_cli("ablate-fraction", "--config", experiment_file, "--out", tmp_path)
        assert code == EXIT_OK
        lines = (tmp_path / "ablate_fraction.csv").read_text().splitlines()
        assert [float(line.split(",")[1]) for line in lines[1:]] == [0.3, 1.0]
