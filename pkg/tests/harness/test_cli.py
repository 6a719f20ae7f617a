import pandas as pd
import yaml
from click.testing import CliRunner

from taprecon.cli import cli


def _write_config(tmp_path, mapping):
    path = tmp_path / "experiment.yaml"
    path.write_text(yaml.safe_dump(mapping))
    return path


def test_validate_reports_valid_config(tmp_path, small_config_mapping):
    path = _write_config(tmp_path, small_config_mapping)
    result = CliRunner().invoke(cli, ["validate", "--config", str(path)])
    assert result.exit_code == 0, result.output
    assert "valid: 1 surface(s)" in result.output


def test_validate_show_prints_resolved_config(tmp_path, small_config_mapping):
    path = _write_config(tmp_path, small_config_mapping)
    result = CliRunner().invoke(cli, ["validate", "--config", str(path), "--taps", "9", "--show"])
    assert result.exit_code == 0, result.output
    assert yaml.safe_load(result.output)["episode"]["taps"] == 9


def test_config_errors_exit_with_one(tmp_path, small_config_mapping):
    small_config_mapping["episode"]["seeds"] = []
    path = _write_config(tmp_path, small_config_mapping)
    result = CliRunner().invoke(cli, ["validate", "--config", str(path)])
    assert result.exit_code == 1
    missing = CliRunner().invoke(cli, ["validate", "--config", str(tmp_path / "nope.yaml")])
    assert missing.exit_code == 1


def test_run_writes_episode(tmp_path, small_config_mapping):
    path = _write_config(tmp_path, small_config_mapping)
    out = tmp_path / "out"
    result = CliRunner().invoke(
        cli,
        ["run", "--config", str(path), "--policy", "random", "--seed", "4",
         "--taps", "2", "--output-dir", str(out), "--workers", "1"],
    )
    assert result.exit_code == 0, result.output
    csv = out / "episodes" / "disk" / "random" / "seed-4.csv"
    assert csv.is_file()
    assert (out / "episodes" / "disk" / "random" / "seed-4" / "mean_t01.png").is_file()


def test_run_checkpoint(tmp_path, small_config_mapping):
    path = _write_config(tmp_path, small_config_mapping)
    checkpoint = tmp_path / "belief.bin"
    result = CliRunner().invoke(
        cli,
        ["run", "--config", str(path), "--taps", "1", "--checkpoint", str(checkpoint),
         "--output-dir", str(tmp_path / "out")],
    )
    assert result.exit_code == 0, result.output
    assert checkpoint.stat().st_size > 0


def test_unknown_surface_is_a_config_error(tmp_path, small_config_mapping):
    path = _write_config(tmp_path, small_config_mapping)
    result = CliRunner().invoke(cli, ["run", "--config", str(path), "--surface", "nope"])
    assert result.exit_code == 1


def test_suite_and_render(tmp_path, small_config_mapping):
    small_config_mapping["explorer"] = {"x_step": 4.0, "dtheta_deg": None}
    path = _write_config(tmp_path, small_config_mapping)
    out = tmp_path / "suite"
    result = CliRunner().invoke(
        cli,
        ["suite", "--config", str(path), "--taps", "1", "--seed", "0", "--seed", "1",
         "--policy", "active", "--policy", "random", "--workers", "1",
         "--output-dir", str(out), "--no-progress"],
    )
    assert result.exit_code == 0, result.output
    assert (out / "summary.csv").is_file()

    rendered = CliRunner().invoke(cli, ["render", str(out)])
    assert rendered.exit_code == 0, rendered.output
    assert (out / "curves.csv").is_file()


def test_suite_partial_failure_exits_with_three(monkeypatch, tmp_path, small_config_mapping):
    from taprecon.core.errors import EpisodeError
    from taprecon.harness import suite as suite_module

    def always_fail(*args, **kwargs):
        raise EpisodeError("simulated failure", 1)

    monkeypatch.setattr(suite_module, "run_episode", always_fail)
    path = _write_config(tmp_path, small_config_mapping)
    result = CliRunner().invoke(
        cli,
        ["suite", "--config", str(path), "--workers", "1", "--no-progress",
         "--output-dir", str(tmp_path / "failing")],
    )
    assert result.exit_code == 3


def test_run_resumes_from_checkpoint(tmp_path, small_config_mapping):
    path = _write_config(tmp_path, small_config_mapping)
    checkpoint = tmp_path / "belief.bin"
    out = tmp_path / "out"
    base = ["run", "--config", str(path), "--taps", "2", "--output-dir", str(out), "--workers", "1"]
    first = CliRunner().invoke(cli, base + ["--checkpoint", str(checkpoint)])
    assert first.exit_code == 0, first.output

    second = CliRunner().invoke(cli, base + ["--resume", str(checkpoint)])
    assert second.exit_code == 0, second.output
    assert "resuming after 2 taps" in second.output
    frame = pd.read_csv(out / "episodes" / "disk" / "active" / "seed-0.csv")
    assert frame["t"].tolist() == [3, 4]


def test_resume_with_another_grid_is_a_config_error(tmp_path, small_config_mapping):
    path = _write_config(tmp_path, small_config_mapping)
    checkpoint = tmp_path / "belief.bin"
    out = str(tmp_path / "out")
    saved = CliRunner().invoke(
        cli, ["run", "--config", str(path), "--taps", "1", "--checkpoint", str(checkpoint), "--output-dir", out]
    )
    assert saved.exit_code == 0, saved.output
    result = CliRunner().invoke(
        cli,
        ["run", "--config", str(path), "--set", "grid.scale=1.0", "--resume", str(checkpoint),
         "--output-dir", out],
    )
    assert result.exit_code == 1
