#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: test_cli

This is the test module for the project's command-line interface (CLI)
module.
"""
# fmt: off
import json

import pandas as pd
import pytest
import pyfwgames.cli as cli
from pyfwgames import __version__
# fmt: on
from click.testing import CliRunner, Result


@pytest.fixture
def run_config(tmp_path, coordination_game, write_game, write_json):
    """Run config of 10 iterations on the coordination game, evaluated every 3."""
    write_game(coordination_game, "coordination.json")
    return write_json(
        {"game": "coordination.json", "T": 10, "eval_every": 3, "seed": 1},
        "run.json",
    )


def test_version_displays_library_version():
    """
    Arrange/Act: Run the `version` subcommand.
    Assert: The output matches the library version.
    """
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(cli.cli, ["version"])
    assert (
        __version__ in result.output.strip()
    ), "Version number should match library version."


def test_verbose_output():
    """
    Arrange/Act: Run the `version` subcommand with the '-v' flag.
    Assert: The output indicates verbose logging is enabled.
    """
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(cli.cli, ["-v", "version"])
    assert (
        "Verbose" in result.output.strip()
    ), "Verbose logging should be indicated in output."


def test_show_config():
    """
    Arrange/Act: Run the `show_config` command.
    Assert: The output includes the `SCHEDULES` and `TOLERANCES` headings.
    """
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(cli.cli, ["show-config"])
    assert result.exit_code == 0
    assert "SCHEDULES" in result.output.strip(), "SCHEDULES should be in output."
    assert "TOLERANCES" in result.output.strip(), "TOLERANCES should be in output."


def test_get_config_path():
    """
    Arrange/Act: Run the `get_config_path` command.
    Assert: The output includes the correct file name `config.yml`".
    """
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(cli.cli, ["get-config-path"])
    assert result.exit_code == 0
    assert "config.yml" in result.output.strip(), "config.yml should be in output."


def test_commands_listed_in_order():
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(cli.cli, ["--help"])
    assert result.exit_code == 0
    output = result.output
    assert output.index("show-config") < output.index("run") < output.index("eval")


def test_run_writes_log(run_config, tmp_path):
    """
    Arrange: Run config with T=10 and eval_every=3.
    Act: Run the `run` command into an output directory.
    Assert: run_log.csv has ceil(10 / 3) + 1 = 5 rows and final_strategy.json exists.
    """
    out = tmp_path / "out"
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(
        cli.cli, ["run", "-c", str(run_config), "-o", str(out)],
    )
    assert result.exit_code == 0
    frame = pd.read_csv(out / "run_log.csv")
    assert frame["t"].tolist() == [0, 3, 6, 9, 10]
    with open(out / "final_strategy.json", "r") as r:
        final = json.load(r)
    assert final["header"]["seed"] == 1


def test_run_is_byte_identical(run_config, tmp_path):
    """
    Arrange/Act: Run the same config twice into separate directories.
    Assert: Both run logs are byte-identical.
    """
    runner: CliRunner = CliRunner()
    for name in ("a", "b"):
        result: Result = runner.invoke(
            cli.cli, ["run", "-c", str(run_config), "-o", str(tmp_path / name)],
        )
        assert result.exit_code == 0
    with open(tmp_path / "a" / "run_log.csv", "r") as r:
        first = r.read()
    with open(tmp_path / "b" / "run_log.csv", "r") as r:
        second = r.read()
    assert first == second


def test_run_seed_override(run_config, tmp_path):
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(
        cli.cli, ["run", "-c", str(run_config), "-s", "7", "-o", str(tmp_path)],
    )
    assert result.exit_code == 0
    with open(tmp_path / "final_strategy.json", "r") as r:
        assert json.load(r)["header"]["seed"] == 7


def test_run_missing_game(tmp_path, write_json):
    """
    Arrange: Run config naming a game file that does not exist.
    Act: Run the `run` command.
    Assert: Exit status 2 and nothing is written.
    """
    path = write_json({"game": "missing.json"}, "run.json")
    out = tmp_path / "out"
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(cli.cli, ["run", "-c", str(path), "-o", str(out)])
    assert result.exit_code == 2
    assert "ConfigError" in result.output
    assert not out.exists()


def test_run_missing_config(tmp_path):
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(cli.cli, ["run", "-c", str(tmp_path / "none.json")])
    assert result.exit_code == 2


def test_sweep_empty_grid(tmp_path, write_json):
    """
    Arrange: Grid with an empty T axis.
    Act: Run the `sweep` command.
    Assert: Exit status 2.
    """
    grid = write_json({"T": [], "n": [2], "m": [2]}, "grid.json")
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(
        cli.cli, ["sweep", "-g", str(grid), "-o", str(tmp_path / "sweep")],
    )
    assert result.exit_code == 2


def test_sweep_runs_cells(tmp_path, write_json):
    grid = write_json({"T": [10], "n": [2], "m": [2], "seeds": 2}, "grid.json")
    out = tmp_path / "sweep"
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(cli.cli, ["sweep", "-g", str(grid), "-o", str(out)])
    assert result.exit_code == 0
    summary = pd.read_csv(out / "sweep_summary.csv")
    assert summary["status"].tolist() == ["ok", "ok"]


def test_sweep_partial_failure(tmp_path, write_json):
    """
    Arrange: Grid whose congestion cell cannot run projected SGD.
    Act: Run the `sweep` command.
    Assert: Exit status 4 with the failed cell reported.
    """
    grid = write_json(
        {
            "T": [5],
            "n": [2],
            "m": [2],
            "family": ["potential_game", "congestion_bandit"],
            "learner": "projected_sgd",
        },
        "grid.json",
    )
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(
        cli.cli, ["sweep", "-g", str(grid), "-o", str(tmp_path / "sweep")],
    )
    assert result.exit_code == 4
    assert "Cell 1 failed" in result.output


def test_eval_prints_gaps(run_config, tmp_path):
    """
    Arrange: Final strategies written by a run.
    Act: Run the `eval` command on them.
    Assert: The report names nash_gap, fw_gap and values.
    """
    runner: CliRunner = CliRunner()
    runner.invoke(cli.cli, ["run", "-c", str(run_config), "-o", str(tmp_path)])
    result: Result = runner.invoke(
        cli.cli,
        [
            "eval",
            "-g",
            str(tmp_path / "coordination.json"),
            "-s",
            str(tmp_path / "final_strategy.json"),
        ],
    )
    assert result.exit_code == 0
    for key in ("nash_gap", "fw_gap", "values"):
        assert key in result.output


def test_eval_bad_strategy(coordination_game, write_game, write_json):
    game = write_game(coordination_game)
    strategy = write_json({"strategies": [[[1.0, 0.0]]]}, "strategy.json")
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(
        cli.cli, ["eval", "-g", str(game), "-s", str(strategy)],
    )
    assert result.exit_code == 2


@pytest.mark.slow
def test_reproduce_experiment(tmp_path):
    """
    Arrange/Act: Run `reproduce-experiment` with one seed and two iterations.
    Assert: Both learners report their safe-state mass.
    """
    runner: CliRunner = CliRunner()
    result: Result = runner.invoke(
        cli.cli, ["reproduce-experiment", "-k", "1", "-T", "2", "-o", str(tmp_path)],
    )
    assert result.exit_code == 0
    assert "fw: safe-state mass" in result.output
    assert "sgd: safe-state mass" in result.output
    assert (tmp_path / "summary.json").is_file()
