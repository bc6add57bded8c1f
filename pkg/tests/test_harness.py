#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: test_harness

Tests for run configs, slope fitting, sweeps and the reproduction workflow
"""

import numpy as np
import pandas as pd
import pytest
from pyfwgames.games import ExperimentSettings, MarkovGame
from pyfwgames.harness import (
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    RunConfig,
    SweepGrid,
    draw_game,
    evaluate_strategy,
    execute_run,
    exit_code,
    fit_regret_slope,
    load_strategy,
    occupancy,
    preferred_facilities,
    reproduce_experiment,
    run_cell,
    run_sweep,
)
from pyfwgames.strategies import PolytopePoint
from pyfwgames.utils import load_mapping
from pyfwgames.utils.exceptions import ConfigError, NoConvergence, NotCoverable

T_AXIS = np.arange(1, 1001)


@pytest.mark.parametrize(
    "values, expected",
    [(T_AXIS.astype(float), 1.0), (T_AXIS ** 0.8, 0.8), (np.full(1000, 3.0), 0.0)],
)
def test_fit_regret_slope(values, expected):
    series = pd.Series(values, index=T_AXIS)

    assert fit_regret_slope(series, (100, 1000)) == pytest.approx(expected, abs=1e-9)


def test_fit_regret_slope_plain_sequence():
    assert fit_regret_slope([1.0, 4.0, 9.0, 16.0], (1, 4)) == pytest.approx(2.0)


def test_fit_regret_slope_shifts_zeros():
    series = pd.Series([0.0, 0.0, 0.0], index=[1, 2, 3])

    assert fit_regret_slope(series, (1, 3)) == pytest.approx(0.0)


@pytest.mark.parametrize("window", [(0, 10), (10, 5), (1, 2000), (500, 500)])
def test_fit_regret_slope_bad_window(window):
    with pytest.raises(ValueError):
        fit_regret_slope(pd.Series(T_AXIS.astype(float), index=T_AXIS), window)


def test_fit_regret_slope_negative_values():
    with pytest.raises(ValueError):
        fit_regret_slope([1.0, -1.0, 2.0], (1, 3))


def test_load_mapping_keeps_exponent_floats(write_json):
    path = write_json({"overrides": {"mu": 1e-05}}, "schedule.json")

    assert load_mapping(path)["overrides"]["mu"] == pytest.approx(1e-05)


def test_load_mapping_reads_yaml(tmp_path):
    path = tmp_path / "grid.yml"
    path.write_text("T: [10, 20]\nseeds: 2\n")

    assert load_mapping(path) == {"T": [10, 20], "seeds": 2}


@pytest.mark.parametrize("content, name", [("{not json", "bad.json"), ("a: [1, 2", "bad.yml")])
def test_load_mapping_parse_errors(tmp_path, content, name):
    path = tmp_path / name
    path.write_text(content)

    with pytest.raises(ConfigError):
        load_mapping(path)


def test_load_mapping_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_mapping(tmp_path / "nothing.json", "Run config")


def test_run_config_defaults():
    cfg = RunConfig.from_dict({"game": "markov_congestion"})

    assert cfg.learner == "fw_explore"
    assert cfg.T == 100
    assert cfg.to_dict()["game"] == "markov_congestion"


def test_run_config_resolves_relative_game(tmp_path, coordination_game, write_game, write_json):
    """
    Arrange: A game file and a run config next to it naming the game relatively.
    Act: Load the run config.
    Assert: The game path resolves against the config's directory.
    """
    write_game(coordination_game, "coordination.json")
    path = write_json({"game": "coordination.json", "T": 5}, "run.json")

    cfg = RunConfig.load(path)

    assert cfg.game == str(tmp_path / "coordination.json")
    assert cfg.load_game().n == 2


@pytest.mark.parametrize(
    "definition",
    [
        {"T": 5},
        {"game": "markov_congestion", "color": "red"},
        {"game": "markov_congestion", "learner": "hedge"},
        {"game": "markov_congestion", "feedback": "full_information"},
        {"game": "markov_congestion", "T": -1},
        {"game": "markov_congestion", "eval_every": 0},
        {"game": "markov_congestion", "horizon_cap": -2},
        {"game": "markov_congestion", "schedule": {"family": "zero_sum"}},
        {"game": "no/such/game.json"},
        ["game", "markov_congestion"],
    ],
)
def test_run_config_errors(definition):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(definition)


def test_execute_run_writes_outputs(tmp_path, coordination_game, write_game):
    """
    Arrange: Run config for 10 iterations evaluated every 3.
    Act: Execute it.
    Assert: run_log.csv has 5 rows and final_strategy.json echoes the config.
    """
    game_path = write_game(coordination_game)
    out = tmp_path / "results"
    cfg = RunConfig.from_dict({"game": str(game_path), "T": 10, "eval_every": 3, "out": str(out)})

    execute_run(cfg)

    frame = pd.read_csv(out / "run_log.csv")
    final = load_mapping(out / "final_strategy.json")
    assert len(frame) == 5
    assert final["header"]["config"]["T"] == 10
    assert np.array(final["strategies"]).shape == (2, 1, 2)


def test_evaluate_saved_strategy(tmp_path, coordination_game, write_game):
    game_path = write_game(coordination_game)
    execute_run(RunConfig.from_dict({"game": str(game_path), "T": 5, "out": str(tmp_path)}))

    report = evaluate_strategy(str(game_path), tmp_path / "final_strategy.json")

    assert set(report) == {"nash_gap", "fw_gap", "values"}
    assert report["nash_gap"] <= report["fw_gap"] + 1e-12
    assert len(report["values"]) == 2


def test_load_strategy_congestion(small_congestion_game):
    definition = {"atoms": [{"atoms": [[1, 0]], "weights": [1.0]}, {"atoms": [[0, 1]], "weights": [1.0]}]}

    profile = load_strategy(small_congestion_game, definition)

    assert all(isinstance(p, PolytopePoint) for p in profile)
    assert profile[1].dense.tolist() == [0.0, 1.0]


@pytest.mark.parametrize(
    "definition",
    [
        {"strategies": [[[0.5, 0.5]], [[0.5, 0.5]]]},
        {"atoms": [{"atoms": [[1, 0]]}]},
        {"atoms": [{"atoms": [[1, 0]], "weights": [1.0]}]},
    ],
)
def test_load_strategy_congestion_errors(small_congestion_game, definition):
    with pytest.raises(ConfigError):
        load_strategy(small_congestion_game, definition)


def test_load_strategy_player_count(coordination_game):
    with pytest.raises(ConfigError):
        load_strategy(coordination_game, {"strategies": [[[0.5, 0.5]]]})


def test_exit_codes():
    assert exit_code(ConfigError("x")) == EXIT_CONFIG
    assert exit_code(NotCoverable("x")) == EXIT_CONFIG
    assert exit_code(NoConvergence("x")) == EXIT_NUMERICAL
    assert exit_code(ValueError("x")) == EXIT_CONFIG


def test_sweep_grid_from_dict():
    """
    Arrange: Grid with list axes, a scalar axis and an integer seed count.
    Act: Build the grid and list its cells.
    Assert: Scalars become one-value axes and seeds expand to 0 .. seeds - 1.
    """
    grid = SweepGrid.from_dict({"T": [10, 20], "n": 2, "m": [2, 3], "seeds": 3})

    cells = grid.cells()

    assert grid.n == [2]
    assert grid.seed == [0, 1, 2]
    assert len(cells) == 2 * 1 * 2 * 1 * 3
    assert cells[0] == {"T": 10, "n": 2, "m": 2, "family": "potential_game", "seed": 0}


@pytest.mark.parametrize(
    "definition",
    [{"T": [10], "colour": "red"}, {"T": [10], "family": ["zero_sum"]}, ["T", 10]],
)
def test_sweep_grid_errors(definition):
    with pytest.raises(ConfigError):
        SweepGrid.from_dict(definition)


@pytest.mark.parametrize(
    "family, kind", [("potential_game", "normal_form"), ("markov_pg", "markov"), ("congestion_bandit", "congestion")]
)
def test_draw_game(family, kind):
    grid = SweepGrid(T=[5], n=[2], m=[3], family=[family], states=3)

    game = draw_game(grid.cells()[0], grid)

    assert game.kind == kind
    assert game.n == 2
    if isinstance(game, MarkovGame):
        assert game.S == 3


def test_draw_game_is_reproducible():
    grid = SweepGrid(T=[5], n=[2], m=[3])
    cell = grid.cells()[0]

    assert np.array_equal(draw_game(cell, grid).costs, draw_game(cell, grid).costs)


def test_run_sweep(tmp_path):
    """
    Arrange: One cell per family, T=20.
    Act: Run the sweep synchronously.
    Assert: Every cell succeeds, writes its log, and the summary lists them all.
    """
    grid = SweepGrid.from_dict(
        {
            "T": 20,
            "n": 2,
            "m": 2,
            "family": ["potential_game", "markov_pg", "congestion_semibandit", "congestion_bandit"],
        }
    )

    summary = run_sweep(grid, str(tmp_path))

    assert summary["status"].tolist() == ["ok"] * 4
    assert summary["nash_regret"].notna().all()
    assert (tmp_path / "sweep_summary.csv").is_file()
    assert all((tmp_path / f"cell_{k}.csv").is_file() for k in range(4))


def test_run_cell_records_failure(tmp_path):
    grid = SweepGrid(T=[5], n=[2], m=[2], family=["congestion_bandit"], learner="projected_sgd")

    record = run_cell(0, grid.cells()[0], grid, str(tmp_path))

    assert record["status"] == "failed"
    assert record["error"].startswith("ConfigError")
    assert np.isnan(record["slope"])


def test_run_sweep_empty_grid(tmp_path):
    with pytest.raises(ConfigError):
        run_sweep(SweepGrid(T=[], n=[2], m=[2]), str(tmp_path))


def test_preferred_facilities_and_occupancy():
    """
    Arrange: Default settings and every player on facility D in the safe state.
    Act: Compute the preferred facilities and the occupancy.
    Assert: C and D are preferred and all 8 players sit on D.
    """
    settings = ExperimentSettings.from_config()
    on_d = np.zeros((2, 4))
    on_d[:, 3] = 1.0

    occ = occupancy([on_d] * settings.n, settings)

    assert preferred_facilities(settings) == ["C", "D"]
    assert occ["safe"]["D"] == 8.0
    assert occ["distancing"]["A"] == 0.0


@pytest.mark.slow
def test_reproduce_experiment_short(tmp_path):
    summary = reproduce_experiment(out=str(tmp_path), seeds=1, iterations=2)

    assert (tmp_path / "fw_seed0.csv").is_file()
    assert (tmp_path / "sgd_seed0.csv").is_file()
    assert (tmp_path / "summary.json").is_file()
    assert summary["fw"]["t"] == [0, 1, 2]
    assert 0.0 <= summary["fw"]["safe_mass_preferred"] <= 1.0


@pytest.mark.slow
def test_reproduce_experiment_qualitative(tmp_path):
    """
    Arrange: Configured hyperparameters, T=150, 10 trajectories per update, 5 seeds.
    Act: Reproduce the experiment.
    Assert: Frank-Wolfe puts at least 0.9 of the safe-state mass on C and D split
        evenly, and its mean L1-to-final curve lies below SGD's from iteration 75 on.
    """
    summary = reproduce_experiment(out=str(tmp_path), jobs=2)

    fw, sgd = summary["fw"], summary["sgd"]
    safe = fw["occupancy"]["safe"]
    assert fw["safe_mass_preferred"] >= 0.9
    assert safe["C"] == pytest.approx(4.0, abs=0.5)
    assert safe["D"] == pytest.approx(4.0, abs=0.5)
    late = [k for k, t in enumerate(fw["t"]) if t >= 75]
    assert all(fw["l1_mean"][k] < sgd["l1_mean"][k] for k in late[:-1])
