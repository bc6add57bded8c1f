#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: conftest

Test fixtures
"""

import json
from pathlib import Path

import numpy as np
import pytest
from pyfwgames.games import (
    CongestionGame,
    MarkovGame,
    NoiseModel,
    NormalFormPotentialGame,
    game_to_dict,
    random_congestion_game,
    random_markov_game,
    random_potential_game,
)


@pytest.fixture
def script_loc(request):
    return Path(request.fspath).parent


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def coordination_game():
    """2x2 identical-interest game; (0, 0) is the cheap equilibrium."""
    table = np.array([[0.1, 0.6], [0.6, 0.4]])
    return NormalFormPotentialGame(
        costs=np.stack([table, table]),
        potential=table,
        noise=NoiseModel("deterministic"),
    )


@pytest.fixture
def potential_game_3x3():
    return random_potential_game(
        2, [3, 3], np.random.default_rng(7), noise=NoiseModel("bernoulli")
    )


@pytest.fixture
def small_congestion_game():
    """Two players, two resources, one resource per strategy."""
    return CongestionGame(
        action_sets=[np.eye(2), np.eye(2)],
        facility_costs=np.array([[0.0, 0.3, 0.5], [0.0, 0.2, 0.9]]),
        noise=NoiseModel("deterministic"),
    )


@pytest.fixture
def random_congestion():
    return random_congestion_game(3, 4, 2, np.random.default_rng(3))


@pytest.fixture
def two_state_markov_game():
    """2 states, 2 players, 2 actions, stopping probability 0.5."""
    return random_markov_game(2, [2, 2], np.random.default_rng(11), kappa=0.5)


@pytest.fixture
def one_state_markov_game():
    """Single state game with constant cost 0.4 and stopping probability 0.25."""
    return MarkovGame(
        costs=np.full((1, 1, 2), 0.4),
        transitions=np.ones((1, 2, 1)),
        stop_prob=0.25,
        init_dist=np.ones(1),
        noise=NoiseModel("deterministic"),
    )


@pytest.fixture
def write_game(tmp_path):
    """Write a game to a JSON file and return its path."""

    def _write(game, name="game.json"):
        path = tmp_path / name
        with open(path, "w") as w:
            json.dump(game_to_dict(game), w)
        return path

    return _write


@pytest.fixture
def write_json(tmp_path):
    """Write any mapping to a JSON file and return its path."""

    def _write(obj, name):
        path = tmp_path / name
        with open(path, "w") as w:
            json.dump(obj, w)
        return path

    return _write
