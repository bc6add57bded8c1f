"""Projected stochastic gradient baseline

Uses the same explored sampling and one-sample estimators as the Frank-Wolfe learner
and replaces the linear minimization step by a Euclidean projection.

.. currentmodule:: pyfwgames.learners.sgd
"""

from dataclasses import replace
from typing import Optional

from ..games import MarkovGame
from ..strategies import PolytopePoint, simplex_projection
from .frank_wolfe import (
    LearnerState,
    check_finite,
    explore,
    markov_estimates,
    one_shot_estimates,
)


def projected_sgd_step(
    state: LearnerState,
    game,
    eta: float,
    mu: float = 0.0,
    trajectories: int = 1,
    horizon_cap: Optional[int] = None,
) -> LearnerState:
    """pi <- projection(pi - eta * g) for every learning player, rowwise for tables.

    Args:
        state (LearnerState): Current state with simplex or table iterates.
        game: Normal-form or Markov game.
        eta (float): Learning rate, nonnegative.
        mu (float): Exploration weight used for sampling.
        trajectories (int): Episodes averaged per update in Markov games.
        horizon_cap (Optional[int]): Episode length cap override.

    Returns:
        LearnerState: The next state.
    """
    if eta < 0:
        raise ValueError(f"eta must be nonnegative, got {eta}")
    if any(isinstance(p, PolytopePoint) for p in state.strategies):
        raise ValueError("Projected SGD needs simplex or policy table strategies")
    explored = explore(state, game, mu)
    if isinstance(game, MarkovGame):
        estimates, played, costs = markov_estimates(
            state, game, explored, trajectories, horizon_cap
        )
    else:
        estimates, played, costs = one_shot_estimates(state, game, explored)
    strategies = list(state.strategies)
    for i in state.learning:
        strategies[i] = simplex_projection(strategies[i] - eta * estimates[i].values)
    return check_finite(
        replace(state, strategies=strategies, t=state.t + 1, played=played, costs=costs)
    )
