"""Exact oracles for one-shot games

A profile is a list with one entry per player: a probability vector over pure actions,
or for congestion games either such a vector over the player's strategies or a
:class:`~pyfwgames.strategies.PolytopePoint`. Points are evaluated through the
Poisson-binomial load laws; vectors by enumeration of joint actions.

.. currentmodule:: pyfwgames.evaluation.one_shot
"""

from typing import Sequence, Tuple, Union

import numpy as np

from ..games import CongestionGame, NormalFormPotentialGame, check_enumerable
from ..games.base import contract_profile
from ..strategies import PolytopePoint
from .fractional import grad_fractional_potential

OneShotGame = Union[NormalFormPotentialGame, CongestionGame]


def _factored(game: OneShotGame, profile: Sequence) -> bool:
    return isinstance(game, CongestionGame) and all(
        isinstance(p, PolytopePoint) for p in profile
    )


def _strategy_vector(p) -> np.ndarray:
    return p.dense if isinstance(p, PolytopePoint) else np.asarray(p, dtype=float)


def grad_potential(game: OneShotGame, profile: Sequence, i: int) -> np.ndarray:
    """Gradient of player i's expected cost in its own strategy.

    For probability vectors this is a_i -> c_i(a_i, pi_-i). For polytope points it is
    the per-resource expected cost E[c(e, 1 + N_e^{-i})].

    Raises:
        EnumerationTooLarge: If the enumeration path exceeds the cap.
    """
    if _factored(game, profile):
        return grad_fractional_potential(game, profile, i)
    check_enumerable(game.action_counts)
    return contract_profile(game.cost_tensor()[i], profile, skip=i)


def expected_cost(game: OneShotGame, profile: Sequence, i: int) -> float:
    """Exact expected cost c_i(pi) = <pi_i, grad_i>."""
    return float(_strategy_vector(profile[i]) @ grad_potential(game, profile, i))


def _best_vertex_value(game: OneShotGame, grad: np.ndarray, i: int, factored: bool) -> float:
    if factored:
        return float(np.min(game.action_sets[i] @ grad))
    return float(np.min(grad))


def player_gaps(game: OneShotGame, profile: Sequence) -> Tuple[np.ndarray, np.ndarray]:
    """Per-player expected costs and best-response improvements."""
    factored = _factored(game, profile)
    costs, gaps = np.empty(game.n), np.empty(game.n)
    for i in range(game.n):
        grad = grad_potential(game, profile, i)
        costs[i] = _strategy_vector(profile[i]) @ grad
        gaps[i] = max(costs[i] - _best_vertex_value(game, grad, i, factored), 0.0)
    return costs, gaps


def nash_gap(game: OneShotGame, profile: Sequence) -> Tuple[float, np.ndarray]:
    """Largest unilateral improvement c_i(pi) - min_a c_i(a, pi_-i), and all of them."""
    _, gaps = player_gaps(game, profile)
    return float(gaps.max()), gaps


def fw_gap(game: OneShotGame, profile: Sequence) -> float:
    """Frank-Wolfe gap max_pi' <pi - pi', grad Phi(pi)>, which splits over players."""
    _, gaps = player_gaps(game, profile)
    return float(gaps.sum())


def _random_profile(game: OneShotGame, rng: np.random.Generator) -> list:
    return [rng.dirichlet(np.ones(m)) for m in game.action_counts]


def estimate_smoothness(
    game: OneShotGame, rng: np.random.Generator, pairs: int = 50
) -> float:
    """Largest ratio |grad Phi(pi) - grad Phi(pi')| / |pi - pi'| over random pairs.

    A numerical stand-in for the smoothness constant; a lower estimate, never a bound.
    """
    best = 0.0
    for _ in range(pairs):
        a = _random_profile(game, rng)
        b = _random_profile(game, rng)
        ga = np.concatenate([grad_potential(game, a, i) for i in range(game.n)])
        gb = np.concatenate([grad_potential(game, b, i) for i in range(game.n)])
        dist = np.linalg.norm(np.concatenate(a) - np.concatenate(b))
        if dist > 0:
            best = max(best, float(np.linalg.norm(ga - gb) / dist))
    return best
