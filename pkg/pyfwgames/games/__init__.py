"""
Game families, cost sampling and potential functions

.. currentmodule:: pyfwgames.games
"""

from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from ..utils import app_logger, config
from .base import check_enumerable, contract_profile, validate_joint_action
from .congestion import CongestionGame, random_congestion_game  # noqa: F401
from .experiment import ExperimentSettings, build_experiment_game  # noqa: F401
from .loaders import (  # noqa: F401
    BUILTIN_GAMES,
    Game,
    game_from_dict,
    game_to_dict,
    load_game,
)
from .markov import MarkovGame, Step, random_markov_game, sample_episode  # noqa: F401
from .noise import NoiseModel  # noqa: F401
from .normal_form import (  # noqa: F401
    NormalFormPotentialGame,
    path_integrated_potential,
    potential_residual,
    random_potential_game,
)

logger = app_logger.get_logger(__name__)


class PotentialReport(NamedTuple):
    """Outcome of :func:`verify_potential_property`.

    Attributes:
        max_residual (float): Largest |dc - dPhi| over players and deviations.
        per_player (np.ndarray): Largest residual of each player.
        passed (bool): Whether ``max_residual`` is within the potential tolerance.
    """

    max_residual: float
    per_player: np.ndarray
    passed: bool


def sample_facility_costs(
    game: CongestionGame, joint_action: Sequence[int], rng: np.random.Generator
) -> np.ndarray:
    """Realized per-resource costs each player observes under semi-bandit feedback.

    Returns:
        np.ndarray: Matrix (n, d); entry (i, e) is a draw around c(e, N_e(a)) when
        e is in a_i and 0 otherwise.
    """
    a = validate_joint_action(joint_action, game.action_counts)
    mean = game.mean_facility_costs(a)
    chosen = np.stack([game.action_sets[i][a[i]] for i in range(game.n)]) > 0
    return np.where(chosen, game.noise.sample(mean, rng), 0.0)


def sample_cost(
    game: Game,
    joint_action: Sequence[int],
    rng: np.random.Generator,
    state: Optional[int] = None,
) -> np.ndarray:
    """Draw one realized cost per player at a joint pure action.

    Congestion costs are sums of realized resource costs, so they lie in [0, k].

    Args:
        game (Game): Any game family.
        joint_action (Sequence[int]): One action index per player.
        rng (np.random.Generator): Caller owned generator.
        state (Optional[int]): Required for Markov games.

    Raises:
        InvalidAction: If the joint action does not index the game.

    Returns:
        np.ndarray: Realized per-player costs.
    """
    if isinstance(game, CongestionGame):
        return sample_facility_costs(game, joint_action, rng).sum(axis=1)
    if isinstance(game, MarkovGame):
        if state is None:
            raise ValueError("A state is needed to sample Markov game costs")
        return game.noise.sample(game.mean_cost(state, joint_action), rng)
    return game.noise.sample(game.mean_cost(joint_action), rng)


def rosenthal_potential(game: CongestionGame, joint_action: Sequence[int]) -> float:
    """Rosenthal potential sum_e sum_{l=1}^{N_e(a)} c(e, l) of a joint pure action."""
    return game.rosenthal_potential(joint_action)


def expected_potential(
    game: Union[NormalFormPotentialGame, CongestionGame],
    profile: Sequence[np.ndarray],
    cap: Optional[int] = None,
) -> float:
    """Exact E_{a ~ profile}[Phi(a)] by enumeration of joint pure actions.

    Args:
        game (Union[NormalFormPotentialGame, CongestionGame]): One-shot game.
        profile (Sequence[np.ndarray]): One probability vector per player over its
            pure actions.
        cap (Optional[int]): Enumeration cap, defaults to the configured one.

    Raises:
        EnumerationTooLarge: When the joint action count exceeds the cap.

    Returns:
        float: The expected potential.
    """
    check_enumerable(game.action_counts, cap)
    return float(contract_profile(game.potential_tensor(), profile))


def verify_potential_property(
    game: Union[NormalFormPotentialGame, CongestionGame, MarkovGame]
) -> PotentialReport:
    """Check that unilateral cost differences equal potential differences.

    Markov games are checked state by state against a path-integrated potential.

    Returns:
        PotentialReport: Residuals and the pass flag.
    """
    check_enumerable(game.action_counts)
    if isinstance(game, MarkovGame):
        per_player = np.zeros(game.n)
        for s in range(game.S):
            costs = game.costs[:, s]
            per_player = np.maximum(
                per_player, potential_residual(costs, path_integrated_potential(costs))
            )
    else:
        per_player = potential_residual(game.cost_tensor(), game.potential_tensor())
    worst = float(per_player.max())
    passed = worst <= config.tolerances["potential"]
    if not passed:
        logger.debug(f"Potential residual {worst:.3e} exceeds tolerance")
    return PotentialReport(worst, per_player, passed)
