"""
Exact evaluation oracles

.. currentmodule:: pyfwgames.evaluation
"""

from typing import NamedTuple, Sequence, Tuple

import numpy as np

from ..games import MarkovGame
from . import one_shot
from .fractional import (  # noqa: F401
    as_marginals,
    fractional_potential,
    grad_fractional_potential,
    poisson_binomial_pmf,
)
from .markov import (  # noqa: F401
    BestResponse,
    OccupancyMeasure,
    ValueTable,
    best_response_value,
    exact_policy_gradient,
    joint_policy,
    markov_fw_gap,
    markov_nash_gap,
    markov_player_gaps,
    occupancy_ratio,
    occupancy_measure,
    value_function,
)
from .one_shot import estimate_smoothness, grad_potential  # noqa: F401
from .regret import RegretTracker, regret_accumulators  # noqa: F401


class ProfileMetrics(NamedTuple):
    """Exact metrics of one profile.

    Attributes:
        nash_gap (float): Largest unilateral improvement.
        fw_gap (float): Frank-Wolfe gap.
        mismatch (float): Best-response occupancy ratio, 1 for one-shot games.
        costs (np.ndarray): Expected cost (value at mu0) per player.
        player_gaps (np.ndarray): Improvement available to each player.
    """

    nash_gap: float
    fw_gap: float
    mismatch: float
    costs: np.ndarray
    player_gaps: np.ndarray


def evaluate_profile(game, profile: Sequence) -> ProfileMetrics:
    """Compute gaps and costs of a profile of any game family."""
    if isinstance(game, MarkovGame):
        fw = markov_fw_gap(game, profile)
        costs, gaps, mismatch = markov_player_gaps(game, profile, fw_gap=fw)
        return ProfileMetrics(float(gaps.max()), fw, mismatch, costs, gaps)
    costs, gaps = one_shot.player_gaps(game, profile)
    return ProfileMetrics(float(gaps.max()), float(gaps.sum()), 1.0, costs, gaps)


def expected_cost(game, profile: Sequence, i: int) -> float:
    """Expected cost of player i; V_i(mu0) for Markov games."""
    if isinstance(game, MarkovGame):
        return float(value_function(game, profile).at_init[i])
    return one_shot.expected_cost(game, profile, i)


def nash_gap(game, profile: Sequence) -> Tuple[float, np.ndarray]:
    """Largest unilateral improvement and the per-player improvements."""
    if isinstance(game, MarkovGame):
        return markov_nash_gap(game, profile)
    return one_shot.nash_gap(game, profile)


def fw_gap(game, profile: Sequence) -> float:
    """Frank-Wolfe gap of a profile."""
    if isinstance(game, MarkovGame):
        return markov_fw_gap(game, profile)
    return one_shot.fw_gap(game, profile)
