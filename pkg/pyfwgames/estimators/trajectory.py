"""Score-function gradient estimate from sampled episodes

.. currentmodule:: pyfwgames.estimators.trajectory
"""

from typing import Sequence

import numpy as np

from ..games import Step
from ..utils.exceptions import DivisionByZeroProb
from .bandit import GradEstimate


def reinforce_estimate(
    trajectory: Sequence[Step], policy: np.ndarray, player: int
) -> GradEstimate:
    """Episode cost times the direct-parametrization score of one player's policy.

    The score of the table is g[s, a] = sum over steps of
    1{s_h = s, a_h = a} / policy[s, a], and the estimate is (sum_h C_h) * g.

    Args:
        trajectory (Sequence[Step]): Visited steps with realized per-player costs.
        policy (np.ndarray): The player's sampling policy (S, m).
        player (int): Player index into joint actions and costs.

    Raises:
        DivisionByZeroProb: If a visited (state, action) pair had zero probability.

    Returns:
        GradEstimate: Table estimate of shape (S, m).
    """
    policy = np.asarray(policy, dtype=float)
    score = np.zeros_like(policy)
    total = 0.0
    for step in trajectory:
        a = step.joint_action[player]
        prob = policy[step.state, a]
        if prob <= 0:
            raise DivisionByZeroProb(
                f"Action {a} in state {step.state} was played with probability {prob}"
            )
        score[step.state, a] += 1.0 / prob
        total += float(step.costs[player])
    return GradEstimate(total * score, "reinforce")


def average_estimates(estimates: Sequence[GradEstimate]) -> GradEstimate:
    """Mean of several estimates of the same kind."""
    if not estimates:
        raise ValueError("Nothing to average")
    values = np.mean([e.values for e in estimates], axis=0)
    return GradEstimate(values, estimates[0].kind)
