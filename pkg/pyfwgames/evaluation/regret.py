"""Cumulative Nash regret and individual regret

.. currentmodule:: pyfwgames.evaluation.regret
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..games import CongestionGame, MarkovGame
from ..strategies import PolytopePoint
from ..utils import app_logger
from .markov import (
    deterministic_policies,
    evaluate_deterministic,
    induced_mdp,
    markov_nash_gap,
    value_function,
)
from .one_shot import grad_potential, nash_gap

logger = app_logger.get_logger(__name__)


class RegretTracker:
    """Running sums behind Nash regret and individual regret.

    Individual regret of player i is its cumulative expected cost minus that of the
    best fixed pure strategy in hindsight; in Markov games the comparators are the
    deterministic stationary policies, skipped (NaN) when there are more than 1e4.
    """

    def __init__(self, game) -> None:
        self.game = game
        self.nash_regret = 0.0
        self._own = np.zeros(game.n)
        self._alt: List[Optional[np.ndarray]] = [None] * game.n
        self._candidates = None
        self._skipped = set()
        if isinstance(game, MarkovGame):
            self._candidates = [deterministic_policies(game, i) for i in range(game.n)]
            for i, c in enumerate(self._candidates):
                if c is None:
                    self._skipped.add(i)
                    logger.warning(
                        f"Player {i} has more than 1e4 deterministic policies; "
                        "individual regret left as NaN"
                    )

    def _comparators(self, profile, i: int) -> Tuple[float, Optional[np.ndarray]]:
        game = self.game
        if isinstance(game, MarkovGame):
            own = float(value_function(game, profile).at_init[i])
            if self._candidates[i] is None:
                return own, None
            costs, kernel = induced_mdp(game, profile, i)
            alt = np.array(
                [
                    evaluate_deterministic(costs, kernel, actions) @ game.init_dist
                    for actions in self._candidates[i]
                ]
            )
            return own, alt
        g = grad_potential(game, profile, i)
        if isinstance(profile[i], PolytopePoint):
            return float(profile[i].dense @ g), game.action_sets[i] @ g
        return float(np.asarray(profile[i]) @ g), g

    def update(self, profile, weight: float = 1.0, gap: Optional[float] = None) -> None:
        """Add one played profile standing for ``weight`` iterations.

        Args:
            profile: Played profile.
            weight (float): Iterations this profile stands for.
            gap (Optional[float]): Its Nash gap, computed here when omitted.
        """
        if gap is None:
            gap_fn = markov_nash_gap if isinstance(self.game, MarkovGame) else nash_gap
            gap = gap_fn(self.game, profile)[0]
        self.nash_regret += weight * gap
        for i in range(self.game.n):
            own, alt = self._comparators(profile, i)
            self._own[i] += weight * own
            if alt is None:
                continue
            if self._alt[i] is None:
                self._alt[i] = np.zeros_like(alt)
            self._alt[i] = self._alt[i] + weight * alt

    @property
    def individual_regret(self) -> np.ndarray:
        """Current individual regret per player."""
        out = np.zeros(self.game.n)
        for i, (own, alt) in enumerate(zip(self._own, self._alt)):
            if i in self._skipped:
                out[i] = np.nan
            elif alt is not None:
                out[i] = own - float(alt.min())
        return out


def regret_accumulators(
    game, profiles: Sequence[Sequence], weights: Optional[Sequence[float]] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Cumulative Nash regret and per-player individual regret along a profile sequence.

    Args:
        game: Any game family.
        profiles (Sequence[Sequence]): The played profiles, one per evaluated iterate.
        weights (Optional[Sequence[float]]): Iterations each profile stands for.
            Defaults to 1 each.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Nash regret of shape (T,) and individual regret
        of shape (n, T).
    """
    weights = np.ones(len(profiles)) if weights is None else np.asarray(weights, float)
    if weights.shape != (len(profiles),):
        raise ValueError("Need one weight per profile")
    tracker = RegretTracker(game)
    nash = np.zeros(len(profiles))
    individual = np.zeros((game.n, len(profiles)))
    for t, (profile, w) in enumerate(zip(profiles, weights)):
        tracker.update(profile, w)
        nash[t] = tracker.nash_regret
        individual[:, t] = tracker.individual_regret
    return nash, individual
