"""Markov games with per state-action stopping probabilities

.. currentmodule:: pyfwgames.games.markov
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils import config
from .base import check_unit_interval, validate_joint_action
from .noise import NoiseModel


class Step(NamedTuple):
    """One step of an episode: the state, the joint action and realized costs."""

    state: int
    joint_action: Tuple[int, ...]
    costs: np.ndarray


@dataclass(frozen=True, eq=False)
class MarkovGame:
    """Tabular stochastic game that stops at (s, a) with probability kappa(s, a).

    Attributes:
        costs (np.ndarray): Mean costs of shape (n, S, m_1, .., m_n) in [0, 1].
        transitions (np.ndarray): P(s' | s, a) of shape (S, m_1, .., m_n, S).
        stop_prob (Union[float, np.ndarray]): kappa(s, a) in (0, 1], scalar or of shape
            (S, m_1, .., m_n).
        init_dist (np.ndarray): Initial state distribution mu0 of shape (S,).
        horizon_cap (Optional[int]): Maximum episode length used when sampling.
        noise (NoiseModel): Distribution of realized costs.
    """

    costs: np.ndarray
    transitions: np.ndarray
    stop_prob: Union[float, np.ndarray]
    init_dist: np.ndarray
    horizon_cap: Optional[int] = None
    noise: NoiseModel = field(default_factory=NoiseModel)

    kind = "markov"

    def __post_init__(self):
        tol = config.tolerances["simplex"]
        costs = np.asarray(self.costs, dtype=float)
        if costs.ndim < 3 or costs.shape[0] != costs.ndim - 2:
            raise ValueError("costs must have shape (n, S, m_1, .., m_n)")
        check_unit_interval(costs, "costs")
        S = costs.shape[1]
        joint_shape = costs.shape[1:]
        transitions = np.asarray(self.transitions, dtype=float)
        if transitions.shape != joint_shape + (S,):
            raise ValueError("transitions must have shape (S, m_1, .., m_n, S)")
        if np.any(transitions < 0) or np.max(np.abs(transitions.sum(axis=-1) - 1)) > tol:
            raise ValueError("every transition row must be a probability vector")
        stop = np.broadcast_to(np.asarray(self.stop_prob, dtype=float), joint_shape).copy()
        if np.any(stop <= 0) or np.any(stop > 1):
            raise ValueError("stop probabilities must lie in (0, 1]")
        init = np.asarray(self.init_dist, dtype=float)
        if init.shape != (S,) or np.any(init < 0) or abs(init.sum() - 1) > tol:
            raise ValueError("init_dist must be a probability vector over states")
        if self.horizon_cap is not None and int(self.horizon_cap) < 1:
            raise ValueError("horizon_cap must be a positive integer")
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "stop_prob", stop)
        object.__setattr__(self, "init_dist", init)

    @property
    def n(self) -> int:
        """Number of players."""
        return self.costs.shape[0]

    @property
    def S(self) -> int:
        """Number of states."""
        return self.costs.shape[1]

    @property
    def action_counts(self) -> Tuple[int, ...]:
        """Per-player action counts m_i."""
        return tuple(self.costs.shape[2:])

    @property
    def m(self) -> int:
        """Largest action count."""
        return max(self.action_counts)

    @property
    def kappa(self) -> float:
        """Smallest stopping probability."""
        return float(self.stop_prob.min())

    @cached_property
    def continuation(self) -> np.ndarray:
        """(1 - kappa(s, a)) P(s' | s, a), shape (S, m_1, .., m_n, S)."""
        return (1.0 - self.stop_prob)[..., None] * self.transitions

    def mean_cost(self, state: int, joint_action: Sequence[int]) -> np.ndarray:
        """Mean per-player costs c_i(s, a)."""
        a = validate_joint_action(joint_action, self.action_counts)
        return self.costs[(slice(None), int(state)) + a]

    def step(
        self, state: int, joint_action: Sequence[int], rng: np.random.Generator
    ) -> Tuple[np.ndarray, Optional[int]]:
        """Realize costs, then stop or transition.

        Returns:
            Tuple[np.ndarray, Optional[int]]: Sampled costs and the next state, or None
            when the episode stops at this step.
        """
        a = validate_joint_action(joint_action, self.action_counts)
        costs = self.noise.sample(self.costs[(slice(None), int(state)) + a], rng)
        if rng.random() < self.stop_prob[(int(state),) + a]:
            return costs, None
        nxt = int(rng.choice(self.S, p=self.transitions[(int(state),) + a]))
        return costs, nxt


def sample_episode(
    game: MarkovGame,
    policies: Sequence[np.ndarray],
    player_rngs: Sequence[np.random.Generator],
    env_rng: np.random.Generator,
    horizon_cap: Optional[int] = None,
) -> List[Step]:
    """Roll out one episode with every player sampling from its own policy table.

    Args:
        game (MarkovGame): The game.
        policies (Sequence[np.ndarray]): Per-player tables of shape (S, m_i).
        player_rngs (Sequence[np.random.Generator]): One action generator per player.
        env_rng (np.random.Generator): Generator for initial state, costs and dynamics.
        horizon_cap (Optional[int]): Overrides the game's cap when given; 0 disables it.

    Returns:
        List[Step]: The visited steps, including the step at which the game stopped.
    """
    cap = game.horizon_cap if horizon_cap is None else (horizon_cap or None)
    state = int(env_rng.choice(game.S, p=game.init_dist))
    steps = []
    while True:
        joint = tuple(
            int(rng.choice(len(p[state]), p=p[state]))
            for p, rng in zip(policies, player_rngs)
        )
        costs, nxt = game.step(state, joint, env_rng)
        steps.append(Step(state, joint, costs))
        if nxt is None or (cap is not None and len(steps) >= cap):
            return steps
        state = nxt


def random_markov_game(
    S: int,
    action_counts: Sequence[int],
    rng: np.random.Generator,
    kappa: float = 0.5,
    noise: Optional[NoiseModel] = None,
) -> MarkovGame:
    """Draw a Markov game whose per-state costs are exact potential games.

    Args:
        S (int): Number of states.
        action_counts (Sequence[int]): Per-player action counts.
        rng (np.random.Generator): Generator used for all draws.
        kappa (float): Constant stopping probability.
        noise (Optional[NoiseModel]): Cost noise. Defaults to bernoulli.

    Returns:
        MarkovGame: The drawn game, started uniformly over states.
    """
    shape = tuple(int(m) for m in action_counts)
    n = len(shape)
    costs = np.empty((n, S) + shape)
    for s in range(S):
        phi = rng.random(shape)
        for i in range(n):
            h = rng.random(shape[:i] + (1,) + shape[i + 1:])
            costs[i, s] = (phi + h) / 2.0
    transitions = rng.random((S,) + shape + (S,))
    transitions /= transitions.sum(axis=-1, keepdims=True)
    return MarkovGame(
        costs=costs,
        transitions=transitions,
        stop_prob=kappa,
        init_dist=np.full(S, 1.0 / S),
        noise=noise if noise is not None else NoiseModel("bernoulli"),
    )
