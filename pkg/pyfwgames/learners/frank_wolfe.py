"""Stochastic Frank-Wolfe learners with exploration

Each step explores (mixes the iterate with a uniform or covering point), samples
feedback from the explored profile, forms a one-sample gradient estimate, blends it
into the recursive estimate and takes a Frank-Wolfe step towards the minimizing
vertex.

.. currentmodule:: pyfwgames.learners.frank_wolfe
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..estimators import (
    GradEstimate,
    RecursiveGrad,
    average_estimates,
    bandit_linear_estimate,
    importance_sampling_full,
    recursive_blend,
    reinforce_estimate,
    second_moment_matrix,
    semi_bandit_estimate,
)
from ..games import (
    CongestionGame,
    MarkovGame,
    sample_cost,
    sample_episode,
    sample_facility_costs,
)
from ..strategies import (
    PolytopePoint,
    caratheodory_decompose,
    covering_exploration_point,
    fw_update,
    linear_min_rows,
    linear_min_vertex,
    mix_polytope_exploration,
    mix_with_uniform,
    uniform,
)
from ..utils.exceptions import NumericalDivergence
from .schedules import Schedule

ENV_STREAM = 2**31 - 1


@dataclass(frozen=True, eq=False)
class LearnerState:
    """Everything a learner carries between iterations.

    Attributes:
        strategies (list): Per-player iterates: vectors (m_i,), tables (S, m_i) or
            :class:`~pyfwgames.strategies.PolytopePoint`.
        recursive (List[RecursiveGrad]): Per-player recursive estimates d^t.
        t (int): Index of the next iteration, starting at 1.
        player_rngs (List[np.random.Generator]): One action stream per player.
        env_rng (np.random.Generator): Stream for costs, initial states and dynamics.
        learning (Tuple[int, ...]): Players that update their strategies.
        covers (Optional[list]): Covering exploration points of congestion players.
        played (Optional[tuple]): Joint action (or last episode) of the last step.
        costs (Optional[np.ndarray]): Realized costs of the last step.
    """

    strategies: list
    recursive: List[RecursiveGrad]
    t: int
    player_rngs: List[np.random.Generator]
    env_rng: np.random.Generator
    learning: Tuple[int, ...]
    covers: Optional[list] = None
    played: Optional[tuple] = None
    costs: Optional[np.ndarray] = None


def player_streams(seed: int, n: int) -> Tuple[List[np.random.Generator], np.random.Generator]:
    """Per-player generators seeded by (seed, i) and the environment generator."""
    return (
        [np.random.default_rng([seed, i]) for i in range(n)],
        np.random.default_rng([seed, ENV_STREAM]),
    )


def init_state(game, seed: int, learning: Optional[Sequence[int]] = None) -> LearnerState:
    """Uniform iterates, zero recursive estimates and seeded streams.

    Congestion players start at the uniform mixture over their action set.
    """
    if isinstance(game, CongestionGame):
        strategies = [PolytopePoint.uniform(s) for s in game.action_sets]
        recursive = [RecursiveGrad.zeros(game.d) for _ in range(game.n)]
        covers = [covering_exploration_point(s) for s in game.action_sets]
    elif isinstance(game, MarkovGame):
        strategies = [uniform(m, game.S) for m in game.action_counts]
        recursive = [RecursiveGrad.zeros((game.S, m)) for m in game.action_counts]
        covers = None
    else:
        strategies = [uniform(m) for m in game.action_counts]
        recursive = [RecursiveGrad.zeros(m) for m in game.action_counts]
        covers = None
    player_rngs, env_rng = player_streams(seed, game.n)
    learning = tuple(range(game.n)) if learning is None else tuple(sorted(learning))
    return LearnerState(strategies, recursive, 1, player_rngs, env_rng, learning, covers)


def explore(state: LearnerState, game, mu: float) -> list:
    """Explored profile: learners mix with exploration, fixed players do not."""
    out = []
    for i, p in enumerate(state.strategies):
        if i not in state.learning:
            out.append(p)
        elif isinstance(p, PolytopePoint):
            out.append(mix_polytope_exploration(p, mu, state.covers[i]))
        else:
            out.append(mix_with_uniform(p, mu))
    return out


def check_finite(state: LearnerState) -> LearnerState:
    """Raise NumericalDivergence if any iterate or estimate holds NaN or inf."""
    for i, (p, rec) in enumerate(zip(state.strategies, state.recursive)):
        values = p.dense if isinstance(p, PolytopePoint) else p
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(rec.d))):
            raise NumericalDivergence(f"Player {i} diverged at iteration {state.t}")
    return state


def one_shot_estimates(
    state: LearnerState, game, explored: list
) -> Tuple[List[Optional[GradEstimate]], tuple, np.ndarray]:
    """Sample a joint action from the explored profile and importance-weight costs."""
    joint = tuple(
        int(rng.choice(len(p), p=p)) for p, rng in zip(explored, state.player_rngs)
    )
    costs = sample_cost(game, joint, state.env_rng)
    estimates = [
        importance_sampling_full(costs[i], joint[i], explored[i])
        if i in state.learning
        else None
        for i in range(game.n)
    ]
    return estimates, joint, costs


def markov_estimates(
    state: LearnerState,
    game: MarkovGame,
    explored: list,
    trajectories: int = 1,
    horizon_cap: Optional[int] = None,
) -> Tuple[List[Optional[GradEstimate]], tuple, np.ndarray]:
    """Average REINFORCE estimates over ``trajectories`` sampled episodes."""
    if trajectories < 1:
        raise ValueError("trajectories must be at least 1")
    episodes = [
        sample_episode(game, explored, state.player_rngs, state.env_rng, horizon_cap)
        for _ in range(trajectories)
    ]
    estimates = [
        average_estimates([reinforce_estimate(ep, explored[i], i) for ep in episodes])
        if i in state.learning
        else None
        for i in range(game.n)
    ]
    costs = np.mean([sum(step.costs for step in ep) for ep in episodes], axis=0)
    return estimates, tuple(episodes), costs


def _blend_and_step(
    state: LearnerState, estimates, eta: float, rho: float, vertex_fn, **changes
) -> LearnerState:
    strategies, recursive = list(state.strategies), list(state.recursive)
    for i in state.learning:
        recursive[i] = recursive_blend(recursive[i], estimates[i], rho)
        strategies[i] = fw_update(strategies[i], vertex_fn(i, recursive[i].d), eta)
    return check_finite(
        replace(state, strategies=strategies, recursive=recursive, t=state.t + 1, **changes)
    )


def fw_explore_step_pg(state: LearnerState, game, schedule: Schedule) -> LearnerState:
    """One iteration of Frank-Wolfe with exploration on a normal-form game."""
    eta, rho = schedule.eta(state.t), schedule.rho(state.t)
    explored = explore(state, game, schedule.mu)
    estimates, joint, costs = one_shot_estimates(state, game, explored)
    return _blend_and_step(
        state,
        estimates,
        eta,
        rho,
        lambda i, d: linear_min_vertex(d),
        played=joint,
        costs=costs,
    )


def fw_explore_step_mpg(
    state: LearnerState,
    game: MarkovGame,
    schedule: Schedule,
    trajectories: int = 1,
    horizon_cap: Optional[int] = None,
) -> LearnerState:
    """One iteration on a Markov game; the vertex is chosen state by state.

    Args:
        state (LearnerState): Current state holding policy tables.
        game (MarkovGame): The game.
        schedule (Schedule): Bound schedule.
        trajectories (int): Episodes averaged per update.
        horizon_cap (Optional[int]): Overrides the game's cap; 0 disables it.

    Returns:
        LearnerState: The next state; ``played`` holds the sampled episodes.
    """
    eta, rho = schedule.eta(state.t), schedule.rho(state.t)
    explored = explore(state, game, schedule.mu)
    estimates, episodes, costs = markov_estimates(
        state, game, explored, trajectories, horizon_cap
    )
    return _blend_and_step(
        state,
        estimates,
        eta,
        rho,
        lambda i, d: linear_min_rows(d),
        played=episodes,
        costs=costs,
    )


def fw_explore_step_congestion(
    state: LearnerState, game: CongestionGame, schedule: Schedule, feedback: str
) -> LearnerState:
    """One iteration on a congestion game with ``semi_bandit`` or ``bandit`` feedback.

    Each explored point is decomposed into at most d + 1 pure strategies, one is
    sampled, and the estimate uses per-resource costs (semi-bandit) or only the total
    cost through the pseudoinverse of the second moment (bandit).
    """
    if feedback not in ("semi_bandit", "bandit"):
        raise ValueError("feedback must be 'semi_bandit' or 'bandit'")
    eta, rho = schedule.eta(state.t), schedule.rho(state.t)
    explored = explore(state, game, schedule.mu)
    played = []
    for y, rng in zip(explored, state.player_rngs):
        atoms = caratheodory_decompose(y)
        pick = int(rng.choice(len(atoms), p=[w for _, w in atoms]))
        played.append(atoms[pick][0])
    joint = tuple(game.strategy_index(i, a) for i, a in enumerate(played))
    observed = sample_facility_costs(game, joint, state.env_rng)
    estimates: List[Optional[GradEstimate]] = [None] * game.n
    for i in state.learning:
        if feedback == "semi_bandit":
            estimates[i] = semi_bandit_estimate(
                observed[i], np.flatnonzero(played[i]), explored[i].dense
            )
        else:
            estimates[i] = bandit_linear_estimate(
                observed[i].sum(), played[i], second_moment_matrix(explored[i])
            )
    return _blend_and_step(
        state,
        estimates,
        eta,
        rho,
        lambda i, d: game.action_sets[i][linear_min_vertex(d, game.action_sets[i])],
        played=joint,
        costs=observed.sum(axis=1),
    )
