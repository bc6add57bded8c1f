"""Exact oracles for Markov games with stopping

Every quantity here comes from S x S linear systems: a joint policy induces the
substochastic kernel M(s, s') = sum_a pi(a | s) (1 - kappa(s, a)) P(s' | s, a), and
values and occupancies solve (I - M) V = r and (I - M)^T d = mu0.

.. currentmodule:: pyfwgames.evaluation.markov
"""

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..games import MarkovGame
from ..games.base import contract_profile
from ..utils import app_logger, config
from ..utils.exceptions import NoConvergence, NumericalDivergence

logger = app_logger.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class ValueTable:
    """Per-player values V_i(s) and joint-action values Q_i(s, a).

    Attributes:
        V (np.ndarray): Shape (n, S).
        Q (np.ndarray): Shape (n, S, m_1, .., m_n).
        init_dist (np.ndarray): mu0, used by :attr:`at_init`.
    """

    V: np.ndarray
    Q: np.ndarray
    init_dist: np.ndarray

    @property
    def at_init(self) -> np.ndarray:
        """V_i(mu0) per player."""
        return self.V @ self.init_dist


@dataclass(frozen=True, eq=False)
class OccupancyMeasure:
    """Expected visits per state and the mismatch ratio max_s d(s) / mu0(s)."""

    d: np.ndarray
    mismatch: float

    @property
    def expected_length(self) -> float:
        """Expected number of steps per episode."""
        return float(self.d.sum())


class BestResponse(NamedTuple):
    """Best response of one player: V(mu0), deterministic policy and state values."""

    value: float
    policy: np.ndarray
    values: np.ndarray


def joint_policy(game: MarkovGame, policies: Sequence[np.ndarray]) -> np.ndarray:
    """Product policy pi(a | s) of shape (S, m_1, .., m_n)."""
    out = np.ones((game.S,) + game.action_counts)
    for i, p in enumerate(policies):
        shape = [game.S] + [1] * game.n
        shape[i + 1] = game.action_counts[i]
        out = out * np.asarray(p, dtype=float).reshape(shape)
    return out


def _kernel(game: MarkovGame, pi: np.ndarray) -> np.ndarray:
    flat_pi = pi.reshape(game.S, -1)
    flat_cont = game.continuation.reshape(game.S, -1, game.S)
    return np.einsum("sj,sjt->st", flat_pi, flat_cont)


def _solve(matrix: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    try:
        out = linalg.solve(matrix, rhs)
    except linalg.LinAlgError as err:
        raise NumericalDivergence(f"Singular system while computing {what}") from err
    if not np.all(np.isfinite(out)):
        raise NumericalDivergence(f"Non-finite solution while computing {what}")
    return out


def value_function(game: MarkovGame, policies: Sequence[np.ndarray]) -> ValueTable:
    """Exact V_i and Q_i of a joint policy.

    Args:
        game (MarkovGame): The game.
        policies (Sequence[np.ndarray]): Per-player tables (S, m_i).

    Raises:
        NumericalDivergence: If the value system is singular.

    Returns:
        ValueTable: Values and joint-action values.
    """
    pi = joint_policy(game, policies)
    kernel = _kernel(game, pi)
    flat_pi = pi.reshape(game.S, -1)
    rewards = np.einsum("sj,nsj->ns", flat_pi, game.costs.reshape(game.n, game.S, -1))
    V = _solve(np.eye(game.S) - kernel, rewards.T, "values").T
    Q = game.costs + np.einsum("s...t,nt->ns...", game.continuation, V)
    return ValueTable(V, Q, game.init_dist)


def occupancy_measure(game: MarkovGame, policies: Sequence[np.ndarray]) -> OccupancyMeasure:
    """Expected visits d(s) = E[sum_h 1{s_h = s}] from mu0.

    The mismatch ratio is infinite when mu0 has zeros.
    """
    kernel = _kernel(game, joint_policy(game, policies))
    d = _solve((np.eye(game.S) - kernel).T, game.init_dist, "occupancy")
    if np.all(game.init_dist > 0):
        mismatch = float(np.max(d / game.init_dist))
    else:
        mismatch = float("inf")
    return OccupancyMeasure(d, mismatch)


def marginal_q(
    game: MarkovGame, policies: Sequence[np.ndarray], values: ValueTable, i: int
) -> np.ndarray:
    """Q_i(s, a_i) with the other players' actions averaged out, shape (S, m_i)."""
    return np.stack(
        [
            contract_profile(values.Q[i, s], [np.asarray(p)[s] for p in policies], skip=i)
            for s in range(game.S)
        ]
    )


def exact_policy_gradient(
    game: MarkovGame, policies: Sequence[np.ndarray], i: int
) -> np.ndarray:
    """Gradient of V_i(mu0) in player i's table: g[s, a] = d(s) * Q_i(s, a)."""
    values = value_function(game, policies)
    occupancy = occupancy_measure(game, policies)
    return occupancy.d[:, None] * marginal_q(game, policies, values, i)


def induced_mdp(
    game: MarkovGame, policies: Sequence[np.ndarray], i: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Single-agent costs (S, m_i) and continuation kernel (S, m_i, S) for player i."""
    costs, kernel = [], []
    for s in range(game.S):
        rows = [np.asarray(p)[s] for p in policies]
        costs.append(contract_profile(game.costs[i, s], rows, skip=i))
        kernel.append(contract_profile(game.continuation[s], rows, skip=i))
    return np.stack(costs), np.stack(kernel)


def evaluate_deterministic(
    costs: np.ndarray, kernel: np.ndarray, actions: Sequence[int]
) -> np.ndarray:
    """State values of a deterministic policy in an induced single-agent MDP."""
    states = np.arange(costs.shape[0])
    actions = np.asarray(actions, dtype=int)
    return _solve(
        np.eye(costs.shape[0]) - kernel[states, actions], costs[states, actions], "values"
    )


def best_response_value(
    game: MarkovGame,
    policies: Sequence[np.ndarray],
    i: int,
    tol: Optional[float] = None,
    max_sweeps: Optional[int] = None,
) -> BestResponse:
    """Optimal value of player i against the others' fixed policies.

    Value iteration runs until successive sweeps differ by at most ``tol`` in sup
    norm; the greedy policy (lowest index on ties) is then evaluated exactly.

    Raises:
        NoConvergence: If the sweep cap is reached first.
    """
    tol = config.tolerances["value_iteration"] if tol is None else tol
    max_sweeps = config.tolerances["max_sweeps"] if max_sweeps is None else max_sweeps
    costs, kernel = induced_mdp(game, policies, i)
    V = np.zeros(game.S)
    for _ in range(int(max_sweeps)):
        updated = (costs + kernel @ V).min(axis=1)
        if np.max(np.abs(updated - V)) <= tol:
            V = updated
            break
        V = updated
    else:
        raise NoConvergence(f"Value iteration did not converge in {max_sweeps} sweeps")
    greedy = np.argmin(costs + kernel @ V, axis=1)
    values = evaluate_deterministic(costs, kernel, greedy)
    policy = np.eye(game.action_counts[i])[greedy]
    return BestResponse(float(values @ game.init_dist), policy, values)


def occupancy_ratio(other: np.ndarray, own: np.ndarray) -> Tuple[float, bool]:
    """max_s other(s) / own(s) over states ``own`` visits, with 0 / 0 read as 0.

    The flag is True when ``other`` visits a state that ``own`` never does.
    """
    visited = own > 0
    ratio = float(np.max(other[visited] / own[visited], initial=0.0))
    return ratio, bool(np.any(other[~visited] > 0))


def markov_player_gaps(
    game: MarkovGame, policies: Sequence[np.ndarray], fw_gap: Optional[float] = None
) -> Tuple[np.ndarray, np.ndarray, float]:
    """Per-player V_i(mu0), best-response gaps, and the best-response mismatch ratio.

    The mismatch is max_i max_s d^{BR_i, pi_-i}(s) / d^pi(s). States a best response
    reaches but pi never visits make it infinite unless ``fw_gap`` is given and zero,
    in which case they are left out.
    """
    values = value_function(game, policies)
    own = occupancy_measure(game, policies).d
    gaps = np.empty(game.n)
    mismatch, uncovered = 1.0, False
    for i in range(game.n):
        br = best_response_value(game, policies, i)
        gaps[i] = max(values.at_init[i] - br.value, 0.0)
        deviated = list(policies)
        deviated[i] = br.policy
        ratio, missed = occupancy_ratio(occupancy_measure(game, deviated).d, own)
        mismatch = max(mismatch, ratio)
        uncovered = uncovered or missed
    if uncovered and (fw_gap is None or fw_gap > 0):
        logger.debug("Best response reaches states the profile never visits")
        mismatch = np.inf
    return values.at_init, gaps, mismatch


def markov_nash_gap(game: MarkovGame, policies: Sequence[np.ndarray]) -> Tuple[float, np.ndarray]:
    """max_i V_i(pi)(mu0) - min over pi_i' of V_i(pi_i', pi_-i)(mu0), and all gaps."""
    _, gaps, _ = markov_player_gaps(game, policies)
    return float(gaps.max()), gaps


def markov_fw_gap(game: MarkovGame, policies: Sequence[np.ndarray]) -> float:
    """Frank-Wolfe gap of the joint policy under the exact policy gradient.

    The maximization over policy tables splits across players and states.
    """
    values = value_function(game, policies)
    d = occupancy_measure(game, policies).d
    total = 0.0
    for i, p in enumerate(policies):
        g = d[:, None] * marginal_q(game, policies, values, i)
        total += float(np.sum(np.asarray(p) * g) - np.sum(g.min(axis=1)))
    return max(total, 0.0)


def deterministic_policies(game: MarkovGame, i: int, cap: float = 1e4):
    """All deterministic stationary policies of player i as action tuples, or None
    when there are more than ``cap`` of them."""
    m = game.action_counts[i]
    if m ** game.S > cap:
        return None
    return list(product(range(m), repeat=game.S))
