"""Congestion games over a finite resource set

.. currentmodule:: pyfwgames.games.congestion
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.exceptions import InvalidAction
from .base import check_enumerable, check_unit_interval, validate_joint_action
from .noise import NoiseModel


@dataclass(frozen=True, eq=False)
class CongestionGame:
    """Players choose k-subsets of d resources; a resource costs c(e, load).

    Attributes:
        action_sets (List[np.ndarray]): Per-player 0/1 matrices of shape (K_i, d), one
            row per pure strategy.
        facility_costs (np.ndarray): Matrix c(e, l) of shape (d, n + 1) in [0, 1]; the
            load-zero column is stored but never charged.
        noise (NoiseModel): Distribution of realized per-resource costs.
    """

    action_sets: List[np.ndarray]
    facility_costs: np.ndarray
    noise: NoiseModel = field(default_factory=NoiseModel)

    kind = "congestion"

    def __post_init__(self):
        sets = [np.asarray(a, dtype=float) for a in self.action_sets]
        facility_costs = np.asarray(self.facility_costs, dtype=float)
        n = len(sets)
        if n == 0:
            raise ValueError("A congestion game needs at least one player")
        if facility_costs.ndim != 2 or facility_costs.shape[1] != n + 1:
            raise ValueError("facility_costs must have shape (d, n + 1)")
        check_unit_interval(facility_costs, "facility_costs")
        d = facility_costs.shape[0]
        sizes = set()
        for i, s in enumerate(sets):
            if s.ndim != 2 or s.shape[1] != d or s.shape[0] == 0:
                raise ValueError(f"Action set of player {i} must have shape (K_i, {d})")
            if not np.all((s == 0) | (s == 1)):
                raise ValueError(f"Action set of player {i} must be 0/1 indicators")
            if len({tuple(row) for row in s}) != s.shape[0]:
                raise ValueError(f"Action set of player {i} repeats a strategy")
            if np.any(s.sum(axis=0) == 0):
                raise ValueError(
                    f"Strategies of player {i} do not cover every resource, so no "
                    "covering exploration point exists"
                )
            sizes.update(int(k) for k in s.sum(axis=1))
        if len(sizes) != 1:
            raise ValueError("Every pure strategy must use the same number k of resources")
        object.__setattr__(self, "action_sets", sets)
        object.__setattr__(self, "facility_costs", facility_costs)

    @property
    def n(self) -> int:
        """Number of players."""
        return len(self.action_sets)

    @property
    def d(self) -> int:
        """Number of resources."""
        return self.facility_costs.shape[0]

    @property
    def k(self) -> int:
        """Resources per pure strategy."""
        return int(self.action_sets[0][0].sum())

    @property
    def action_counts(self) -> Tuple[int, ...]:
        """Number of pure strategies per player."""
        return tuple(s.shape[0] for s in self.action_sets)

    @property
    def m(self) -> int:
        """Largest strategy count."""
        return max(self.action_counts)

    @cached_property
    def _index(self) -> List[Dict[tuple, int]]:
        return [{tuple(row): j for j, row in enumerate(s)} for s in self.action_sets]

    def strategy_index(self, player: int, indicator: np.ndarray) -> int:
        """Position of a resource indicator vector in a player's action set."""
        key = tuple(float(v) for v in np.asarray(indicator).round())
        try:
            return self._index[player][key]
        except KeyError:
            raise InvalidAction(
                f"{key} is not a strategy of player {player}"
            ) from None

    def loads(self, joint_action: Sequence[int]) -> np.ndarray:
        """Number of players on each resource, N_e(a)."""
        a = validate_joint_action(joint_action, self.action_counts)
        return sum(self.action_sets[i][a[i]] for i in range(self.n)).astype(int)

    def mean_facility_costs(self, joint_action: Sequence[int]) -> np.ndarray:
        """Matrix (n, d) of c(e, N_e(a)) on each player's chosen resources, 0 elsewhere."""
        a = validate_joint_action(joint_action, self.action_counts)
        load = self.loads(a)
        per_resource = self.facility_costs[np.arange(self.d), load]
        chosen = np.stack([self.action_sets[i][a[i]] for i in range(self.n)])
        return chosen * per_resource

    def mean_cost(self, joint_action: Sequence[int]) -> np.ndarray:
        """Mean per-player costs c_i(a) = sum over e in a_i of c(e, N_e(a))."""
        return self.mean_facility_costs(joint_action).sum(axis=1)

    @cached_property
    def _cumulative_costs(self) -> np.ndarray:
        cum = np.zeros_like(self.facility_costs)
        cum[:, 1:] = np.cumsum(self.facility_costs[:, 1:], axis=1)
        return cum

    def rosenthal_potential(self, joint_action: Sequence[int]) -> float:
        """Exact potential sum_e sum_{l=1}^{N_e(a)} c(e, l)."""
        load = self.loads(joint_action)
        return float(self._cumulative_costs[np.arange(self.d), load].sum())

    @cached_property
    def _load_tensor(self) -> np.ndarray:
        check_enumerable(self.action_counts)
        counts = self.action_counts
        load = np.zeros(counts + (self.d,))
        for i, s in enumerate(self.action_sets):
            shape = [1] * self.n + [self.d]
            shape[i] = counts[i]
            load = load + s.reshape(shape)
        return load.astype(int)

    def cost_tensor(self) -> np.ndarray:
        """Mean costs indexed [player, a_1, .., a_n] by enumeration."""
        load = self._load_tensor
        per_resource = self.facility_costs[np.arange(self.d), load]
        out = np.empty((self.n,) + self.action_counts)
        for i, s in enumerate(self.action_sets):
            shape = [1] * self.n + [self.d]
            shape[i] = self.action_counts[i]
            out[i] = (s.reshape(shape) * per_resource).sum(axis=-1)
        return out

    def potential_tensor(self) -> np.ndarray:
        """Rosenthal potential indexed [a_1, .., a_n] by enumeration."""
        load = self._load_tensor
        return self._cumulative_costs[np.arange(self.d), load].sum(axis=-1)


def random_congestion_game(
    n: int,
    d: int,
    k: int,
    rng: np.random.Generator,
    noise: Optional[NoiseModel] = None,
    strategies_per_player: Optional[int] = None,
) -> CongestionGame:
    """Draw a congestion game with nondecreasing facility costs.

    Each player's action set always contains a collection of k-subsets covering all
    resources, topped up with random distinct k-subsets.

    Args:
        n (int): Number of players.
        d (int): Number of resources.
        k (int): Resources per strategy, 1 <= k <= d.
        rng (np.random.Generator): Generator used for all draws.
        noise (Optional[NoiseModel]): Cost noise. Defaults to bernoulli.
        strategies_per_player (Optional[int]): Target action set size.

    Returns:
        CongestionGame: The drawn game.
    """
    if not 1 <= k <= d:
        raise ValueError("k must satisfy 1 <= k <= d")
    costs = np.sort(rng.random((d, n + 1)), axis=1)
    sets = []
    for _ in range(n):
        rows = set()
        order = rng.permutation(d)
        # windows over a random resource order cover every resource
        for start in range(0, d, k):
            window = [order[(start + j) % d] for j in range(k)]
            rows.add(tuple(int(e in window) for e in range(d)))
        target = max(len(rows), strategies_per_player or len(rows) + 1)
        attempts = 0
        while len(rows) < target and attempts < 50 * target:
            pick = rng.choice(d, size=k, replace=False)
            rows.add(tuple(int(e in pick) for e in range(d)))
            attempts += 1
        sets.append(np.array(sorted(rows), dtype=float))
    return CongestionGame(
        action_sets=sets,
        facility_costs=costs,
        noise=noise if noise is not None else NoiseModel("bernoulli"),
    )
