"""Normal-form potential games

.. currentmodule:: pyfwgames.games.normal_form
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np

from .base import check_unit_interval, validate_joint_action
from .noise import NoiseModel


def path_integrated_potential(costs: np.ndarray) -> np.ndarray:
    """Reconstruct a potential from player costs by telescoping from the all-zero profile.

    Phi(a) is the sum over players i of c_i(a_1..a_i, 0, ..) - c_i(a_1..a_{i-1}, 0, ..),
    i.e. the cost changes met while switching players one at a time from action 0 to
    a_i in index order. For an exact potential game this equals the potential up to a
    constant; for other games the residual of :func:`potential_residual` exposes it.

    Args:
        costs (np.ndarray): Array of shape (n, m_1, .., m_n).

    Returns:
        np.ndarray: Potential table of shape (m_1, .., m_n) with Phi(0, .., 0) = 0.
    """
    n = costs.shape[0]
    shape = costs.shape[1:]
    idx = np.indices(shape)
    zeros = np.zeros(shape, dtype=int)
    phi = np.zeros(shape)
    for i in range(n):
        upto = tuple(idx[j] if j <= i else zeros for j in range(n))
        before = tuple(idx[j] if j < i else zeros for j in range(n))
        phi += costs[i][upto] - costs[i][before]
    return phi


def potential_residual(costs: np.ndarray, potential: np.ndarray) -> np.ndarray:
    """Per-player max |(c_i(a_i, a_-i) - c_i(a_i', a_-i)) - (Phi(a_i, ..) - Phi(a_i', ..))|.

    The deviation difference vanishes for all pairs iff c_i - Phi does not depend on
    a_i, so the worst pair is the spread of c_i - Phi along player i's axis.
    """
    return np.array(
        [
            float(np.max(np.ptp(costs[i] - potential, axis=i))) if costs[i].size else 0.0
            for i in range(costs.shape[0])
        ]
    )


@dataclass(frozen=True, eq=False)
class NormalFormPotentialGame:
    """A finite game whose per-player costs admit an exact potential.

    Attributes:
        costs (np.ndarray): Array of shape (n, m_1, .., m_n) with entries in [0, 1].
        potential (Optional[np.ndarray]): Explicit potential of shape (m_1, .., m_n);
            reconstructed by path integration when omitted.
        noise (NoiseModel): Distribution of realized costs.
    """

    costs: np.ndarray
    potential: Optional[np.ndarray] = None
    noise: NoiseModel = field(default_factory=NoiseModel)

    kind = "normal_form"

    def __post_init__(self):
        costs = np.asarray(self.costs, dtype=float)
        if costs.ndim < 2 or costs.shape[0] != costs.ndim - 1:
            raise ValueError(
                "costs must have shape (n, m_1, .., m_n) with one axis per player"
            )
        check_unit_interval(costs, "costs")
        object.__setattr__(self, "costs", costs)
        if self.potential is not None:
            potential = np.asarray(self.potential, dtype=float)
            if potential.shape != costs.shape[1:]:
                raise ValueError("potential must have shape (m_1, .., m_n)")
            object.__setattr__(self, "potential", potential)

    @property
    def n(self) -> int:
        """Number of players."""
        return self.costs.shape[0]

    @property
    def action_counts(self) -> Tuple[int, ...]:
        """Per-player action counts m_i."""
        return tuple(self.costs.shape[1:])

    @property
    def m(self) -> int:
        """Largest action count."""
        return max(self.action_counts)

    def cost_tensor(self) -> np.ndarray:
        """Mean costs indexed [player, a_1, .., a_n]."""
        return self.costs

    @cached_property
    def potential_table(self) -> np.ndarray:
        """The stored potential, or its path-integrated reconstruction."""
        if self.potential is not None:
            return self.potential
        return path_integrated_potential(self.costs)

    def potential_tensor(self) -> np.ndarray:
        """Potential indexed [a_1, .., a_n]."""
        return self.potential_table

    def mean_cost(self, joint_action: Sequence[int]) -> np.ndarray:
        """Mean per-player costs at a joint pure action."""
        a = validate_joint_action(joint_action, self.action_counts)
        return self.costs[(slice(None),) + a]


def random_potential_game(
    n: int,
    action_counts: Sequence[int],
    rng: np.random.Generator,
    noise: Optional[NoiseModel] = None,
) -> NormalFormPotentialGame:
    """Draw an exact potential game with costs in [0, 1].

    Costs are c_i(a) = (Phi(a) + h_i(a_-i)) / 2 with Phi and each h_i uniform on [0, 1],
    so Phi / 2 is an exact potential.

    Args:
        n (int): Number of players.
        action_counts (Sequence[int]): Per-player action counts.
        rng (np.random.Generator): Generator used for all draws.
        noise (Optional[NoiseModel]): Cost noise. Defaults to bernoulli.

    Returns:
        NormalFormPotentialGame: Game with the explicit potential attached.
    """
    shape = tuple(int(m) for m in action_counts)
    if len(shape) != n:
        raise ValueError("action_counts must list one count per player")
    phi = rng.random(shape)
    costs = np.empty((n,) + shape)
    for i in range(n):
        h = rng.random(shape[:i] + (1,) + shape[i + 1:])
        costs[i] = (phi + h) / 2.0
    return NormalFormPotentialGame(
        costs=costs,
        potential=phi / 2.0,
        noise=noise if noise is not None else NoiseModel("bernoulli"),
    )
