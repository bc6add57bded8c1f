"""
Strategy spaces: simplex vectors, policy tables and polytope points

.. currentmodule:: pyfwgames.strategies
"""

from typing import Union

import numpy as np

from .polytope import (  # noqa: F401
    PolytopePoint,
    caratheodory_decompose,
    covering_exploration_point,
    exploration_coefficient,
    fw_update_point,
    mix_points,
    mix_polytope_exploration,
    prune_atoms,
    strategy_distribution,
)
from .simplex import fw_update as fw_update_simplex
from .simplex import (  # noqa: F401
    is_simplex,
    l1_distance,
    linear_min_rows,
    linear_min_vertex,
    mix_with_uniform,
    one_hot,
    renormalize,
    simplex_projection,
    uniform,
)

Strategy = Union[np.ndarray, PolytopePoint]


def fw_update(current: Strategy, vertex, eta: float) -> Strategy:
    """Frank-Wolfe step on a simplex vector, a policy table or a polytope point.

    Args:
        current (Strategy): The iterate.
        vertex: Action index or per-state indices for simplex iterates; a 0/1 resource
            indicator for polytope points.
        eta (float): Step size in [0, 1].

    Returns:
        Strategy: Same type as ``current``.
    """
    if isinstance(current, PolytopePoint):
        return fw_update_point(current, vertex, eta)
    return fw_update_simplex(current, vertex, eta)
