"""Recursive gradient blend

.. currentmodule:: pyfwgames.estimators.recursive
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .bandit import GradEstimate


@dataclass(frozen=True, eq=False)
class RecursiveGrad:
    """Running blend d^t of gradient estimates and the iteration it was last updated."""

    d: np.ndarray
    t_last: int = 0

    @classmethod
    def zeros(cls, shape: Union[int, Tuple[int, ...]]) -> "RecursiveGrad":
        """Zero initial blend d^0."""
        return cls(np.zeros(shape), 0)


def recursive_blend(prev: RecursiveGrad, est: GradEstimate, rho: float) -> RecursiveGrad:
    """Return (1 - rho) prev + rho est with t_last incremented."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    if prev.d.shape != est.values.shape:
        raise ValueError(
            f"Cannot blend an estimate of shape {est.values.shape} into {prev.d.shape}"
        )
    return RecursiveGrad((1.0 - rho) * prev.d + rho * est.values, prev.t_last + 1)
