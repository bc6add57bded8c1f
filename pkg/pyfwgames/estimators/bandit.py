"""One-sample gradient estimators from bandit and semi-bandit feedback

.. currentmodule:: pyfwgames.estimators.bandit
"""

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy import linalg

from ..strategies import PolytopePoint
from ..utils import config
from ..utils.exceptions import (
    DegenerateDistribution,
    DivisionByZeroProb,
    EstimatorInconsistent,
)

ESTIMATOR_KINDS = ("full_bandit_simplex", "semi_bandit", "bandit_linear", "reinforce")


@dataclass(frozen=True, eq=False)
class GradEstimate:
    """An estimated gradient in the shape of the strategy it refers to.

    Attributes:
        values (np.ndarray): Vector (m,) for simplex strategies, (d,) for polytope
            points, (S, m) for policy tables.
        kind (str): Estimator that produced it.
    """

    values: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in ESTIMATOR_KINDS:
            raise ValueError(f"Unknown estimator kind {self.kind!r}")
        values = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise ValueError("Gradient estimate is not finite")
        object.__setattr__(self, "values", values)


def importance_sampling_full(cost: float, played: int, mixed: np.ndarray) -> GradEstimate:
    """Estimate C * 1{a = played} / mixed[played] of the cost gradient.

    Raises:
        DivisionByZeroProb: If the played action had zero probability.
    """
    mixed = np.asarray(mixed, dtype=float)
    prob = mixed[played]
    if prob <= 0:
        raise DivisionByZeroProb(f"Action {played} was played with probability {prob}")
    values = np.zeros_like(mixed)
    values[played] = cost / prob
    return GradEstimate(values, "full_bandit_simplex")


def semi_bandit_estimate(
    facility_costs: np.ndarray, played: Iterable[int], y_dense: np.ndarray
) -> GradEstimate:
    """Per-resource reweighting of observed costs by the sampling marginals.

    Args:
        facility_costs (np.ndarray): Observed cost per resource (length d); entries off
            the played set are ignored.
        played (Iterable[int]): Resources in the played strategy.
        y_dense (np.ndarray): Marginals of the explored point.

    Raises:
        DivisionByZeroProb: If a played resource has zero marginal.
    """
    y_dense = np.asarray(y_dense, dtype=float)
    facility_costs = np.asarray(facility_costs, dtype=float)
    values = np.zeros_like(y_dense)
    for e in played:
        if y_dense[e] <= 0:
            raise DivisionByZeroProb(f"Resource {e} was used with marginal {y_dense[e]}")
        values[e] = facility_costs[e] / y_dense[e]
    return GradEstimate(values, "semi_bandit")


@dataclass(frozen=True, eq=False)
class SecondMomentMatrix:
    """Second moment E[a a^T] of a sampling distribution with its pseudoinverse.

    Attributes:
        sigma (np.ndarray): Symmetric PSD matrix (d, d).
        pinv (np.ndarray): Pseudoinverse on the retained eigenspace.
        projector (np.ndarray): Orthogonal projector onto the row space of sigma.
        rank_tol (float): Relative eigenvalue cutoff.
    """

    sigma: np.ndarray
    pinv: np.ndarray
    projector: np.ndarray
    rank_tol: float

    @property
    def rank(self) -> int:
        """Dimension of the retained eigenspace."""
        return int(round(np.trace(self.projector)))


def second_moment_matrix(
    point: PolytopePoint, rank_tol: Optional[float] = None
) -> SecondMomentMatrix:
    """Exact second moment of the atoms of ``point`` and its eigh pseudoinverse.

    Raises:
        DegenerateDistribution: If the matrix is zero.
    """
    rank_tol = config.tolerances["rank"] if rank_tol is None else rank_tol
    sigma = (point.atoms.T * point.weights) @ point.atoms
    sigma = (sigma + sigma.T) / 2.0
    eigval, eigvec = linalg.eigh(sigma)
    top = eigval.max()
    if top <= 0:
        raise DegenerateDistribution("Second moment matrix is zero")
    keep = eigval > rank_tol * top
    basis = eigvec[:, keep]
    pinv = (basis / eigval[keep]) @ basis.T
    return SecondMomentMatrix(sigma, pinv, basis @ basis.T, rank_tol)


def bandit_linear_estimate(
    total_cost: float, played: np.ndarray, mat: SecondMomentMatrix
) -> GradEstimate:
    """Linear bandit estimate C * pinv(Sigma) a from a total cost.

    Raises:
        EstimatorInconsistent: If ``played`` leaves the row space of Sigma.
    """
    played = np.asarray(played, dtype=float)
    off = np.linalg.norm(played - mat.projector @ played)
    if off > config.tolerances["row_space"] * max(1.0, np.linalg.norm(played)):
        raise EstimatorInconsistent(
            f"Played strategy is {off:.2e} away from the sampling row space"
        )
    return GradEstimate(total_cost * (mat.pinv @ played), "bandit_linear")
