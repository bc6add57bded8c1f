"""Fractional strategies over resources kept as explicit convex combinations

A :class:`PolytopePoint` stores pure strategies (0/1 resource indicators) with weights.
Every update forms a convex combination of points, so the atom list is always a valid
decomposition; :func:`prune_atoms` keeps it at most d + 1 atoms long.

.. currentmodule:: pyfwgames.strategies.polytope
"""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import linalg

from ..utils import app_logger, config
from ..utils.exceptions import DecompositionUnstable, InvalidAction, NotCoverable

logger = app_logger.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class PolytopePoint:
    """Convex combination of pure strategies.

    Attributes:
        atoms (np.ndarray): 0/1 indicators of shape (K, d).
        weights (np.ndarray): Nonnegative weights of shape (K,) summing to 1.
    """

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.atleast_2d(np.asarray(self.atoms, dtype=float))
        weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if atoms.shape[0] != weights.shape[0] or atoms.shape[0] == 0:
            raise ValueError("Need one weight per atom and at least one atom")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > config.tolerances["simplex"]:
            raise ValueError("Atom weights must be nonnegative and sum to 1")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @property
    def d(self) -> int:
        """Number of resources."""
        return self.atoms.shape[1]

    @property
    def support(self) -> int:
        """Number of atoms."""
        return self.atoms.shape[0]

    @cached_property
    def dense(self) -> np.ndarray:
        """Marginal vector x_e = sum of weights of atoms containing e."""
        return self.weights @ self.atoms

    @classmethod
    def point_mass(cls, indicator: np.ndarray) -> "PolytopePoint":
        """Point at a single pure strategy."""
        return cls(np.atleast_2d(indicator), np.ones(1))

    @classmethod
    def uniform(cls, action_set: np.ndarray) -> "PolytopePoint":
        """Uniform mixture over every strategy of an action set, pruned."""
        action_set = np.asarray(action_set, dtype=float)
        weights = np.full(action_set.shape[0], 1.0 / action_set.shape[0])
        return cls(*prune_atoms(action_set, weights))


def prune_atoms(
    atoms: np.ndarray, weights: np.ndarray, rank_tol: Optional[float] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Reduce an atom list to at most d + 1 atoms with the same marginals.

    Duplicate atoms are merged and zero weights dropped. While more than d + 1 atoms
    remain, weights move along an affine dependency z (``atoms.T @ z = 0`` and
    ``sum(z) = 0``) until one of them reaches zero.

    Args:
        atoms (np.ndarray): Indicators (K, d).
        weights (np.ndarray): Weights (K,).
        rank_tol (Optional[float]): Relative singular value cutoff for the null space.

    Raises:
        DecompositionUnstable: If no usable dependency is found.

    Returns:
        Tuple[np.ndarray, np.ndarray]: The pruned atoms and weights.
    """
    rank_tol = config.tolerances["rank"] if rank_tol is None else rank_tol
    atoms = np.asarray(atoms, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if atoms.shape[0] == 0:
        raise ValueError("Cannot prune an empty atom list")
    atoms, inverse = np.unique(atoms, axis=0, return_inverse=True)
    weights = np.bincount(inverse.ravel(), weights=weights, minlength=atoms.shape[0])
    keep = weights > 0
    atoms, weights = atoms[keep], weights[keep]
    d = atoms.shape[1]
    while atoms.shape[0] > d + 1:
        system = np.vstack([atoms.T, np.ones(atoms.shape[0])])
        null = linalg.null_space(system, rcond=rank_tol)
        if null.shape[1] == 0:
            raise DecompositionUnstable(
                f"No affine dependency among {atoms.shape[0]} atoms in dimension {d}"
            )
        z = null[:, 0]
        if np.abs(system @ z).max() > config.tolerances["row_space"]:
            raise DecompositionUnstable("Affine dependency solve is inaccurate")
        if not np.any(z > 0):
            z = -z
        positive = z > rank_tol * np.abs(z).max()
        ratios = np.full(z.shape, np.inf)
        ratios[positive] = weights[positive] / z[positive]
        drop = int(np.argmin(ratios))
        weights = np.clip(weights - ratios[drop] * z, 0.0, None)
        weights[drop] = 0.0
        keep = weights > 0
        atoms, weights = atoms[keep], weights[keep]
    return atoms, weights / weights.sum()


def caratheodory_decompose(x: PolytopePoint) -> List[Tuple[np.ndarray, float]]:
    """Distribution over at most d + 1 pure strategies whose marginals equal x.dense."""
    atoms, weights = prune_atoms(x.atoms, x.weights)
    return [(a, float(w)) for a, w in zip(atoms, weights)]


def covering_exploration_point(action_set: np.ndarray) -> PolytopePoint:
    """Uniform mixture over a greedy set cover of the resources.

    Each round picks the strategy covering most uncovered resources, lowest index on
    ties.

    Raises:
        NotCoverable: If some resource belongs to no strategy.
    """
    action_set = np.asarray(action_set, dtype=float) > 0
    if np.any(~action_set.any(axis=0)):
        missing = np.flatnonzero(~action_set.any(axis=0)).tolist()
        raise NotCoverable(f"Resources {missing} appear in no strategy")
    uncovered = np.ones(action_set.shape[1], dtype=bool)
    chosen = []
    while uncovered.any():
        gain = (action_set & uncovered).sum(axis=1)
        pick = int(np.argmax(gain))
        chosen.append(pick)
        uncovered &= ~action_set[pick]
    atoms = action_set[sorted(chosen)].astype(float)
    return PolytopePoint(atoms, np.full(len(chosen), 1.0 / len(chosen)))


def exploration_coefficient(d: int, coef: Union[str, float, None] = None) -> float:
    """Multiplier turning mu into the mixing weight; ``"d"`` means the resource count."""
    coef = config.schedules.get("exploration_coef", "d") if coef is None else coef
    return float(d) if coef == "d" else float(coef)


def mix_points(
    x: PolytopePoint, y: PolytopePoint, weight: float
) -> PolytopePoint:
    """Pruned convex combination (1 - weight) x + weight y."""
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f"Mixing weight must lie in [0, 1], got {weight}")
    if weight == 0.0:
        return x
    if weight == 1.0:
        return y
    atoms = np.vstack([x.atoms, y.atoms])
    weights = np.concatenate([(1.0 - weight) * x.weights, weight * y.weights])
    return PolytopePoint(*prune_atoms(atoms, weights))


def mix_polytope_exploration(
    x: PolytopePoint, mu: float, cover: PolytopePoint, coef: Union[str, float, None] = None
) -> PolytopePoint:
    """Explored point (1 - eps) x + eps cover with eps = coef * mu.

    Raises:
        ValueError: If mu is negative or eps exceeds 1.
    """
    if mu < 0:
        raise ValueError(f"mu must be nonnegative, got {mu}")
    eps = exploration_coefficient(x.d, coef) * mu
    if eps > 1.0:
        raise ValueError(f"Exploration weight {eps} exceeds 1; lower mu")
    return mix_points(x, cover, eps)


def fw_update_point(x: PolytopePoint, vertex: np.ndarray, eta: float) -> PolytopePoint:
    """Frank-Wolfe step towards the pure strategy ``vertex``."""
    return mix_points(x, PolytopePoint.point_mass(vertex), eta)


def strategy_distribution(x: PolytopePoint, action_set: np.ndarray) -> np.ndarray:
    """Probabilities over the rows of ``action_set`` induced by the atoms of x.

    Raises:
        InvalidAction: If an atom is not a strategy of the action set.
    """
    index = {tuple(row): j for j, row in enumerate(np.asarray(action_set, dtype=float))}
    probs = np.zeros(len(index))
    for atom, w in zip(x.atoms, x.weights):
        try:
            probs[index[tuple(atom)]] += w
        except KeyError:
            raise InvalidAction(f"Atom {atom.tolist()} is not in the action set") from None
    return probs
