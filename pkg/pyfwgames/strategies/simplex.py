"""Probability simplex and per-state policy tables

Vectors of shape (m,) are single mixed strategies; arrays of shape (S, m) are policy
tables and every operation here acts on them row by row.

.. currentmodule:: pyfwgames.strategies.simplex
"""

from typing import Optional, Sequence, Union

import numpy as np

from ..utils import config
from ..utils.exceptions import InvalidGradient


def _check_unit(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


def renormalize(p: np.ndarray) -> np.ndarray:
    """Clip round-off negatives and rescale the last axis to unit sum."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    return p / p.sum(axis=-1, keepdims=True)


def uniform(m: int, states: Optional[int] = None) -> np.ndarray:
    """Uniform strategy over m actions, or a uniform (states, m) policy table."""
    shape = (m,) if states is None else (states, m)
    return np.full(shape, 1.0 / m)


def is_simplex(p: np.ndarray, tol: Optional[float] = None) -> bool:
    """Whether every row of p is nonnegative and sums to 1 within ``tol``."""
    tol = config.tolerances["simplex"] if tol is None else tol
    p = np.asarray(p, dtype=float)
    return bool(
        np.all(np.isfinite(p))
        and np.all(p >= 0)
        and np.all(np.abs(p.sum(axis=-1) - 1.0) <= tol)
    )


def mix_with_uniform(p: np.ndarray, mu: float) -> np.ndarray:
    """Explored strategy (1 - mu) p + mu * uniform, rowwise for tables."""
    mu = _check_unit(mu, "mu")
    p = np.asarray(p, dtype=float)
    return renormalize((1.0 - mu) * p + mu / p.shape[-1])


def one_hot(index: Union[int, Sequence[int]], m: int) -> np.ndarray:
    """Point mass at ``index``; a sequence of indices gives one row per entry."""
    index = np.asarray(index, dtype=int)
    return np.eye(m)[index]


def linear_min_vertex(
    direction: np.ndarray, action_set: Optional[np.ndarray] = None
) -> int:
    """Index of the vertex minimizing <vertex, direction>; ties go to the lowest index.

    Args:
        direction (np.ndarray): Linear objective, one entry per action (simplex) or per
            resource (polytope).
        action_set (Optional[np.ndarray]): 0/1 matrix (K, d) of pure strategies. When
            omitted the feasible set is the simplex over ``len(direction)`` actions.

    Raises:
        InvalidGradient: If the direction holds NaN or infinite entries.

    Returns:
        int: Row of ``action_set``, or coordinate of the simplex.
    """
    direction = np.asarray(direction, dtype=float)
    if not np.all(np.isfinite(direction)):
        raise InvalidGradient("Linear minimization direction is not finite")
    scores = direction if action_set is None else np.asarray(action_set) @ direction
    # np.argmin returns the first minimizer
    return int(np.argmin(scores))


def linear_min_rows(direction: np.ndarray) -> np.ndarray:
    """Per-state minimizers of a table direction (S, m)."""
    direction = np.asarray(direction, dtype=float)
    if not np.all(np.isfinite(direction)):
        raise InvalidGradient("Linear minimization direction is not finite")
    return np.argmin(direction, axis=-1)


def fw_update(current: np.ndarray, vertex, eta: float) -> np.ndarray:
    """Frank-Wolfe step (1 - eta) current + eta vertex.

    Args:
        current (np.ndarray): Strategy (m,) or policy table (S, m).
        vertex: An action index, per-row indices, or a dense point of the same shape.
        eta (float): Step size in [0, 1].

    Returns:
        np.ndarray: The updated strategy, renormalized.
    """
    eta = _check_unit(eta, "eta")
    current = np.asarray(current, dtype=float)
    vertex = np.asarray(vertex)
    if vertex.shape != current.shape:
        vertex = one_hot(vertex, current.shape[-1])
    return renormalize((1.0 - eta) * current + eta * vertex)


def _project_vector(v: np.ndarray) -> np.ndarray:
    if np.all(v >= 0) and abs(v.sum() - 1.0) <= config.tolerances["simplex"]:
        return v.copy()
    u = np.sort(v)[::-1]
    thresholds = (np.cumsum(u) - 1.0) / np.arange(1, v.shape[0] + 1)
    k = np.nonzero(thresholds < u)[0][-1]
    return renormalize(np.clip(v - thresholds[k], 0.0, None))


def simplex_projection(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex by sort and threshold.

    Points already on the simplex are returned unchanged, which makes the projection
    exactly idempotent. Tables are projected row by row.

    Args:
        v (np.ndarray): Finite vector (m,) or table (S, m).

    Returns:
        np.ndarray: The projection.
    """
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("Cannot project a non-finite vector")
    if v.ndim == 1:
        return _project_vector(v)
    return np.stack([_project_vector(row) for row in v.reshape(-1, v.shape[-1])]).reshape(
        v.shape
    )


def l1_distance(a: Sequence[np.ndarray], b: Sequence[np.ndarray]) -> float:
    """Sum over players, states and actions of |a - b|."""
    if len(a) != len(b):
        raise ValueError("Profiles have a different number of players")
    total = 0.0
    for x, y in zip(a, b):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        if x.shape != y.shape:
            raise ValueError(f"Strategy shapes differ: {x.shape} vs {y.shape}")
        total += float(np.abs(x - y).sum())
    return total
