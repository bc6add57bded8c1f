"""Fractional potential of congestion games

Loads under independent per-player marginals follow Poisson-binomial laws, so the
fractional potential and its gradient only need one convolution per resource.

.. currentmodule:: pyfwgames.evaluation.fractional
"""

from typing import List, Optional, Sequence, Union

import numpy as np

from ..games import CongestionGame
from ..strategies import PolytopePoint

Marginals = Union[np.ndarray, Sequence[PolytopePoint]]


def as_marginals(x: Marginals) -> np.ndarray:
    """Stack polytope points (or pass through a matrix) into an (n, d) marginal matrix."""
    if isinstance(x, np.ndarray):
        return x.astype(float)
    return np.stack(
        [p.dense if isinstance(p, PolytopePoint) else np.asarray(p, dtype=float) for p in x]
    )


def poisson_binomial_pmf(probs: Sequence[float]) -> np.ndarray:
    """Distribution of a sum of independent Bernoulli(p_j) variables over {0..r}."""
    pmf = np.ones(1)
    for p in np.asarray(probs, dtype=float).ravel():
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"Probability {p} outside [0, 1]")
        pmf = np.convolve(pmf, [1.0 - p, p])
    return pmf


def _load_pmfs(x: np.ndarray, skip: Optional[int] = None) -> List[np.ndarray]:
    rows = [j for j in range(x.shape[0]) if j != skip]
    return [poisson_binomial_pmf(x[rows, e]) for e in range(x.shape[1])]


def fractional_potential(game: CongestionGame, x: Marginals) -> float:
    """psi(x) = sum_e E[sum_{j=0}^{L_e} c(e, j)] with L_e Poisson-binomial in x[:, e].

    The j = 0 terms are included, so psi exceeds the expected Rosenthal potential by
    the constant sum_e c(e, 0).
    """
    x = as_marginals(x)
    cumulative = np.cumsum(game.facility_costs, axis=1)
    return float(
        sum(
            pmf @ cumulative[e, : pmf.shape[0]]
            for e, pmf in enumerate(_load_pmfs(x))
        )
    )


def grad_fractional_potential(game: CongestionGame, x: Marginals, i: int) -> np.ndarray:
    """d psi / d x[i, e] = E[c(e, L_e^{-i} + 1)] with L_e^{-i} the load of the others."""
    x = as_marginals(x)
    return np.array(
        [
            pmf @ game.facility_costs[e, 1 : pmf.shape[0] + 1]
            for e, pmf in enumerate(_load_pmfs(x, skip=i))
        ]
    )
