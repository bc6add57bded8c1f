"""Cost noise models

.. currentmodule:: pyfwgames.games.noise
"""

from dataclasses import dataclass

import numpy as np

NOISE_KINDS = ("deterministic", "bernoulli", "truncated_gaussian")


@dataclass(frozen=True)
class NoiseModel:
    """Distribution of a realized cost around its stored mean.

    ``bernoulli`` draws 1 with probability equal to the mean, so samples are unbiased.
    ``truncated_gaussian`` adds N(0, sigma^2) and clips to [0, 1]; the clipping biases
    samples near the boundary, so it is meant for robustness runs only.

    Attributes:
        kind (str): One of ``deterministic``, ``bernoulli``, ``truncated_gaussian``.
        sigma (float): Standard deviation for ``truncated_gaussian``.
    """

    kind: str = "deterministic"
    sigma: float = 0.1

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"Unknown noise kind {self.kind!r}, use one of {NOISE_KINDS}")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")

    def sample(self, mean: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Draw one noisy realization per entry of ``mean``.

        Args:
            mean (np.ndarray): Mean costs in [0, 1].
            rng (np.random.Generator): Caller owned generator.

        Returns:
            np.ndarray: Samples in [0, 1] with the shape of ``mean``.
        """
        mean = np.asarray(mean, dtype=float)
        if self.kind == "deterministic":
            return mean.copy()
        if self.kind == "bernoulli":
            return (rng.random(mean.shape) < mean).astype(float)
        return np.clip(mean + self.sigma * rng.standard_normal(mean.shape), 0.0, 1.0)

    @classmethod
    def from_dict(cls, definition) -> "NoiseModel":
        """Build from a game-file entry: a kind string or ``{"kind": .., "sigma": ..}``."""
        if definition is None:
            return cls()
        if isinstance(definition, str):
            return cls(kind=definition)
        return cls(kind=definition.get("kind", "deterministic"), sigma=definition.get("sigma", 0.1))
