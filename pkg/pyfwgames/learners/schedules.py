"""Step size, blend weight and exploration schedules

The presets take the exponents (alpha, beta); alpha = 8/15 and beta = 1/5 give
eta_t ~ t^{-4/5}, rho_t ~ t^{-8/15} and mu ~ T^{-1/5}. Every value is clamped into
(0, 1]. Overrides replace any preset by a constant or by a power law
``{"scale": c, "offset": o, "power": p}`` meaning c / (t + o)^p.

.. currentmodule:: pyfwgames.learners.schedules
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np

from ..strategies import exploration_coefficient
from ..utils import app_logger, config
from ..utils.exceptions import ConfigError

logger = app_logger.get_logger(__name__)

FAMILIES = (
    "potential_game",
    "markov_pg",
    "congestion_bandit",
    "congestion_semibandit",
    "custom",
)
FEEDBACKS = ("bandit", "semi_bandit")


def _alpha(alpha: Optional[float]) -> float:
    return config.schedules["alpha"] if alpha is None else alpha


def _beta(beta: Optional[float]) -> float:
    return config.schedules["beta"] if beta is None else beta


def clamp(value: float, name: str = "value") -> float:
    """Clamp a schedule value to at most 1."""
    if value > 1.0:
        logger.debug(f"{name} = {value:.4g} clamped to 1")
        return 1.0
    return float(value)


def eta_pg(t: int, n: int, alpha: Optional[float] = None) -> float:
    """Step size 1 / (sqrt(n) t^{3 alpha / 2})."""
    return clamp(1.0 / (np.sqrt(n) * t ** (1.5 * _alpha(alpha))), "eta")


def rho_pg(t: int, n: int, m: int, mu: float, alpha: Optional[float] = None) -> float:
    """Blend weight 4 mu^{1/3} (n m)^{1/3} / t^alpha."""
    return clamp(4.0 * mu ** (1 / 3) * (n * m) ** (1 / 3) / t ** _alpha(alpha), "rho")


def mu_pg(T: int, n: int, m: int, beta: Optional[float] = None) -> float:
    """Exploration min{1 / (m n), m / (n^{1/8} T^beta)}."""
    return clamp(min(1.0 / (m * n), m / (n ** 0.125 * T ** _beta(beta))), "mu")


def eta_mpg(t: int, n: int, m: int, kappa: float, alpha: Optional[float] = None) -> float:
    """Step size kappa / (n^{3/2} m t^{3 alpha / 2})."""
    return clamp(kappa / (n ** 1.5 * m * t ** (1.5 * _alpha(alpha))), "eta")


def rho_mpg(t: int, n: int, m: int, mu: float, alpha: Optional[float] = None) -> float:
    """Blend weight 4 mu^{1/3} / (n^{1/3} m^{2/3} t^alpha)."""
    return clamp(
        4.0 * mu ** (1 / 3) / (n ** (1 / 3) * m ** (2 / 3) * t ** _alpha(alpha)), "rho"
    )


def mu_mpg(T: int, n: int, m: int, kappa: float, beta: Optional[float] = None) -> float:
    """Exploration min{1 / (m^2 n), kappa^{4/3} / (n^{7/8} m^{1/4} T^beta)}."""
    second = kappa ** (4 / 3) / (n ** 0.875 * m ** 0.25 * T ** _beta(beta))
    return clamp(min(1.0 / (m * m * n), second), "mu")


def schedules_congestion(
    t: int, n: int, d: int, k: int, mu: float, feedback: str, alpha: Optional[float] = None
) -> Tuple[float, float]:
    """Step size 2 / t^{3 alpha / 2} and the feedback specific blend weight.

    Bandit feedback uses 4 mu^{1/3} d^{1/6} / t^alpha; semi-bandit divides it by
    n^{1/3}. ``k`` is accepted for symmetry with the mu presets and does not enter.
    """
    if feedback not in FEEDBACKS:
        raise ValueError(f"feedback must be one of {FEEDBACKS}")
    a = _alpha(alpha)
    eta = clamp(2.0 / t ** (1.5 * a), "eta")
    rho = 4.0 * mu ** (1 / 3) * d ** (1 / 6) / t ** a
    if feedback == "semi_bandit":
        rho /= n ** (1 / 3)
    return eta, clamp(rho, "rho")


def mu_congestion(T: int, n: int, d: int, feedback: str, beta: Optional[float] = None) -> float:
    """Exploration 1 / (n^{3/8} d^{17/16} T^beta), or 1 / ((n d)^{3/8} T^beta) for
    semi-bandit feedback."""
    b = _beta(beta)
    if feedback == "semi_bandit":
        return clamp(1.0 / ((n * d) ** 0.375 * T ** b), "mu")
    return clamp(1.0 / (n ** 0.375 * d ** (17 / 16) * T ** b), "mu")


@dataclass(frozen=True)
class PowerLaw:
    """t -> scale / (t + offset)^power."""

    scale: float
    offset: float = 0.0
    power: float = 1.0

    def __call__(self, t: int) -> float:
        return self.scale / (t + self.offset) ** self.power


def parse_override(value) -> Union[float, PowerLaw]:
    """Read a constant or a ``{scale, offset, power}`` mapping."""
    if isinstance(value, dict):
        unknown = set(value) - {"scale", "offset", "power"}
        if unknown:
            raise ConfigError(f"Unknown power law keys {sorted(unknown)}")
        return PowerLaw(**{k: float(v) for k, v in value.items()})
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"Cannot read schedule override {value!r}") from None


@dataclass(frozen=True)
class Schedule:
    """Schedule bound to a game size and horizon.

    Attributes:
        eta_fn (Callable[[int], float]): Step size at iteration t >= 1.
        rho_fn (Callable[[int], float]): Blend weight at iteration t >= 1.
        mu (float): Constant exploration weight.
    """

    eta_fn: Callable[[int], float]
    rho_fn: Callable[[int], float]
    mu: float

    def eta(self, t: int) -> float:
        """Clamped step size."""
        return clamp(self.eta_fn(max(int(t), 1)), "eta")

    def rho(self, t: int) -> float:
        """Clamped blend weight."""
        return clamp(self.rho_fn(max(int(t), 1)), "rho")


def _as_fn(value: Union[float, PowerLaw]) -> Callable[[int], float]:
    if isinstance(value, PowerLaw):
        return value
    return lambda t: value


@dataclass(frozen=True)
class ScheduleConfig:
    """Which preset family to use, its exponents and explicit overrides.

    Attributes:
        family (str): One of :data:`FAMILIES`.
        alpha (float): Exponent of rho_t; eta_t decays as t^{-3 alpha / 2}.
        beta (float): Exponent of mu in T.
        overrides (Dict[str, object]): Optional ``eta``, ``rho``, ``mu`` replacements.
    """

    family: str = "potential_game"
    alpha: float = field(default_factory=lambda: config.schedules["alpha"])
    beta: float = field(default_factory=lambda: config.schedules["beta"])
    overrides: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"Unknown schedule family {self.family!r}, use {FAMILIES}")
        if not (0 < self.alpha < 1 and 0 < self.beta < 1):
            raise ConfigError("alpha and beta must lie in (0, 1)")
        unknown = set(self.overrides) - {"eta", "rho", "mu"}
        if unknown:
            raise ConfigError(f"Unknown schedule overrides {sorted(unknown)}")
        if self.family == "custom" and set(self.overrides) != {"eta", "rho", "mu"}:
            raise ConfigError("The custom family needs eta, rho and mu overrides")

    @classmethod
    def from_dict(cls, definition: Optional[dict]) -> "ScheduleConfig":
        """Build from a run-config ``schedule`` entry."""
        definition = dict(definition or {})
        unknown = set(definition) - {"family", "alpha", "beta", "overrides"}
        if unknown:
            raise ConfigError(f"Unknown schedule keys {sorted(unknown)}")
        return cls(**definition)

    def bind(
        self,
        game,
        T: int,
        feedback: Optional[str] = None,
        kappa: Optional[float] = None,
    ) -> Schedule:
        """Evaluate the presets for a game and horizon, then apply overrides.

        Args:
            game: The game; n, m (or d for congestion families) are read from it.
            T (int): Horizon used by the exploration preset.
            feedback (Optional[str]): ``bandit`` or ``semi_bandit`` for congestion.
            kappa (Optional[float]): Stopping probability for ``markov_pg``; defaults
                to the game's.

        Returns:
            Schedule: Callable step size and blend weight with a fixed mu.
        """
        n, m, T = game.n, game.m, max(int(T), 1)
        a, b = self.alpha, self.beta
        over = {k: parse_override(v) for k, v in self.overrides.items()}
        if self.family == "custom":
            eta, rho = _as_fn(over["eta"]), _as_fn(over["rho"])
            mu = over["mu"]
        elif self.family == "potential_game":
            mu = mu_pg(T, n, m, b)
            eta = lambda t: eta_pg(t, n, a)  # noqa: E731
            rho = lambda t: rho_pg(t, n, m, mu, a)  # noqa: E731
        elif self.family == "markov_pg":
            kappa = game.kappa if kappa is None else kappa
            mu = mu_mpg(T, n, m, kappa, b)
            eta = lambda t: eta_mpg(t, n, m, kappa, a)  # noqa: E731
            rho = lambda t: rho_mpg(t, n, m, mu, a)  # noqa: E731
        else:
            fb = "bandit" if self.family == "congestion_bandit" else "semi_bandit"
            d, k = game.d, game.k
            mu = mu_congestion(T, n, d, fb, b)
            cap = 1.0 / exploration_coefficient(d)
            if mu > cap:
                logger.debug(f"mu = {mu:.4g} lowered to {cap:.4g} to keep d * mu <= 1")
                mu = cap
            eta = lambda t: schedules_congestion(t, n, d, k, mu, fb, a)[0]  # noqa: E731
            rho = lambda t: schedules_congestion(t, n, d, k, mu, fb, a)[1]  # noqa: E731
        if "mu" in over:
            if isinstance(over["mu"], PowerLaw):
                raise ConfigError("mu must be a constant")
            mu = over["mu"]
        if "eta" in over:
            eta = _as_fn(over["eta"])
        if "rho" in over:
            rho = _as_fn(over["rho"])
        if isinstance(mu, PowerLaw) or not 0.0 <= mu <= 1.0:
            raise ConfigError(f"mu must be a constant in [0, 1], got {mu}")
        return Schedule(eta, rho, float(mu))
