"""Builtin two-state Markov congestion game

Players pick one of four facilities. In the *safe* state a facility costs
w_e * (n + 1 - load) / n, cheaper the more players share it (or w_e * load / n with
``load_effect: increasing``); in the *distancing* state the same table is multiplied
by a penalty.
Crowding more than ``upper_threshold * n`` players on one facility moves the game to
distancing, and spreading out to at most ``lower_threshold * n`` per facility moves it
back.

.. currentmodule:: pyfwgames.games.experiment
"""

from dataclasses import dataclass, fields
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..utils import app_logger, config
from ..utils.exceptions import ConfigError
from .markov import MarkovGame
from .noise import NoiseModel

logger = app_logger.get_logger(__name__)

SAFE, DISTANCING = 0, 1
LOAD_EFFECTS = ("decreasing", "increasing")


@dataclass(frozen=True)
class ExperimentSettings:
    """Parameters of the builtin game; defaults come from the user config."""

    n: int
    facilities: Tuple[str, ...]
    facility_weights: Tuple[float, ...]
    penalty: float
    upper_threshold: float
    lower_threshold: float
    continuation: float
    literal_stop: float
    horizon_cap: Optional[int]
    load_effect: str = "decreasing"
    literal_stopping: bool = False
    noise: str = "deterministic"

    @classmethod
    def from_config(cls, **overrides) -> "ExperimentSettings":
        """Merge keyword overrides into the configured defaults."""
        names = {f.name for f in fields(cls)}
        unknown = set(overrides) - names
        if unknown:
            raise ConfigError(f"Unknown experiment settings: {sorted(unknown)}")
        values = {k: v for k, v in config.experiment.items() if k in names}
        values.update({k: v for k, v in overrides.items() if v is not None})
        values["facilities"] = tuple(values["facilities"])
        values["facility_weights"] = tuple(float(w) for w in values["facility_weights"])
        settings = cls(**values)
        settings.validate()
        return settings

    def validate(self) -> None:
        """Raise ConfigError on inconsistent settings."""
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if len(self.facilities) != len(self.facility_weights):
            raise ConfigError("facilities and facility_weights differ in length")
        if any(w < 0 for w in self.facility_weights) or self.penalty < 0:
            raise ConfigError("facility weights and penalty must be non-negative")
        if not 0 < self.continuation < 1 or not 0 < self.literal_stop <= 1:
            raise ConfigError("continuation must lie in (0, 1), literal_stop in (0, 1]")
        if self.horizon_cap is not None and self.horizon_cap < 1:
            raise ConfigError("horizon_cap must be positive")
        if self.load_effect not in LOAD_EFFECTS:
            raise ConfigError(f"load_effect must be one of {LOAD_EFFECTS}")

    @property
    def stop_probability(self) -> float:
        """Per-step stopping probability under the selected reading."""
        return self.literal_stop if self.literal_stopping else 1.0 - self.continuation


def facility_loads(n: int, facility_count: int) -> np.ndarray:
    """Loads per facility for every joint action, shape (F,) * n + (F,)."""
    idx = np.indices((facility_count,) * n)
    return np.stack([(idx == e).sum(axis=0) for e in range(facility_count)], axis=-1)


def next_state(
    state: int, loads: Union[Sequence[int], np.ndarray], n: int, upper: float, lower: float
) -> Union[int, np.ndarray]:
    """Deterministic state transition from facility loads.

    Args:
        state (int): Current state, SAFE or DISTANCING.
        loads: Facility loads on the last axis; leading axes are broadcast.
        n (int): Number of players.
        upper (float): Crowding threshold as a fraction of n, compared strictly.
        lower (float): Spreading threshold as a fraction of n, compared inclusively.

    Returns:
        The next state, an int for a single load vector and an array otherwise.
    """
    peak = np.max(np.asarray(loads), axis=-1)
    if state == SAFE:
        nxt = np.where(peak > upper * n, DISTANCING, SAFE)
    else:
        nxt = np.where(peak <= lower * n, SAFE, DISTANCING)
    return int(nxt) if nxt.ndim == 0 else nxt


def build_experiment_game(settings: Optional[ExperimentSettings] = None) -> MarkovGame:
    """Build the two-state (safe, distancing) Markov congestion game.

    Facility costs scale w_e by the load term of ``load_effect``; the distancing table
    is the safe one times the penalty, and the whole table is divided by its maximum
    when that exceeds 1.

    Args:
        settings (Optional[ExperimentSettings]): Game parameters. Defaults to the
            configured experiment.

    Returns:
        MarkovGame: Game with states 0 = safe and 1 = distancing, started in safe.
    """
    settings = settings if settings is not None else ExperimentSettings.from_config()
    n = settings.n
    F = len(settings.facilities)
    weights = np.asarray(settings.facility_weights)
    loads = facility_loads(n, F)
    idx = np.indices((F,) * n)

    safe = np.empty((n,) + (F,) * n)
    for i in range(n):
        own_load = np.take_along_axis(loads, idx[i][..., None], axis=-1)[..., 0]
        if settings.load_effect == "increasing":
            safe[i] = weights[idx[i]] * own_load / n
        else:
            safe[i] = weights[idx[i]] * (n + 1 - own_load) / n
    costs = np.stack([safe, safe * settings.penalty], axis=1)
    peak = costs.max()
    if peak > 1.0:
        costs = costs / peak
        logger.debug("Rescaled experiment costs by 1/%g", peak)

    transitions = np.zeros((2,) + (F,) * n + (2,))
    for state in (SAFE, DISTANCING):
        nxt = next_state(
            state, loads, n, settings.upper_threshold, settings.lower_threshold
        )
        transitions[state] = nxt[..., None] == np.arange(2)

    return MarkovGame(
        costs=costs,
        transitions=transitions,
        stop_prob=settings.stop_probability,
        init_dist=np.array([1.0, 0.0]),
        horizon_cap=settings.horizon_cap,
        noise=NoiseModel(settings.noise),
    )
