"""Run configuration files

.. currentmodule:: pyfwgames.harness.run_config
"""

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional, Union

from ..games import BUILTIN_GAMES, load_game
from ..learners import LEARNERS, ScheduleConfig
from ..utils import load_mapping
from ..utils.exceptions import ConfigError

FEEDBACKS = ("full_bandit", "semi_bandit", "bandit_linear", "trajectory")


@dataclass
class RunConfig:
    """One learning run.

    Attributes:
        game (str): Path to a game file or a builtin game name.
        learner (str): ``fw_explore`` or ``projected_sgd``.
        feedback (Optional[str]): Feedback model; defaults to the game's natural one.
        schedule (dict): ``family``, ``alpha``, ``beta`` and ``overrides``.
        T (int): Iterations.
        trajectories_per_update (int): Episodes per Markov update.
        horizon_cap (Optional[int]): Episode length cap override; 0 disables the cap.
        eval_every (int): Evaluation cadence.
        seed (int): Seed of all random streams.
        out (Optional[str]): Output directory.
        record_timing (bool): Add a wall-clock column to the run log.
        game_options (dict): Settings overrides for the builtin game.
    """

    game: str
    learner: str = "fw_explore"
    feedback: Optional[str] = None
    schedule: dict = field(default_factory=dict)
    T: int = 100
    trajectories_per_update: int = 1
    horizon_cap: Optional[int] = None
    eval_every: int = 1
    seed: int = 0
    out: Optional[str] = None
    record_timing: bool = False
    game_options: dict = field(default_factory=dict)

    def validate(self) -> None:
        """Raise ConfigError on invalid values or a missing game file."""
        if self.learner not in LEARNERS:
            raise ConfigError(f"Unknown learner {self.learner!r}, use one of {LEARNERS}")
        if self.feedback is not None and self.feedback not in FEEDBACKS:
            raise ConfigError(f"Unknown feedback {self.feedback!r}, use one of {FEEDBACKS}")
        if int(self.T) < 0:
            raise ConfigError("T must be nonnegative")
        if int(self.trajectories_per_update) < 1 or int(self.eval_every) < 1:
            raise ConfigError("trajectories_per_update and eval_every must be at least 1")
        if self.horizon_cap is not None and int(self.horizon_cap) < 0:
            raise ConfigError("horizon_cap must be nonnegative")
        if self.game not in BUILTIN_GAMES and not Path(self.game).is_file():
            raise ConfigError(f"Game file {self.game} does not exist")
        ScheduleConfig.from_dict(self.schedule)

    @classmethod
    def from_dict(cls, definition: dict, base: Optional[Path] = None) -> "RunConfig":
        """Build and validate; relative game paths resolve against ``base``."""
        if not isinstance(definition, dict):
            raise ConfigError("A run config must be a mapping")
        names = {f.name for f in fields(cls)}
        unknown = set(definition) - names
        if unknown:
            raise ConfigError(f"Unknown run config keys {sorted(unknown)}")
        if "game" not in definition:
            raise ConfigError("A run config needs a 'game'")
        definition = dict(definition)
        game = str(definition["game"])
        if base is not None and game not in BUILTIN_GAMES and not Path(game).is_absolute():
            definition["game"] = str(Path(base) / game)
        try:
            cfg = cls(**definition)
        except TypeError as err:
            raise ConfigError(str(err)) from err
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        """Read a JSON or YAML run config."""
        definition = load_mapping(path, "Run config")
        return cls.from_dict(definition, base=Path(path).parent)

    def load_game(self):
        """The configured game."""
        return load_game(self.game, **self.game_options)

    def to_dict(self) -> dict:
        """Plain mapping for log headers."""
        return asdict(self)
