"""Run a learner for T iterations with periodic exact evaluation

.. currentmodule:: pyfwgames.learners.runner
"""

import time
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from .._version import __version__
from ..evaluation import RegretTracker, evaluate_profile
from ..games import CongestionGame, MarkovGame
from ..strategies import PolytopePoint, l1_distance
from ..utils import app_logger
from ..utils.exceptions import ConfigError
from .frank_wolfe import (
    LearnerState,
    explore,
    fw_explore_step_congestion,
    fw_explore_step_mpg,
    fw_explore_step_pg,
    init_state,
)
from .schedules import Schedule, ScheduleConfig
from .sgd import projected_sgd_step

logger = app_logger.get_logger(__name__)

LEARNERS = ("fw_explore", "projected_sgd")
FEEDBACK_BY_KIND = {
    "normal_form": ("full_bandit",),
    "markov": ("trajectory",),
    "congestion": ("semi_bandit", "bandit_linear"),
}


def evaluation_times(T: int, eval_every: int) -> List[int]:
    """Rows are written at t = 0, e, 2e, .. below T, and at T."""
    if eval_every < 1:
        raise ValueError("eval_every must be at least 1")
    return list(range(0, T, eval_every)) + [T]


def _dense(profile: Sequence) -> list:
    return [p.dense if isinstance(p, PolytopePoint) else np.asarray(p) for p in profile]


@dataclass
class RunLog:
    """Evaluated rows of one run plus the profiles behind them.

    Attributes:
        header (Dict[str, object]): Configuration echo, seed and package version.
        rows (List[Dict[str, float]]): One metrics record per evaluated iteration.
        profiles (list): Un-mixed iterate at each row.
        played_profiles (list): Explored (played) profile at each row.
        final (list): Strategies after the last iteration.
    """

    header: Dict[str, object]
    rows: List[Dict[str, float]] = field(default_factory=list)
    profiles: list = field(default_factory=list)
    played_profiles: list = field(default_factory=list)
    final: list = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        """Rows as a DataFrame with the fixed column order."""
        n = self.header["n"]
        columns = (
            ["t", "eta", "rho", "mu", "nash_gap", "fw_gap", "mismatch"]
            + ["played_nash_gap", "played_fw_gap"]
            + [f"cost_{i}" for i in range(n)]
            + ["nash_regret"]
            + [f"regret_{i}" for i in range(n)]
            + ["l1_to_final"]
        )
        if self.header.get("record_timing"):
            columns.append("wall_clock")
        return pd.DataFrame(self.rows, columns=columns)

    def final_strategies(self) -> Dict[str, object]:
        """Final strategies indexed [player][state][action].

        Congestion runs list dense resource marginals and the atoms instead.
        """
        out: Dict[str, object] = {"header": self.header}
        if self.final and isinstance(self.final[0], PolytopePoint):
            out["marginals"] = [p.dense.tolist() for p in self.final]
            out["atoms"] = [
                {"atoms": p.atoms.tolist(), "weights": p.weights.tolist()} for p in self.final
            ]
            return out
        out["strategies"] = [np.atleast_2d(p).tolist() for p in self.final]
        return out


def _check_pair(game, learner: str, feedback: Optional[str]) -> str:
    if learner not in LEARNERS:
        raise ConfigError(f"Unknown learner {learner!r}, use one of {LEARNERS}")
    allowed = FEEDBACK_BY_KIND[game.kind]
    feedback = allowed[0] if feedback is None else feedback
    if feedback not in allowed:
        raise ConfigError(f"Feedback {feedback!r} does not fit a {game.kind} game")
    if learner == "projected_sgd" and isinstance(game, CongestionGame):
        raise ConfigError("Projected SGD runs on normal-form and Markov games only")
    return feedback


def run_learning(
    game,
    learner: str = "fw_explore",
    schedule: Union[Schedule, ScheduleConfig, None] = None,
    T: int = 100,
    seed: int = 0,
    eval_every: int = 1,
    feedback: Optional[str] = None,
    trajectories_per_update: int = 1,
    horizon_cap: Optional[int] = None,
    learning_players: Optional[Sequence[int]] = None,
    opponent_sequence: Optional[Callable[[int], Sequence]] = None,
    record_timing: bool = False,
    header: Optional[Dict[str, object]] = None,
) -> RunLog:
    """Execute T iterations and evaluate the iterate every ``eval_every`` iterations.

    Row t describes the profile after t updates: its un-mixed gaps, the gaps and costs
    of the explored profile that is played next, and regret accumulated over the t
    played profiles so far. Between rows each evaluated played profile stands for the
    iterations up to the next row, which is exact for ``eval_every = 1``.

    Args:
        game: Game of any family.
        learner (str): ``fw_explore`` or ``projected_sgd``.
        schedule (Union[Schedule, ScheduleConfig, None]): Bound schedule or a config to
            bind; defaults to the preset family of the game.
        T (int): Number of iterations, T >= 0.
        seed (int): Seed of all random streams.
        eval_every (int): Evaluation cadence.
        feedback (Optional[str]): ``semi_bandit`` or ``bandit_linear`` for congestion.
        trajectories_per_update (int): Episodes per update in Markov games.
        horizon_cap (Optional[int]): Episode length cap override in Markov games.
        learning_players (Optional[Sequence[int]]): Players that learn; the others
            follow ``opponent_sequence``.
        opponent_sequence (Optional[Callable[[int], Sequence]]): Maps an iteration
            t >= 1 to a full profile whose non-learning entries are played.
        record_timing (bool): Add a ``wall_clock`` column.
        header (Optional[Dict[str, object]]): Extra entries for the log header.

    Raises:
        ConfigError: On an incompatible game, learner and feedback combination.
        NumericalDivergence: If any iterate becomes non-finite.

    Returns:
        RunLog: The evaluated rows and profiles.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    feedback = _check_pair(game, learner, feedback)
    if learning_players is not None and opponent_sequence is None:
        if set(learning_players) != set(range(game.n)):
            raise ConfigError("Fixed players need an opponent_sequence")
    if schedule is None or isinstance(schedule, ScheduleConfig):
        family = {
            "normal_form": "potential_game",
            "markov": "markov_pg",
            "congestion": "congestion_semibandit"
            if feedback == "semi_bandit"
            else "congestion_bandit",
        }[game.kind]
        schedule = (schedule or ScheduleConfig(family=family)).bind(game, T)
    log = RunLog(
        header={
            **(header or {}),
            "kind": game.kind,
            "n": game.n,
            "learner": learner,
            "feedback": feedback,
            "T": T,
            "seed": seed,
            "eval_every": eval_every,
            "mu": schedule.mu,
            "record_timing": record_timing,
            "version": __version__,
        }
    )
    logger.info(f"Starting {learner} on a {game.kind} game, T={T}, seed={seed}")
    state = init_state(game, seed, learning_players)
    tracker = RegretTracker(game)
    rows = set(evaluation_times(T, eval_every))
    start = time.perf_counter()
    previous = None

    def with_opponents(state: LearnerState, t: int) -> LearnerState:
        if opponent_sequence is None:
            return state
        supplied = opponent_sequence(t)
        strategies = [
            p if i in state.learning else supplied[i] for i, p in enumerate(state.strategies)
        ]
        return replace(state, strategies=strategies)

    def step(state: LearnerState) -> LearnerState:
        if learner == "projected_sgd":
            return projected_sgd_step(
                state,
                game,
                schedule.eta(state.t),
                schedule.mu,
                trajectories_per_update,
                horizon_cap,
            )
        if isinstance(game, MarkovGame):
            return fw_explore_step_mpg(
                state, game, schedule, trajectories_per_update, horizon_cap
            )
        if isinstance(game, CongestionGame):
            fb = "bandit" if feedback == "bandit_linear" else "semi_bandit"
            return fw_explore_step_congestion(state, game, schedule, fb)
        return fw_explore_step_pg(state, game, schedule)

    for t in range(T + 1):
        state = with_opponents(state, t + 1)
        if t in rows:
            if previous is not None:
                tracker.update(previous[0], t - previous[1], previous[2])
            played = explore(state, game, schedule.mu)
            iterate = evaluate_profile(game, state.strategies)
            explored = evaluate_profile(game, played)
            row = {
                "t": t,
                "eta": schedule.eta(max(t, 1)),
                "rho": schedule.rho(max(t, 1)),
                "mu": schedule.mu,
                "nash_gap": iterate.nash_gap,
                "fw_gap": iterate.fw_gap,
                "mismatch": iterate.mismatch,
                "played_nash_gap": explored.nash_gap,
                "played_fw_gap": explored.fw_gap,
                "nash_regret": tracker.nash_regret,
            }
            row.update({f"cost_{i}": c for i, c in enumerate(explored.costs)})
            row.update(
                {f"regret_{i}": r for i, r in enumerate(tracker.individual_regret)}
            )
            if record_timing:
                row["wall_clock"] = time.perf_counter() - start
            log.rows.append(row)
            log.profiles.append(list(state.strategies))
            log.played_profiles.append(played)
            previous = (played, t, explored.nash_gap)
        if t < T:
            state = step(state)

    log.final = list(state.strategies)
    final = _dense(log.final)
    for row, profile in zip(log.rows, log.profiles):
        row["l1_to_final"] = l1_distance(_dense(profile), final)
    logger.info(f"Finished {learner} run, final Nash gap {log.rows[-1]['nash_gap']:.4g}")
    return log
