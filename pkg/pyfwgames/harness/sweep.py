"""Parameter sweeps over random games

A grid file lists values per axis; every combination is one cell run on a freshly
drawn game. Cells run independently (in parallel with ``jobs > 1``), each writes its
own log, and failures are recorded without stopping the others.

.. currentmodule:: pyfwgames.harness.sweep
"""

from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Dict, List, Union

import dask
import numpy as np
import pandas as pd

from ..games import random_congestion_game, random_markov_game, random_potential_game
from ..learners import FAMILIES, ScheduleConfig, run_learning
from ..utils import app_logger, config, export_dataset, load_mapping
from ..utils.exceptions import ConfigError
from .slope import fit_regret_slope

logger = app_logger.get_logger(__name__)

AXES = ("T", "n", "m", "family", "seed")


@dataclass
class SweepGrid:
    """Axes of a sweep and the settings shared by all cells.

    Attributes:
        T, n, m, family, seed (list): Axis values; ``m`` is the action count, or the
            resource count for congestion families.
        learner (str): Learner kind.
        eval_every (int): Evaluation cadence.
        states (int): State count of random Markov games.
        k (int): Resources per strategy of random congestion games.
        game_seed (int): Seed of the game generator.
        overrides (dict): Schedule overrides applied to every cell.
    """

    T: List[int] = field(default_factory=list)
    n: List[int] = field(default_factory=list)
    m: List[int] = field(default_factory=list)
    family: List[str] = field(default_factory=lambda: ["potential_game"])
    seed: List[int] = field(default_factory=lambda: [0])
    learner: str = "fw_explore"
    eval_every: int = 1
    states: int = 2
    k: int = 1
    game_seed: int = 0
    overrides: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, definition: dict) -> "SweepGrid":
        """Build from a parsed grid file; scalars become one-value axes and an integer
        ``seeds`` entry expands to 0 .. seeds - 1."""
        if not isinstance(definition, dict):
            raise ConfigError("A sweep grid must be a mapping")
        definition = dict(definition)
        if "seeds" in definition:
            seeds = definition.pop("seeds")
            definition["seed"] = list(range(seeds)) if isinstance(seeds, int) else seeds
        known = set(AXES) | {"learner", "eval_every", "states", "k", "game_seed"}
        known.add("overrides")
        unknown = set(definition) - known
        if unknown:
            raise ConfigError(f"Unknown sweep grid keys {sorted(unknown)}")
        for axis in AXES:
            if axis in definition and not isinstance(definition[axis], list):
                definition[axis] = [definition[axis]]
        bad = set(definition.get("family", [])) - set(FAMILIES)
        if bad:
            raise ConfigError(f"Unknown schedule families {sorted(bad)}")
        return cls(**definition)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SweepGrid":
        """Read a JSON or YAML grid file."""
        return cls.from_dict(load_mapping(path, "Grid file"))

    def cells(self) -> List[Dict[str, object]]:
        """All axis combinations in grid order."""
        axes = [getattr(self, a) for a in AXES]
        return [dict(zip(AXES, values)) for values in product(*axes)]


def draw_game(cell: Dict[str, object], grid: SweepGrid):
    """Random game matching a cell's family and sizes."""
    rng = np.random.default_rng([grid.game_seed, cell["n"], cell["m"]])
    n, m, family = int(cell["n"]), int(cell["m"]), cell["family"]
    if family == "markov_pg":
        return random_markov_game(grid.states, [m] * n, rng)
    if family.startswith("congestion"):
        return random_congestion_game(n, m, grid.k, rng)
    return random_potential_game(n, [m] * n, rng)


def _slope(series: pd.Series, T: int) -> float:
    try:
        return fit_regret_slope(series, (max(T // 10, 1), T))
    except ValueError as err:
        logger.debug(f"No regret slope: {err}")
        return np.nan


def run_cell(index: int, cell: Dict[str, object], grid: SweepGrid, out: str) -> dict:
    """Run one cell and summarise it; errors become a failed status."""
    record = {"cell": index, **cell}
    try:
        game = draw_game(cell, grid)
        feedback = "bandit_linear" if cell["family"] == "congestion_bandit" else None
        if cell["family"] == "congestion_semibandit":
            feedback = "semi_bandit"
        schedule = ScheduleConfig(family=cell["family"], overrides=grid.overrides)
        log = run_learning(
            game,
            learner=grid.learner,
            schedule=schedule,
            T=int(cell["T"]),
            seed=int(cell["seed"]),
            eval_every=grid.eval_every,
            feedback=feedback,
            header={"cell": index},
        )
        frame = log.to_frame()
        export_dataset(frame, label=f"cell_{index}", out_path=out)
        T = int(cell["T"])
        series = frame.set_index("t")["nash_regret"]
        record.update(
            status="ok",
            error="",
            nash_regret=float(series.iloc[-1]),
            max_regret=float(frame.filter(like="regret_").iloc[-1].max()),
            slope=_slope(series, T),
        )
    except Exception as err:  # noqa: B902
        logger.warning(f"Sweep cell {index} failed: {err}")
        record.update(
            status="failed",
            error=f"{type(err).__name__}: {err}",
            nash_regret=np.nan,
            max_regret=np.nan,
            slope=np.nan,
        )
    return record


def run_sweep(grid: SweepGrid, out: str, jobs: int = 1) -> pd.DataFrame:
    """Run every cell and write the sweep summary.

    Raises:
        ConfigError: If the grid has no cells.

    Returns:
        pd.DataFrame: One summary row per cell.
    """
    cells = grid.cells()
    if not cells:
        raise ConfigError("The sweep grid has no cells")
    logger.info(f"Running {len(cells)} sweep cells with {jobs} job(s)")
    tasks = [dask.delayed(run_cell)(i, cell, grid, out) for i, cell in enumerate(cells)]
    scheduler = "processes" if jobs > 1 else "synchronous"
    records = dask.compute(*tasks, scheduler=scheduler, num_workers=jobs)
    summary = pd.DataFrame(list(records))
    export_dataset(summary, label=config.output["sweep_summary"], out_path=out)
    return summary
