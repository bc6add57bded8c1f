"""Run orchestration behind the command line

Each ``cli_*`` workflow returns the process exit status: 0 on success, 2 for invalid
configuration or input, 3 for numerical failures and 4 when some sweep cells failed.
Errors are reported on standard error.

.. currentmodule:: pyfwgames.harness
"""
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Union

import click
import numpy as np
from rich.pretty import pprint as rprint

from ..evaluation import evaluate_profile
from ..games import CongestionGame, Game, MarkovGame, load_game
from ..learners import RunLog, ScheduleConfig, run_learning
from ..strategies import PolytopePoint
from ..utils import app_logger, config, export_dataset, export_json, load_mapping
from ..utils.exceptions import ConfigError, FWGamesError
from .experiment import occupancy, preferred_facilities, reproduce_experiment  # noqa: F401
from .run_config import RunConfig  # noqa: F401
from .slope import fit_regret_slope  # noqa: F401
from .sweep import SweepGrid, draw_game, run_cell, run_sweep  # noqa: F401

logger = app_logger.get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PARTIAL = 4


def exit_code(err: Exception) -> int:
    """Exit status of an error raised by a workflow."""
    if isinstance(err, ArithmeticError):
        return EXIT_NUMERICAL
    return EXIT_CONFIG


def _report(err: Exception) -> int:
    click.secho(f"{type(err).__name__}: {err}", fg="red", err=True)
    return exit_code(err)


def execute_run(cfg: RunConfig) -> RunLog:
    """Run a validated config and write its log and final strategies.

    Args:
        cfg (RunConfig): The run; ``cfg.out`` defaults to the working directory.

    Returns:
        RunLog: The completed log.
    """
    game = cfg.load_game()
    log = run_learning(
        game,
        learner=cfg.learner,
        schedule=ScheduleConfig.from_dict(cfg.schedule),
        T=int(cfg.T),
        seed=int(cfg.seed),
        eval_every=int(cfg.eval_every),
        feedback=cfg.feedback,
        trajectories_per_update=int(cfg.trajectories_per_update),
        horizon_cap=cfg.horizon_cap,
        record_timing=bool(cfg.record_timing),
        header={"config": cfg.to_dict()},
    )
    out = str(Path(cfg.out) if cfg.out is not None else Path.cwd())
    export_dataset(log.to_frame(), label=config.output["run_log"], out_path=out)
    export_json(log.final_strategies(), label=config.output["final_strategy"], out_path=out)
    return log


def cli_run(
    config_path: Union[str, Path], seed: Optional[int] = None, out: Optional[str] = None
) -> int:
    """Load a run config, apply the command line overrides and execute it."""
    try:
        cfg = RunConfig.load(config_path)
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        if out is not None:
            cfg = replace(cfg, out=out)
        execute_run(cfg)
    except (FWGamesError, ValueError, ArithmeticError) as err:
        return _report(err)
    return EXIT_OK


def cli_reproduce_experiment(
    seeds: Optional[int] = None,
    out: Optional[str] = None,
    literal_stopping: bool = False,
    jobs: int = 1,
    iterations: Optional[int] = None,
) -> int:
    """Reproduce the Markov congestion experiment and print the safe-state masses."""
    try:
        summary = reproduce_experiment(
            out=out,
            seeds=seeds,
            literal_stopping=literal_stopping,
            iterations=iterations,
            jobs=jobs,
        )
    except (FWGamesError, ValueError, ArithmeticError) as err:
        return _report(err)
    for learner in ("fw", "sgd"):
        mass = summary[learner]["safe_mass_preferred"]
        click.echo(f"{learner}: safe-state mass on preferred facilities = {mass:.3f}")
    return EXIT_OK


def cli_sweep(grid_path: Union[str, Path], out: str, jobs: int = 1) -> int:
    """Run a sweep grid; exit 4 if any cell failed."""
    try:
        summary = run_sweep(SweepGrid.load(grid_path), out, jobs)
    except (FWGamesError, ValueError, ArithmeticError) as err:
        return _report(err)
    failed = summary[summary["status"] != "ok"]
    for _, row in failed.iterrows():
        click.secho(f"Cell {row['cell']} failed: {row['error']}", fg="red", err=True)
    return EXIT_PARTIAL if len(failed) else EXIT_OK


def load_strategy(game: Game, definition: dict) -> List[object]:
    """Rebuild a profile from a final-strategy mapping.

    Args:
        game (Game): The game the strategies belong to.
        definition (dict): ``strategies`` indexed [player][state][action], or ``atoms`` for
            congestion games.

    Raises:
        ConfigError: If the mapping does not fit the game.

    Returns:
        List[object]: One strategy per player.
    """
    if not isinstance(definition, dict):
        raise ConfigError("A strategy file must be a mapping")
    if isinstance(game, CongestionGame) and "atoms" not in definition:
        raise ConfigError("Congestion strategies need an 'atoms' entry")
    try:
        if isinstance(game, CongestionGame):
            profile = [PolytopePoint(p["atoms"], p["weights"]) for p in definition["atoms"]]
        else:
            profile = [np.asarray(p, dtype=float) for p in definition["strategies"]]
            if not isinstance(game, MarkovGame):
                profile = [p.reshape(-1) for p in profile]
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigError(f"Invalid strategy file: {err}") from err
    if len(profile) != game.n:
        raise ConfigError(f"Expected {game.n} strategies, got {len(profile)}")
    return profile


def evaluate_strategy(game_source: str, strategy_path: Union[str, Path]) -> Dict[str, object]:
    """Exact gaps and per-player values of a saved profile."""
    game = load_game(game_source)
    definition = load_mapping(strategy_path, "Strategy file")
    metrics = evaluate_profile(game, load_strategy(game, definition))
    return {
        "nash_gap": metrics.nash_gap,
        "fw_gap": metrics.fw_gap,
        "values": [float(c) for c in metrics.costs],
    }


def cli_eval(game_source: str, strategy_path: Union[str, Path]) -> int:
    """Print nash_gap, fw_gap and values of a saved profile."""
    try:
        report = evaluate_strategy(game_source, strategy_path)
    except (FWGamesError, ValueError, ArithmeticError) as err:
        return _report(err)
    rprint(report, indent_guides=False)
    return EXIT_OK
