"""Reproduction of the two-state Markov congestion experiment

Both learners run on the builtin game for several seeds; every run writes its own log
and a summary gathers the L1-to-final curves and final facility occupancy.

.. currentmodule:: pyfwgames.harness.experiment
"""

from pathlib import Path
from typing import Dict, List, Optional

import dask
import numpy as np
import pandas as pd

from ..games import ExperimentSettings, build_experiment_game
from ..games.experiment import DISTANCING, SAFE
from ..learners import ScheduleConfig, run_learning
from ..utils import app_logger, config, export_dataset, export_json

logger = app_logger.get_logger(__name__)

STATE_NAMES = {SAFE: "safe", DISTANCING: "distancing"}


def experiment_schedules() -> Dict[str, ScheduleConfig]:
    """Configured schedules of the two learners."""
    exp = config.experiment
    fw = exp["fw"]
    sgd = exp["sgd"]
    return {
        "fw": ScheduleConfig(
            family="custom",
            overrides={"eta": fw["eta"], "rho": fw["rho"], "mu": fw["mu"]},
        ),
        "sgd": ScheduleConfig(
            family="custom", overrides={"eta": sgd["eta"], "rho": 1.0, "mu": sgd["mu"]}
        ),
    }


def occupancy(final: List[np.ndarray], settings: ExperimentSettings) -> Dict[str, dict]:
    """Expected number of players on each facility per state."""
    totals = np.sum(final, axis=0)
    return {
        STATE_NAMES[s]: dict(zip(settings.facilities, totals[s].tolist()))
        for s in range(totals.shape[0])
    }


def preferred_facilities(settings: ExperimentSettings, count: int = 2) -> List[str]:
    """The ``count`` cheapest facilities (C and D by default)."""
    order = np.argsort(settings.facility_weights, kind="stable")[:count]
    return [settings.facilities[e] for e in sorted(order)]


def _run_one(learner: str, seed: int, settings: ExperimentSettings, T: int, B: int):
    game = build_experiment_game(settings)
    schedule = experiment_schedules()[learner]
    log = run_learning(
        game,
        learner="fw_explore" if learner == "fw" else "projected_sgd",
        schedule=schedule,
        T=T,
        seed=seed,
        trajectories_per_update=B,
        header={"experiment": learner, "literal_stopping": settings.literal_stopping},
    )
    return log.to_frame(), [np.asarray(p) for p in log.final]


def reproduce_experiment(
    out: Optional[str] = None,
    seeds: Optional[int] = None,
    literal_stopping: bool = False,
    iterations: Optional[int] = None,
    jobs: int = 1,
) -> Dict[str, object]:
    """Run FW with exploration and projected SGD on the builtin game.

    Writes ``fw_seed<k>.csv`` and ``sgd_seed<k>.csv`` per seed and a summary JSON.

    Args:
        out (Optional[str]): Output directory; defaults to the working directory.
        seeds (Optional[int]): Seeds per learner, 0 .. seeds - 1.
        literal_stopping (bool): Stop each step with probability 0.99 instead of
            continuing with it.
        iterations (Optional[int]): Overrides the configured T.
        jobs (int): Parallel worker processes.

    Returns:
        Dict[str, object]: The summary written to disk.
    """
    exp = config.experiment
    seeds = exp["seeds"] if seeds is None else seeds
    T = exp["iterations"] if iterations is None else iterations
    B = exp["trajectories_per_update"]
    settings = ExperimentSettings.from_config(literal_stopping=literal_stopping)
    logger.info(f"Reproducing the experiment with {seeds} seeds, T={T}, B={B}")

    tasks = [
        dask.delayed(_run_one)(learner, seed, settings, T, B)
        for learner in ("fw", "sgd")
        for seed in range(seeds)
    ]
    scheduler = "processes" if jobs > 1 else "synchronous"
    results = dask.compute(*tasks, scheduler=scheduler, num_workers=jobs)

    out_path = Path(out) if out is not None else Path.cwd()
    preferred = preferred_facilities(settings)
    summary: Dict[str, object] = {
        "header": {
            "seeds": seeds,
            "T": T,
            "trajectories_per_update": B,
            "horizon_cap": settings.horizon_cap,
            "literal_stopping": literal_stopping,
            "preferred_facilities": preferred,
        }
    }
    for k, learner in enumerate(("fw", "sgd")):
        runs = results[k * seeds: (k + 1) * seeds]
        for seed, (frame, _) in enumerate(runs):
            export_dataset(frame, label=f"{learner}_seed{seed}", out_path=str(out_path))
        curves = pd.concat(
            [frame.set_index("t")["l1_to_final"] for frame, _ in runs], axis=1
        )
        finals = [final for _, final in runs]
        mean_final = np.mean(finals, axis=0)
        occ = occupancy(mean_final, settings)
        safe_mass = sum(occ["safe"][f] for f in preferred) / settings.n
        summary[learner] = {
            "t": curves.index.tolist(),
            "l1_mean": curves.mean(axis=1).tolist(),
            "l1_std": curves.std(axis=1, ddof=0).tolist(),
            "occupancy": occ,
            "safe_mass_preferred": safe_mass,
        }
        logger.info(f"{learner}: safe-state mass on {preferred} = {safe_mass:.3f}")
    export_json(summary, label=config.output["summary"], out_path=str(out_path))
    return summary
