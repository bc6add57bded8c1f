"""Game definition files

Game files are JSON or YAML with a top-level
``kind`` of ``normal_form``, ``congestion`` or ``markov``.

.. currentmodule:: pyfwgames.games.loaders
"""

from pathlib import Path
from typing import Union

import numpy as np

from ..utils.export import load_mapping
from ..utils.exceptions import ConfigError
from .congestion import CongestionGame
from .experiment import ExperimentSettings, build_experiment_game
from .markov import MarkovGame
from .noise import NoiseModel
from .normal_form import NormalFormPotentialGame

Game = Union[NormalFormPotentialGame, CongestionGame, MarkovGame]

BUILTIN_GAMES = ("markov_congestion",)


def _subsets_to_indicators(subsets, d: int) -> np.ndarray:
    rows = []
    for subset in subsets:
        row = np.zeros(d)
        for e in subset:
            if not 0 <= int(e) < d:
                raise ConfigError(f"Resource {e} outside [0, {d})")
            row[int(e)] = 1.0
        rows.append(row)
    return np.array(rows)


def game_from_dict(definition: dict) -> Game:
    """Build a game from a parsed definition.

    Congestion action sets are lists of resource index lists per player, e.g.
    ``[[[0], [1]], [[0, 1]]]``; ``facility_costs`` is a d x (n + 1) matrix.

    Args:
        definition (dict): Parsed game file.

    Raises:
        ConfigError: Unknown kind, missing fields or invariant violations.

    Returns:
        Game: The constructed game.
    """
    if not isinstance(definition, dict) or "kind" not in definition:
        raise ConfigError("A game definition needs a top-level 'kind'")
    kind = definition["kind"]
    try:
        noise = NoiseModel.from_dict(definition.get("noise"))
        if kind == "normal_form":
            potential = definition.get("potential")
            return NormalFormPotentialGame(
                costs=np.asarray(definition["costs"], dtype=float),
                potential=None if potential is None else np.asarray(potential, dtype=float),
                noise=noise,
            )
        if kind == "congestion":
            facility_costs = np.asarray(definition["facility_costs"], dtype=float)
            d = int(definition.get("d", facility_costs.shape[0]))
            return CongestionGame(
                action_sets=[_subsets_to_indicators(s, d) for s in definition["action_sets"]],
                facility_costs=facility_costs,
                noise=noise,
            )
        if kind == "markov":
            return MarkovGame(
                costs=np.asarray(definition["costs"], dtype=float),
                transitions=np.asarray(definition["transitions"], dtype=float),
                stop_prob=np.asarray(definition["stop_prob"], dtype=float),
                init_dist=np.asarray(definition["init_dist"], dtype=float),
                horizon_cap=definition.get("horizon_cap"),
                noise=noise,
            )
    except KeyError as err:
        raise ConfigError(f"Game definition of kind {kind!r} misses field {err}") from err
    except ConfigError:
        raise
    except ValueError as err:
        raise ConfigError(f"Invalid {kind} game: {err}") from err
    raise ConfigError(f"Unknown game kind {kind!r}")


def load_game(source: Union[str, Path], **builtin_overrides) -> Game:
    """Load a game from a file path or a builtin name.

    Args:
        source (Union[str, Path]): Path to a game file, or ``markov_congestion``.
        **builtin_overrides: Experiment settings overrides for the builtin game.

    Raises:
        ConfigError: Missing or unreadable file, or an invalid definition.

    Returns:
        Game: The loaded game.
    """
    if str(source) in BUILTIN_GAMES:
        return build_experiment_game(ExperimentSettings.from_config(**builtin_overrides))
    return game_from_dict(load_mapping(source, "Game file"))


def game_to_dict(game: Game) -> dict:
    """Serialise a game back into the file format."""
    noise = {"kind": game.noise.kind, "sigma": game.noise.sigma}
    if isinstance(game, NormalFormPotentialGame):
        out = {"kind": "normal_form", "costs": game.costs.tolist(), "noise": noise}
        if game.potential is not None:
            out["potential"] = game.potential.tolist()
        return out
    if isinstance(game, CongestionGame):
        return {
            "kind": "congestion",
            "d": game.d,
            "action_sets": [
                [np.flatnonzero(row).tolist() for row in s] for s in game.action_sets
            ],
            "facility_costs": game.facility_costs.tolist(),
            "noise": noise,
        }
    return {
        "kind": "markov",
        "costs": game.costs.tolist(),
        "transitions": game.transitions.tolist(),
        "stop_prob": game.stop_prob.tolist(),
        "init_dist": game.init_dist.tolist(),
        "horizon_cap": game.horizon_cap,
        "noise": noise,
    }
