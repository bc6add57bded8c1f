#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Command line entry point ``fwg``.

.. currentmodule:: pyfwgames.cli
"""
import logging
import sys

import click
from rich.pretty import pprint as rprint

from .__init__ import __version__
from .harness import cli_eval, cli_reproduce_experiment, cli_run, cli_sweep
from .utils import config

LOGGING_LEVELS = {
    0: logging.NOTSET,
    1: logging.ERROR,
    2: logging.WARN,
    3: logging.INFO,
    4: logging.DEBUG,
}  #: `-v` count to root logger level

CONFIG_SECTIONS = (
    ("TOLERANCES", "tolerances"),
    ("ENUMERATION_CAP", "enumeration_cap"),
    ("SCHEDULES", "schedules"),
    ("EXPERIMENT", "experiment"),
    ("LOGGING", "logging"),
    ("OUTPUT", "output"),
)


class Info(object):
    """Shared state handed from the ``fwg`` group to its commands."""

    def __init__(self):  # click builds it without arguments
        self.verbose: int = 0


#: pylint: disable=invalid-name
pass_info = click.make_pass_decorator(Info, ensure=True)


class NaturalOrderGroup(click.Group):
    """Group whose ``--help`` keeps the declaration order of its commands."""

    def list_commands(self, ctx):
        return self.commands.keys()


def _finish(code: int) -> None:
    if code:
        sys.exit(code)


def _enable_verbose(verbose: int) -> None:
    level = LOGGING_LEVELS.get(verbose, logging.DEBUG)
    logging.basicConfig(level=level)
    click.secho(
        f"Verbose logging is enabled. (LEVEL={logging.getLogger().getEffectiveLevel()})",
        fg="yellow",
    )


@click.group(cls=NaturalOrderGroup)
@click.option(
    "--verbose", "-v", count=True, help="Enable verbose output; 1 = less, 4 = more.",
)
@pass_info
def cli(info: Info, verbose: int):
    """Run pyfwgames.

    Frank-Wolfe learners with exploration for potential, Markov potential and
    congestion games under bandit feedback.
    """
    if verbose > 0:
        _enable_verbose(verbose)
    info.verbose = verbose


@cli.command()
@pass_info
def show_config(_: Info):
    """Print every section of the user configuration."""
    for heading, attr in CONFIG_SECTIONS:
        click.secho(heading, fg="red", bold=True)
        rprint(getattr(config, attr), indent_guides=False)


@cli.command()
@pass_info
def get_config_path(_: Info):
    """Print where user_config.yml lives."""
    click.echo(config.path_to_config)


@cli.command()
@pass_info
def edit_config(_: Info):
    """Open user_config.yml in the default editor."""
    click.edit(filename=config.path_to_config)


@cli.command()
def version():
    """Print the pyfwgames version."""
    click.secho(__version__, bold=True)


@cli.command()
@pass_info
@click.option(
    "-c",
    "--config",
    "config_path",
    required=True,
    type=click.Path(),
    help="Run config file (JSON or YAML)",
)
@click.option("-s", "--seed", type=int, help="Override the seed of the run config")
@click.option("-o", "--out", help="Output directory, defaults to the run config's")
def run(_: Info, config_path, seed, out):
    """Run one learner on one game.

    Writes run_log.csv with one row per evaluated iteration and final_strategy.json
    with the last strategies and a header echoing the configuration.

    Example usage:

    `$ fwg run --config runs/potential.json --seed 3 --out results`
    """
    _finish(cli_run(config_path, seed=seed, out=out))


@cli.command()
@pass_info
@click.option("-k", "--seeds", type=int, help="Seeds per learner, defaults to config")
@click.option("-o", "--out", help="Output directory, defaults to the working directory")
@click.option(
    "--literal-stopping",
    is_flag=True,
    help="Stop each episode step with probability 0.99 instead of continuing",
)
@click.option("-j", "--jobs", type=int, default=1, help="Parallel worker processes")
@click.option("-T", "--iterations", type=int, help="Override the configured iterations")
def reproduce_experiment(_: Info, seeds, out, literal_stopping, jobs, iterations):
    """Reproduce the two-state Markov congestion experiment.

    Runs Frank-Wolfe with exploration and projected SGD on the builtin 8 player game
    and writes one CSV per learner and seed plus summary.json.
    """
    _finish(
        cli_reproduce_experiment(
            seeds=seeds,
            out=out,
            literal_stopping=literal_stopping,
            jobs=jobs,
            iterations=iterations,
        )
    )


@cli.command()
@pass_info
@click.option("-g", "--grid", required=True, type=click.Path(), help="Grid file")
@click.option("-o", "--out", required=True, help="Output directory")
@click.option("-j", "--jobs", type=int, default=1, help="Parallel worker processes")
def sweep(_: Info, grid, out, jobs):
    """Run every cell of a parameter grid on random games.

    Each cell writes cell_<k>.csv; sweep_summary.csv lists final regrets, fitted
    log-log regret slopes and the status of every cell. Exits with 4 if any cell
    failed.
    """
    _finish(cli_sweep(grid, out, jobs))


@cli.command(name="eval")
@pass_info
@click.option("-g", "--game", required=True, help="Game file or builtin game name")
@click.option("-s", "--strategy", required=True, type=click.Path(), help="Strategy JSON")
def eval_(_: Info, game, strategy):
    """Print the Nash gap, Frank-Wolfe gap and values of saved strategies."""
    _finish(cli_eval(game, strategy))
