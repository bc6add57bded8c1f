"""Access to the packaged ``user_config.yml``.

.. currentmodule:: pyfwgames.utils.config
"""

import importlib.resources as pkg_resources
import os

import yaml

from .. import data
from .exceptions import ConfigError

CONFIG_FILE = "user_config.yml"


class Config:
    """Sections of the user configuration, read once at import."""

    def __init__(self) -> None:
        self._config = None
        self.get_config()

    def get_config(self) -> dict:
        """(Re)read user_config.yml from the pyfwgames.data package."""
        with pkg_resources.open_text(data, CONFIG_FILE) as c:
            self._config = yaml.safe_load(c)
        return self._config

    def _section(self, name: str):
        try:
            return self._config[name]
        except (KeyError, TypeError):
            raise ConfigError(f"{CONFIG_FILE} has no {name} section") from None

    @property
    def tolerances(self) -> dict:
        """Numerical tolerances and the value-iteration sweep cap"""
        return self._section("TOLERANCES")

    @property
    def enumeration_cap(self) -> int:
        """Largest joint action space the exact oracles will enumerate"""
        return int(float(self._section("ENUMERATION_CAP")))

    @property
    def schedules(self) -> dict:
        return self._section("SCHEDULES")

    @property
    def experiment(self) -> dict:
        """Builtin Markov congestion game and reproduction defaults"""
        return self._section("EXPERIMENT")

    @property
    def logging(self) -> dict:
        return self._section("LOGGING")

    @property
    def output(self) -> dict:
        """Labels of the files written by runs, sweeps and reproductions"""
        return self._section("OUTPUT")

    @property
    def path_to_config(self) -> str:
        return os.path.join(data.__path__[0], CONFIG_FILE)


config = Config()
