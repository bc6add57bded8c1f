"""Utilities submodule

.. currentmodule:: pyfwgames.utils
"""
from .config import config  # noqa: F401
from .export import export_dataset, export_json, load_mapping  # noqa: F401
