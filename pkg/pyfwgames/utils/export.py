"""Export helper functions

.. currentmodule:: pyfwgames.utils.export
"""

import json
from pathlib import Path
from typing import Any, Optional, Union

import pandas as pd
import yaml

from .exceptions import ConfigError


def _out_dir(path: Optional[str], out_path: Optional[str]) -> Path:
    if out_path is None:
        out = Path(path).parent if path is not None else Path.cwd()
    else:
        out = Path(out_path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def export_dataset(
    df: pd.DataFrame, label: str, path: str = None, out_path: str = None
) -> Path:
    """Export DataFrame to csv dataset.

    Floats are written in their shortest round-trip representation so the file reads
    back to identical values with ``pd.read_csv(..., float_precision="round_trip")``.

    Args:
        df (pd.DataFrame): Dataframe to export.
        label (str): Output file name label.
        path (str): Input file location.
        out_path (str): File location to export to, if different from import path.
            Defaults to None

    Returns:
        Path: Location of the written file.
    """
    out_file = _out_dir(path, out_path) / f"{label}.csv"
    df.to_csv(out_file, index=False, float_format=lambda v: repr(float(v)))
    return out_file


def export_json(obj: Any, label: str, path: str = None, out_path: str = None) -> Path:
    """Export a JSON-serialisable object.

    Args:
        obj (Any): Object to serialise.
        label (str): Output file name label.
        path (str): Input file location.
        out_path (str): File location to export to. Defaults to None

    Returns:
        Path: Location of the written file.
    """
    out_file = _out_dir(path, out_path) / f"{label}.json"
    with open(out_file, "w") as w:
        json.dump(obj, w, indent=2, sort_keys=True)
        w.write("\n")
    return out_file


def load_mapping(path: Union[str, Path], what: str = "File") -> Any:
    """Read a JSON or YAML file.

    ``.json`` files go through the JSON parser so exponent floats such as ``1e-05``
    stay numbers; everything else is read as YAML.

    Raises:
        ConfigError: If the file is missing or cannot be parsed.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"{what} {path} does not exist")
    try:
        with open(path, "r") as r:
            if path.suffix.lower() == ".json":
                return json.load(r)
            return yaml.safe_load(r)
    except (json.JSONDecodeError, yaml.YAMLError) as err:
        raise ConfigError(f"Could not parse {path}: {err}") from err
