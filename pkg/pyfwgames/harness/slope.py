"""Log-log regret slope

.. currentmodule:: pyfwgames.harness.slope
"""

from typing import Sequence, Tuple, Union

import numpy as np
import pandas as pd


def fit_regret_slope(
    series: Union[pd.Series, Sequence[float]], window: Tuple[float, float]
) -> float:
    """Least-squares slope of log(regret) against log(t) over ``window``.

    Args:
        series (Union[pd.Series, Sequence[float]]): Cumulative regret indexed by t;
            plain sequences are indexed 1, 2, ...
        window (Tuple[float, float]): Inclusive range [t0, t1] of t with t0 > 0.

    Raises:
        ValueError: If the window is empty or leaves the range of the series.

    Returns:
        float: The fitted exponent. Series with zeros in the window are shifted by 1.
    """
    if not isinstance(series, pd.Series):
        values = np.asarray(series, dtype=float)
        series = pd.Series(values, index=np.arange(1, len(values) + 1))
    t0, t1 = window
    index = series.index.to_numpy(dtype=float)
    if t0 <= 0 or t0 >= t1 or t0 < index.min() or t1 > index.max():
        raise ValueError(
            f"Window {window} outside the series range [{index.min()}, {index.max()}]"
        )
    part = series[(index >= t0) & (index <= t1)].astype(float)
    if len(part) < 2:
        raise ValueError("Need at least two points in the window")
    values = part.to_numpy()
    if np.any(values < 0):
        raise ValueError("Regret series must be nonnegative on the window")
    if np.any(values == 0):
        values = values + 1.0
    slope, _ = np.polyfit(np.log(part.index.to_numpy(dtype=float)), np.log(values), 1)
    return float(slope)
