"""Helpers shared by the game families

.. currentmodule:: pyfwgames.games.base
"""

from typing import Optional, Sequence, Tuple

import numpy as np

from ..utils import config
from ..utils.exceptions import EnumerationTooLarge, InvalidAction


def check_enumerable(action_counts: Sequence[int], cap: Optional[int] = None) -> int:
    """Return the joint action count, raising if it exceeds the enumeration cap."""
    cap = config.enumeration_cap if cap is None else cap
    total = int(np.prod([int(m) for m in action_counts], dtype=object))
    if total > cap:
        raise EnumerationTooLarge(
            f"{total} joint actions exceed the enumeration cap of {cap}"
        )
    return total


def validate_joint_action(
    joint_action: Sequence[int], action_counts: Sequence[int]
) -> Tuple[int, ...]:
    """Check a joint pure action against per-player action counts."""
    if len(joint_action) != len(action_counts):
        raise InvalidAction(
            f"Expected {len(action_counts)} actions, got {len(joint_action)}"
        )
    out = []
    for i, (a, m) in enumerate(zip(joint_action, action_counts)):
        if int(a) != a or not 0 <= int(a) < m:
            raise InvalidAction(f"Action {a} of player {i} not in range [0, {m})")
        out.append(int(a))
    return tuple(out)


def check_unit_interval(values: np.ndarray, what: str) -> None:
    """Raise ValueError unless every entry lies in [0, 1]."""
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{what} contains non-finite values")
    if values.size and (values.min() < 0.0 or values.max() > 1.0):
        raise ValueError(f"{what} must lie in [0, 1]")


def contract_profile(
    tensor: np.ndarray, profile: Sequence[np.ndarray], skip: Optional[int] = None
) -> np.ndarray:
    """Take the expectation of a joint-action tensor under independent mixed strategies.

    The leading ``len(profile)`` axes of ``tensor`` are player axes. Player ``skip``
    is left uncontracted, so the result is indexed by its actions.
    """
    out = np.asarray(tensor, dtype=float)
    # contract from the last player so earlier axis positions stay valid
    for i in reversed(range(len(profile))):
        if i == skip:
            continue
        out = np.tensordot(out, np.asarray(profile[i], dtype=float), axes=([i], [0]))
    return out
