"""Package exceptions

.. currentmodule:: pyfwgames.utils.exceptions
"""


class FWGamesError(Exception):
    """Base class for all package errors."""


class ConfigError(FWGamesError, ValueError):
    """Invalid run config, grid or game definition."""


class InvalidAction(FWGamesError, ValueError):
    """A joint action index lies outside a player's action set."""


class EnumerationTooLarge(FWGamesError, ValueError):
    """The joint action space exceeds the enumeration cap."""


class NotCoverable(FWGamesError, ValueError):
    """Some resource appears in no strategy of an action set."""


class InvalidGradient(FWGamesError, ValueError):
    """A linear minimization direction contains NaN or infinite entries."""


class DivisionByZeroProb(FWGamesError, ZeroDivisionError):
    """An importance weight would divide by a zero sampling probability."""


class DegenerateDistribution(FWGamesError, ValueError):
    """A second moment matrix is identically zero."""


class EstimatorInconsistent(FWGamesError, ValueError):
    """A played vector lies outside the row space of the second moment matrix."""


class DecompositionUnstable(FWGamesError, ArithmeticError):
    """The affine dependency solve of an atom reduction failed."""


class NumericalDivergence(FWGamesError, ArithmeticError):
    """Learner state or a linear system became non-finite or singular."""


class NoConvergence(FWGamesError, ArithmeticError):
    """Value iteration exceeded its sweep cap."""
