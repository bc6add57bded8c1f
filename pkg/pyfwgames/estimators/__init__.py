"""
Gradient estimators and the recursive blend

.. currentmodule:: pyfwgames.estimators
"""

from .bandit import (  # noqa: F401
    ESTIMATOR_KINDS,
    GradEstimate,
    SecondMomentMatrix,
    bandit_linear_estimate,
    importance_sampling_full,
    second_moment_matrix,
    semi_bandit_estimate,
)
from .recursive import RecursiveGrad, recursive_blend  # noqa: F401
from .trajectory import average_estimates, reinforce_estimate  # noqa: F401
