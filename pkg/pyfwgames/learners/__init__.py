"""
Frank-Wolfe learners with exploration, their schedules and the SGD baseline

.. currentmodule:: pyfwgames.learners
"""

from .frank_wolfe import (  # noqa: F401
    LearnerState,
    explore,
    fw_explore_step_congestion,
    fw_explore_step_mpg,
    fw_explore_step_pg,
    init_state,
    player_streams,
)
from .runner import LEARNERS, RunLog, evaluation_times, run_learning  # noqa: F401
from .schedules import (  # noqa: F401
    FAMILIES,
    PowerLaw,
    Schedule,
    ScheduleConfig,
    eta_mpg,
    eta_pg,
    mu_congestion,
    mu_mpg,
    mu_pg,
    rho_mpg,
    rho_pg,
    schedules_congestion,
)
from .sgd import projected_sgd_step  # noqa: F401
