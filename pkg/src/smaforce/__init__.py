"""Desk-scale workbench for consistent SMA artificial-muscle force.

Simulates the electrothermal plant with synthetic functional fatigue,
enforces temperature limits with a one-step supervisory controller, runs
the two cycling protocols, and recovers long-life force asymptotes and a
conservative temperature limit from the resulting logs.
"""

from .analysis import (
    CycleWindow,
    ForceCurve,
    LimitResult,
    build_force_curve,
    filter_outliers,
    max_force_per_cycle,
    select_limit,
    windows_c1,
    windows_c2,
)
from .config import load_config, load_defaults
from .fitting import DecayFit, DecaySeries, fit_double, fit_single, select_model
from .generators import C1Config, C1State, C2Config, C2State, c1_step, c2_step
from .harness import (
    TrialConfig,
    TrialLog,
    read_csv,
    run_sweep,
    run_trial,
    trial_config_from_dict,
    write_csv,
)
from .plant import (
    FatigueParams,
    NoiseParams,
    PlantState,
    blocked_force,
    degradation_floor,
    degrade_step,
    phase_fraction,
    plant_step,
)
from .supervisor import SupervisorConfig, adjusted_setpoint, max_input, saturate
from .sysid import ExcitationConfig, IdResult, excite, fit_linear
from .thermal import (
    DiscreteCoeffs,
    ThermalParams,
    analytic_response,
    discretize,
    step_temperature,
)

__version__ = "0.1.0"
