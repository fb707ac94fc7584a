"""Two-species reaction-advection-diffusion fronts with free boundaries.

Simulates a bird/mosquito infection system on a moving interval whose
endpoints follow a flux law, classifies outcomes into the
vanishing/spreading dichotomy, and provides the threshold machinery
(risk indices, principal eigenvalues, traveling-wave speeds) to predict
them.
"""

from .dynamics import (MonitorReport, Outcome, SandwichReport, SpeedEstimate,
                       Thresholds, classify, comparison_monitor,
                       speed_sandwich_check, spreading_speeds)
from .eigen import (EigenConvergenceError, EigenResult, NoInfectionLoopError,
                    closed_form_gap, principal_lambda0, r0_numeric)
from .model import (DerivedParams, R0Value, RawParams, ValidationError,
                    check_hypothesis_H, derive_params, r0_closed_form,
                    risk_index, select_mu_star)
from .oracle import OdeTrajectory, homogeneous_ode, reference_explicit_pde
from .stefan import (FieldState, InitialProfile, SimControls, SolverError,
                     StabilityError, Trajectory, boundary_flux,
                     build_initial_state, metric_terms, simulate, step)
from .wavespeed import (NewtonDivergenceError, NoBracketError,
                        PreconditionError, WaveProfile, c_nu, cnu_shift_sweep,
                        solve_profile)

__version__ = "0.1.0"

__all__ = [
    "DerivedParams", "EigenConvergenceError", "EigenResult", "FieldState",
    "InitialProfile", "MonitorReport", "NewtonDivergenceError",
    "NoBracketError", "NoInfectionLoopError", "OdeTrajectory", "Outcome",
    "PreconditionError", "R0Value", "RawParams", "SandwichReport",
    "SimControls", "SolverError", "SpeedEstimate", "StabilityError",
    "Thresholds", "Trajectory", "ValidationError", "WaveProfile",
    "boundary_flux", "build_initial_state", "c_nu", "check_hypothesis_H",
    "classify", "closed_form_gap", "cnu_shift_sweep", "comparison_monitor",
    "derive_params", "homogeneous_ode", "metric_terms", "principal_lambda0",
    "r0_closed_form", "r0_numeric", "reference_explicit_pde", "risk_index",
    "select_mu_star", "simulate", "solve_profile", "speed_sandwich_check",
    "spreading_speeds", "step", "__version__",
]
