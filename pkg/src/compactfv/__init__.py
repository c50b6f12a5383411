"""Compact implicit finite-volume scheme for 2D scalar conservation laws."""

from .analysis import (
    ErrorReport,
    convergence_study,
    eoc,
    l1_error,
    quadrant_masks,
    rotated_quadrant_masks,
    sector_errors,
)
from .errors import (
    CompactFVError,
    ConfigurationError,
    EvaluationError,
    SolverError,
    UsageError,
)
from .grid import (
    GHOST,
    CellField,
    Grid,
    fill_from_function,
    fill_ghosts_dirichlet,
    make_grid,
)
from .limiters import (
    CourantData,
    ParamField,
    compute_courant,
    compute_ell,
    compute_ratios,
    eno_select,
    weno_weights,
)
from .positivity import (
    PositivityReport,
    assemble_A,
    assemble_P,
    check_condition_lt,
    check_incompressibility,
)
from .problems import PRESETS, ProblemSpec, get_problem, godunov_flux
from .scheme import InterfaceParams, residual_field
from .solver import (
    METHODS,
    RunResult,
    StepReport,
    SweepConfig,
    run_simulation,
    solve_eno_step,
    solve_first_order_step,
    solve_fixed_omega_step,
    solve_weno_step,
)

__all__ = [
    "CellField", "CompactFVError", "ConfigurationError", "CourantData",
    "ErrorReport", "EvaluationError", "GHOST", "Grid", "InterfaceParams",
    "METHODS", "PRESETS", "ParamField", "PositivityReport", "ProblemSpec",
    "RunResult", "SolverError", "StepReport", "SweepConfig", "UsageError",
    "assemble_A", "assemble_P", "check_condition_lt",
    "check_incompressibility", "compute_courant", "compute_ell",
    "compute_ratios", "convergence_study", "eno_select", "eoc",
    "fill_from_function", "fill_ghosts_dirichlet", "get_problem",
    "godunov_flux", "l1_error", "make_grid", "quadrant_masks",
    "residual_field", "rotated_quadrant_masks", "run_simulation",
    "sector_errors", "solve_eno_step", "solve_first_order_step",
    "solve_fixed_omega_step", "solve_weno_step", "weno_weights",
]

__version__ = "0.1.0"
