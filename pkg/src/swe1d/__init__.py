"""Well-balanced, positivity-preserving 1D shallow-water finite-volume solver.

Second-order central-upwind scheme over a continuous piecewise-linear
bottom, with a conservative wet/dry interface reconstruction and
draining-time flux limiting, plus the benchmark scenarios, error
analysis, and a CLI harness.
"""

from .analysis import (
    ErrorReport,
    eoc,
    equilibrium_deviation,
    error_norms,
    front_position,
)
from .boundary import BoundaryCondition
from .evolution import RunResult, Solver, SolverError, StepDiagnostics, cfl_dt
from .friction import FrictionParams, apply_friction
from .grid import Bathymetry, CellState, Grid, SchemeParams, build_bathymetry, cell_depth
from .kernels import available_backends, draining_time, effective_dt, get_backend
from .numerics import cu_flux, local_speeds, physical_flux, source_quadrature
from .reconstruction import (
    InterfaceRecon,
    WetLengths,
    base_reconstruct,
    free_surface_level,
    mean_velocity,
    minmod,
    slope,
    wetdry_correct,
)
from .scenarios import (
    SCENARIOS,
    Scenario,
    exact_front,
    get_scenario,
    init_cell_averages,
    make_accuracy_test,
    make_cadam_hump,
    make_dambreak_plane,
    make_lake_at_rest,
    make_runup,
)

__version__ = "0.1.0"

__all__ = [
    "Bathymetry",
    "BoundaryCondition",
    "CellState",
    "ErrorReport",
    "FrictionParams",
    "Grid",
    "InterfaceRecon",
    "RunResult",
    "SCENARIOS",
    "Scenario",
    "SchemeParams",
    "Solver",
    "SolverError",
    "StepDiagnostics",
    "WetLengths",
    "apply_friction",
    "available_backends",
    "base_reconstruct",
    "build_bathymetry",
    "cell_depth",
    "cfl_dt",
    "cu_flux",
    "draining_time",
    "effective_dt",
    "eoc",
    "equilibrium_deviation",
    "error_norms",
    "exact_front",
    "free_surface_level",
    "front_position",
    "get_backend",
    "get_scenario",
    "init_cell_averages",
    "local_speeds",
    "make_accuracy_test",
    "make_cadam_hump",
    "make_dambreak_plane",
    "make_lake_at_rest",
    "make_runup",
    "mean_velocity",
    "minmod",
    "physical_flux",
    "slope",
    "source_quadrature",
    "wetdry_correct",
]
