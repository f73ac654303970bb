"""Axisymmetric incompressible flow with swirl in a no-slip cylinder.

A characteristics (semi-Lagrangian) time discretization combined with a
pressure-stabilized finite-difference meridian discretization, plus the
diagnostic toolkit used to hunt for blow-up candidates: maximum-velocity
tracking, core-flow reversal, and vorticity-direction jumps near the wall.
"""

from .config import (MESH_A_TAU, MESH_B_TAU, SimConfig, apply_overrides,
                     echo_config, parse_config)
from .diagnostics import (DiagnosticsRecord, LineAxis, LineSample,
                          alignment_discontinuity, detect_turning_points,
                          record, sample_line, type_one_indicator)
from .errors import (ConfigError, DivergenceError, OutOfDomainError,
                     SolverError, StepFailure)
from .grid import (DomainVariant, GridMetrics, MeridianGrid, axial_bounds,
                   build_grid, grid_metrics)
from .harness import (ComparisonReport, MMSLevel, MMSReport, RunArtifacts,
                      compare_runs, mms_convergence, read_snapshot,
                      read_timeseries, resolve_out_dir, sweep,
                      write_run_artifacts, write_snapshot, write_timeseries)
from .initial import InitialParams, initial_field, phi
from .interp import clamp_to_domain
from .ops import (DirectionField, VorticityField, direction, divergence_field,
                  divergence_residual, kinetic_energy, max_velocity,
                  volume_weights, vorticity, weighted_l2)
from .solver import ForcingFn, SolverSettings, advance, backtrack, interpolate, run
from .state import FieldState, zero_state
from .verification import (ManufacturedCase, discrete_norms,
                           manufactured_case, pressure_l2_error)

__version__ = "0.1.0"

__all__ = [
    "MESH_A_TAU", "MESH_B_TAU", "SimConfig", "apply_overrides", "echo_config",
    "parse_config",
    "DiagnosticsRecord", "LineAxis", "LineSample", "alignment_discontinuity",
    "detect_turning_points", "record", "sample_line", "type_one_indicator",
    "ConfigError", "DivergenceError", "OutOfDomainError", "SolverError",
    "StepFailure",
    "DomainVariant", "GridMetrics", "MeridianGrid", "axial_bounds",
    "build_grid", "grid_metrics",
    "ComparisonReport", "MMSLevel", "MMSReport", "RunArtifacts",
    "compare_runs", "mms_convergence", "read_snapshot", "read_timeseries",
    "resolve_out_dir", "sweep", "write_run_artifacts", "write_snapshot",
    "write_timeseries",
    "InitialParams", "initial_field", "phi",
    "clamp_to_domain",
    "DirectionField", "VorticityField", "direction", "divergence_field",
    "divergence_residual", "kinetic_energy", "max_velocity", "volume_weights",
    "vorticity", "weighted_l2",
    "ForcingFn", "SolverSettings", "advance", "backtrack", "interpolate", "run",
    "FieldState", "zero_state",
    "ManufacturedCase", "discrete_norms", "manufactured_case",
    "pressure_l2_error",
]
