"""Simulation and stability-bound certification for 1-D parabolic PDEs.

The package pairs a finite-difference method-of-lines solver for nonlinear
parabolic problems with boundary disturbances against closed-form ISS/iISS
estimates (plain, weighted, and Orlicz-class variants), and certifies on
simulated trajectories that each estimate holds checkpoint by checkpoint.
"""

__version__ = "0.1.0"

from . import bounds, harness, lyapunov, norms, presets, report, solver, youngfn
from .norms import BoundaryPair, GridFunction1D, TimeSeries
from .presets import Scenario, scenario_from_dict, scenario_from_file
from .solver import DirichletBC, PdeProblem, RobinBC, SolverConfig, Trajectory
from .youngfn import YoungFunction

__all__ = [
    "__version__",
    "bounds",
    "harness",
    "lyapunov",
    "norms",
    "presets",
    "report",
    "solver",
    "youngfn",
    "BoundaryPair",
    "GridFunction1D",
    "TimeSeries",
    "Scenario",
    "scenario_from_dict",
    "scenario_from_file",
    "DirichletBC",
    "PdeProblem",
    "RobinBC",
    "SolverConfig",
    "Trajectory",
    "YoungFunction",
]
