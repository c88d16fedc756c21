"""Transitive Lie algebras of vector fields on the plane and their lifts to C^2 x C.

Exact arithmetic over the Gaussian rationals throughout.  The main entry
points are re-exported here; see the submodules for the details.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .catalog import (
    enumerate_instances,
    free_constants,
    get_entry,
    instantiate,
    instantiate_text,
    parse_instance,
)
from .cohomology import compute_h1, default_space, is_coboundary
from .expoly import ExpPoly, parse
from .gq import GaussianRational
from .groebner import solve_constant_system
from .liealg import classify_lift_type, find_normalized_pair, structure_constants
from .liftsolver import (
    ansatz_witness,
    metric_witness,
    normalize_lift,
    solve_ansatz_lifts,
    solve_lifts,
    solve_metric_lifts,
)
from .vfield import FiberMap, VectorField, bracket, parse_field, pushforward

__all__ = [
    "BACKEND",
    "ExpPoly",
    "FiberMap",
    "GaussianRational",
    "VectorField",
    "ansatz_witness",
    "bracket",
    "classify_lift_type",
    "compute_h1",
    "default_space",
    "enumerate_instances",
    "find_normalized_pair",
    "free_constants",
    "get_entry",
    "instantiate",
    "instantiate_text",
    "is_coboundary",
    "metric_witness",
    "normalize_lift",
    "parse",
    "parse_field",
    "parse_instance",
    "pushforward",
    "solve_ansatz_lifts",
    "solve_constant_system",
    "solve_lifts",
    "solve_metric_lifts",
    "structure_constants",
]
