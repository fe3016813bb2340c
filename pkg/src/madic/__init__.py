"""Exact finite-depth measures on the m-adic sequence space and their density oscillation."""

from .core import AlphaParam, Interval, Prefix, children, distance, first_difference
from .density import (DensityProfile, OscillationReport, brute_force_mass, density_estimates, f_profile,
                      oscillation_report)
from .exact import Surd, iroot
from .measure import (BranchingSpec, GreedyResult, NotUniform, TreeMeasure, UniformMeasure, block_lift,
                      build_greedy, build_random, build_uniform, is_uniform, mass_of, sample_path, validate)
from .serialization import deserialize, load, save, serialize
from .theory import (MarkClass, MarkTable, avoidance_decay_check, build_marked_sets, classify_children,
                     cross_check_bounds, dirichlet_select, dirichlet_tau, floor_ceil_power, lower_bound,
                     upper_bound)

__version__ = "0.1.0"

__all__ = [
    "AlphaParam", "Interval", "Prefix", "children", "distance", "first_difference",
    "DensityProfile", "OscillationReport", "brute_force_mass", "density_estimates", "f_profile",
    "oscillation_report",
    "Surd", "iroot",
    "BranchingSpec", "GreedyResult", "NotUniform", "TreeMeasure", "UniformMeasure", "block_lift",
    "build_greedy", "build_random", "build_uniform", "is_uniform", "mass_of", "sample_path", "validate",
    "deserialize", "load", "save", "serialize",
    "MarkClass", "MarkTable", "avoidance_decay_check", "build_marked_sets", "classify_children",
    "cross_check_bounds", "dirichlet_select", "dirichlet_tau", "floor_ceil_power", "lower_bound",
    "upper_bound",
]
