"""Derivative-free global minimization by contour shrinking.

Each iteration cuts the objective at the height of the current point,
samples roots on that contour, groups them into locally convex subsets with
a randomized segment test, and moves to the lowest subset average.
"""

from .analysis import ContractionReport, brute_force_min, contraction_report, diameter
from .decompose import (
    ConvexityTestConfig,
    DisjointSet,
    Partition,
    group_roots,
    same_convex_subset,
    subset_average,
)
from .engine import IterationRecord, RunConfig, RunResult, Status, optimize, step
from .errors import *  # noqa: F401,F403
from .levelset import Root, RootFindConfig, bisect_root, sample_roots
from .objective import BENCHMARK_NAMES, BoxDomain, Objective, evaluate, make_benchmark

__version__ = "0.1.0"
