"""Empirical contraction diagnostics and a grid-search oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .engine import RunResult
from .errors import EmptySetError, GridBudgetError, InsufficientTraceError
from .objective import Objective

DEFAULT_GRID_BUDGET = 1_100_000_000


@dataclass(frozen=True)
class ContractionReport:
    """Per-iterate diameters of the sampled root sets.

    The root set is a finite proxy for the contour; ratios are therefore
    noisy and ``geometric_fit`` (slope of ``log D_i`` against ``i``) is the
    better summary of the trend.
    """

    diameters: tuple[float, ...]
    ratios: tuple[float, ...]
    max_ratio: float
    geometric_fit: float
    proxy: str = "root-set diameter"


def diameter(points: Sequence) -> float:
    """Largest pairwise Euclidean distance; 0 for a single point."""
    if len(points) == 0:
        raise EmptySetError("diameter of an empty set is undefined")
    pts = np.asarray([getattr(p, "point", p) for p in points], dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    best = 0.0
    for i in range(len(pts) - 1):
        d = np.sqrt(((pts[i + 1 :] - pts[i]) ** 2).sum(axis=1)).max()
        best = max(best, float(d))
    return best


def contraction_report(result: RunResult) -> ContractionReport:
    diams = [diameter(rec.roots) for rec in result.iterations if rec.roots]
    if len(diams) < 2:
        raise InsufficientTraceError(
            f"need at least 2 iterates with roots, got {len(diams)}"
        )
    ratios = [b / a if a > 0 else math.inf for a, b in zip(diams, diams[1:])]
    logs = np.log(np.maximum(diams, np.finfo(float).tiny))
    slope = float(np.polyfit(np.arange(len(diams)), logs, 1)[0])
    return ContractionReport(
        diameters=tuple(diams),
        ratios=tuple(ratios),
        max_ratio=max(ratios),
        geometric_fit=slope,
    )


def brute_force_min(
    obj: Objective, resolution: int, budget: int = DEFAULT_GRID_BUDGET
) -> tuple[tuple[float, ...], float]:
    """Minimize over the regular grid with ``resolution`` nodes per axis.

    Endpoints are included; nodes are visited in row-major order and the
    first occurrence wins ties.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    total = resolution**obj.dim
    if total > budget:
        raise GridBudgetError(f"grid of {total} points exceeds the budget of {budget}")
    axes = [np.linspace(lo, hi, resolution) for lo, hi in zip(obj.domain.lower, obj.domain.upper)]
    d = obj.dim
    if d > 1:
        tail = np.stack([m.ravel() for m in np.meshgrid(*axes[1:], indexing="ij")], axis=1)
    else:
        tail = np.empty((1, 0))
    rest = len(tail)
    rows = max(1, 1_000_000 // rest)
    # column-major buffer: only the leading coordinate changes between chunks
    buf = np.empty((rows * rest, d), order="F")
    buf[:, 1:] = np.tile(tail, (rows, 1))
    best_val = math.inf
    best_pt = None
    for start in range(0, resolution, rows):
        head = axes[0][start : start + rows]
        pts = buf[: len(head) * rest]
        pts[:, 0] = np.repeat(head, rest)
        vals = obj.evaluate_many(pts, check=False)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val = float(vals[k])
            best_pt = tuple(pts[k].tolist())
    return best_pt, best_val
