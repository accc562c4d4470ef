"""Root finding on a contour ``f(x) = L`` by randomized bracketing and bisection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BracketInvalidError,
    ConfigurationError,
    ConvergenceFailureError,
    InsufficientRootsError,
)
from .objective import Objective
from .seeding import make_rng


@dataclass(frozen=True)
class Root:
    point: tuple[float, ...]
    residual: float
    iterate_index: int = 0
    root_index: int = 0

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.point, dtype=float)


@dataclass(frozen=True)
class RootFindConfig:
    """Settings for :func:`sample_roots`.

    ``max_bracket_attempts`` and ``dedup_radius`` default to ``None``, which
    resolves to ``200 * n_roots`` draws and ``1e-6`` times the box diagonal.
    """

    n_roots: int = 32
    root_tolerance: float = 1e-10
    max_bracket_attempts: Optional[int] = None
    dedup_radius: Optional[float] = None
    rng_seed: int = 0
    max_bisect_iter: int = 200

    def __post_init__(self):
        if self.n_roots < 2:
            raise ConfigurationError("n_roots must be >= 2")
        if not self.root_tolerance > 0:
            raise ConfigurationError("root_tolerance must be positive")
        if self.dedup_radius is not None and self.dedup_radius < 0:
            raise ConfigurationError("dedup_radius must be non-negative")
        if self.max_bracket_attempts is not None and self.max_bracket_attempts < 1:
            raise ConfigurationError("max_bracket_attempts must be positive")
        if self.max_bisect_iter < 1:
            raise ConfigurationError("max_bisect_iter must be positive")

    @property
    def attempts(self) -> int:
        if self.max_bracket_attempts is None:
            return 200 * self.n_roots
        return self.max_bracket_attempts

    def radius_for(self, obj: Objective) -> float:
        if self.dedup_radius is None:
            return 1e-6 * obj.domain.diagonal
        return self.dedup_radius


def _bisect_batch(obj, neg, pos, level, tol, max_iter):
    """Vectorized bisection on segments from ``neg`` (g < 0) to ``pos`` (g > 0).

    Returns ``(points, residuals, converged)``; for unconverged rows the
    point with the smallest ``|g|`` seen is returned.
    """
    m = len(neg)
    lo = np.zeros(m)
    hi = np.ones(m)
    best = neg.copy()
    best_g = np.full(m, np.inf)
    done = np.zeros(m, dtype=bool)
    stuck = np.zeros(m, dtype=bool)
    direction = pos - neg
    for _ in range(max_iter):
        active = ~(done | stuck)
        if not active.any():
            break
        idx = np.flatnonzero(active)
        mid = 0.5 * (lo[idx] + hi[idx])
        stuck[idx[(mid <= lo[idx]) | (mid >= hi[idx])]] = True
        pts = obj.domain.clip(neg[idx] + mid[:, None] * direction[idx])
        g = obj.evaluate_many(pts, check=False) - level
        better = np.abs(g) <= np.abs(best_g[idx])
        best[idx[better]] = pts[better]
        best_g[idx[better]] = g[better]
        done[idx[np.abs(g) <= tol]] = True
        below = g < 0
        lo[idx[below]] = mid[below]
        hi[idx[~below]] = mid[~below]
    return best, best_g, done


def bisect_root(
    obj: Objective,
    a,
    b,
    level: float,
    tol: float = 1e-10,
    max_iter: int = 200,
    iterate_index: int = 0,
    root_index: int = 0,
) -> Root:
    """Find a point on segment ``[a, b]`` with ``|f - level| <= tol``.

    >>> from contourmin.objective import make_benchmark
    >>> r = bisect_root(make_benchmark("sphere_3"), (0, 0, 0), (2, 0, 0), 3.0)
    >>> round(r.point[0], 7)
    1.7320508
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ga = obj(a) - level
    if abs(ga) <= tol:
        return Root(tuple(a.tolist()), float(ga), iterate_index, root_index)
    gb = obj(b) - level
    if abs(gb) <= tol:
        return Root(tuple(b.tolist()), float(gb), iterate_index, root_index)
    if (ga < 0) == (gb < 0):
        raise BracketInvalidError(
            f"f - level has the same sign at both endpoints ({ga:.3g}, {gb:.3g})"
        )
    neg, pos = (a, b) if ga < 0 else (b, a)
    pts, res, ok = _bisect_batch(obj, neg[None], pos[None], level, tol, max_iter)
    if not ok[0]:
        raise ConvergenceFailureError(
            f"bisection did not reach |f - level| <= {tol} in {max_iter} halvings",
            best=tuple(pts[0].tolist()),
            residual=float(res[0]),
        )
    return Root(tuple(pts[0].tolist()), float(res[0]), iterate_index, root_index)


def _dedup(points, residuals, radius):
    keep: list[int] = []
    for i in range(len(points)):
        clash = None
        for pos, j in enumerate(keep):
            if np.linalg.norm(points[i] - points[j]) <= radius:
                clash = pos
                break
        if clash is None:
            keep.append(i)
        elif abs(residuals[i]) < abs(residuals[keep[clash]]):
            keep[clash] = i
    return keep


def _local_box(obj, center, half_width):
    lo = np.maximum(center - half_width, obj.domain.lower)
    hi = np.minimum(center + half_width, obj.domain.upper)
    return lo, hi


def sample_roots(
    obj: Objective,
    level: float,
    cfg: RootFindConfig,
    rng: Optional[np.random.Generator] = None,
    anchor=None,
    iterate_index: int = 0,
) -> list[Root]:
    """Locate up to ``cfg.n_roots`` separated roots of ``f(x) = level``.

    Uniform draws over the box are split into a below pool (``f < L - tol``)
    and an above pool (``f > L + tol``). When the box draws miss the
    sublevel set, ``anchor`` (a point with ``f(anchor) == level``, normally
    the current iterate) seeds a search in boxes of shrinking width around
    it. The deepest below points are paired with above points in draw order
    and each pair is bisected. Roots closer than the dedup radius are merged.

    Raises :class:`InsufficientRootsError` if fewer than two roots survive.
    """
    if rng is None:
        rng = make_rng(cfg.rng_seed)
    tol = cfg.root_tolerance
    n = cfg.n_roots
    budget = cfg.attempts
    batch = max(2 * n, 16)
    n_seeds = min(8, n)

    below_pts, below_vals, above_pts = [], [], []
    n_below = n_above = 0
    used = 0

    def classify(x):
        nonlocal n_below, n_above, used
        v = obj.evaluate_many(x, check=False)
        used += len(x)
        lo_mask = v < level - tol
        hi_mask = v > level + tol
        below_pts.append(x[lo_mask])
        below_vals.append(v[lo_mask])
        above_pts.append(x[hi_mask])
        n_below += int(lo_mask.sum())
        n_above += int(hi_mask.sum())
        return int(lo_mask.sum())

    global_budget = max(budget // 4, 1)
    while used < global_budget and (n_above < n or n_below < n_seeds):
        classify(obj.domain.uniform(rng, min(batch, global_budget - used)))

    if n_below < n_seeds and anchor is not None:
        center = np.asarray(anchor, dtype=float)
        width = 0.5 * float(np.max(np.subtract(obj.domain.upper, obj.domain.lower)))
        floor = 1e-14 * obj.domain.diagonal
        while used < budget and n_below < n_seeds and width > floor:
            lo, hi = _local_box(obj, center, width)
            x = rng.uniform(lo, hi, size=(min(batch, budget - used), obj.dim))
            if classify(x) == 0:
                width *= 0.5

    if n_below == 0 or n_above == 0:
        raise InsufficientRootsError(
            f"no bracket at level {level!r}: {n_below} below, {n_above} above "
            f"after {used} draws",
            found=0,
        )

    below = np.concatenate(below_pts)
    below_v = np.concatenate(below_vals)
    above = np.concatenate(above_pts)
    seeds = below[np.argsort(below_v, kind="stable")[:n_seeds]]
    j = np.arange(n)
    neg = seeds[j % len(seeds)]
    pos = above[j % len(above)]

    pts, res, ok = _bisect_batch(obj, neg, pos, level, tol, cfg.max_bisect_iter)
    pts, res = pts[ok], res[ok]
    keep = _dedup(pts, res, cfg.radius_for(obj))
    if len(keep) < 2:
        raise InsufficientRootsError(
            f"only {len(keep)} separated root(s) at level {level!r}", found=len(keep)
        )
    return [
        Root(tuple(pts[i].tolist()), float(res[i]), iterate_index, k)
        for k, i in enumerate(keep)
    ]
