"""The contour-shrinking iteration: level, roots, convex subsets, lowest average."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import seeding
from .decompose import ConvexityTestConfig, Partition, group_roots, subset_average
from .errors import (
    ConfigurationError,
    DescentStalledError,
    InsufficientRootsError,
)
from .levelset import Root, RootFindConfig, sample_roots
from .objective import Objective, evaluate

log = logging.getLogger(__name__)


class Status(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS_REACHED = "max_iterations_reached"
    CONTOUR_COLLAPSED = "contour_collapsed"
    DESCENT_STALLED = "descent_stalled"


@dataclass(frozen=True)
class RunConfig:
    objective_name: str
    x0: tuple[float, ...]
    epsilon: float = 1e-6
    max_iterations: int = 100
    rootfind: RootFindConfig = field(default_factory=RootFindConfig)
    convexity: ConvexityTestConfig = field(default_factory=ConvexityTestConfig)
    descent_retry_limit: int = 3
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))
        if not self.epsilon > 0:
            raise ConfigurationError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be >= 1")
        if self.descent_retry_limit < 0:
            raise ConfigurationError("descent_retry_limit must be >= 0")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigurationError("master_seed must be an unsigned 64-bit integer")

    def validate_for(self, obj: Objective) -> None:
        if self.objective_name != obj.name:
            raise ConfigurationError(
                f"config targets {self.objective_name!r} but objective is {obj.name!r}"
            )
        if len(self.x0) != obj.dim:
            raise ConfigurationError(f"x0 has {len(self.x0)} components, objective has {obj.dim}")
        if not obj.domain.contains(self.x0):
            raise ConfigurationError(
                f"x0={self.x0} lies outside the box {obj.domain.lower}..{obj.domain.upper}"
            )


@dataclass(frozen=True)
class IterationRecord:
    """One application of the averaging map.

    ``subset_averages`` holds ``(point, value)`` for the subsets eligible for
    the update, those with at least two roots; ``candidate_subsets`` maps them
    back into ``partition``.
    """

    index: int
    level: float
    iterate: tuple[float, ...]
    roots: tuple[Root, ...]
    partition: Partition
    candidate_subsets: tuple[int, ...]
    subset_averages: tuple[tuple[tuple[float, ...], float], ...]
    chosen: tuple[float, ...]
    chosen_value: float
    retries: int = 0


@dataclass(frozen=True)
class RunResult:
    minimizer: tuple[float, ...]
    minimum_value: float
    iterations: tuple[IterationRecord, ...]
    status: Status
    evaluations_used: int

    @property
    def levels(self) -> list[float]:
        return [r.level for r in self.iterations]


def _attempt(obj, x_i, level, cfg, index, attempt, n_roots):
    rf = replace(
        cfg.rootfind,
        n_roots=n_roots,
        rng_seed=seeding.derive_seed(cfg.master_seed, index, attempt, seeding.ROOTS),
    )
    cv = replace(
        cfg.convexity,
        rng_seed=seeding.derive_seed(cfg.master_seed, index, attempt, seeding.CONVEXITY),
    )
    roots = sample_roots(obj, level, rf, anchor=x_i, iterate_index=index)
    partition = group_roots(obj, roots, level, cv)
    # a singleton's average is the root itself, which sits on the contour
    candidates = [k for k, s in enumerate(partition.subsets) if len(s) >= 2]
    if not candidates:
        return roots, partition, [], np.empty((0, obj.dim)), np.empty(0)
    averages = np.array(
        [subset_average([roots[j] for j in partition.subsets[k]]) for k in candidates]
    )
    values = obj.evaluate_many(averages)
    return roots, partition, candidates, averages, values


def step(obj: Objective, x_i, cfg: RunConfig, index: int = 0) -> IterationRecord:
    """Map ``x_i`` to the lowest convex-subset average of its contour roots.

    If no average lands strictly below ``f(x_i)`` the step is retried with a
    fresh random stream and twice as many roots, up to
    ``cfg.descent_retry_limit`` times.

    Raises :class:`InsufficientRootsError` when the contour collapses and
    :class:`DescentStalledError` when every retry fails to descend; no
    candidate ever beat ``x_i`` then, so the error carries ``x_i``.
    """
    x_i = np.asarray(x_i, dtype=float)
    level = evaluate(obj, x_i)
    n_roots = cfg.rootfind.n_roots
    for attempt in range(cfg.descent_retry_limit + 1):
        roots, partition, candidates, averages, values = _attempt(
            obj, x_i, level, cfg, index, attempt, n_roots
        )
        if not candidates:
            log.debug("iterate %d attempt %d: every subset is a singleton", index, attempt)
            n_roots *= 2
            continue
        k = int(np.argmin(values))
        if values[k] < level:
            return IterationRecord(
                index=index,
                level=level,
                iterate=tuple(x_i.tolist()),
                roots=tuple(roots),
                partition=partition,
                candidate_subsets=tuple(candidates),
                subset_averages=tuple(
                    (tuple(a.tolist()), float(v)) for a, v in zip(averages, values)
                ),
                chosen=tuple(averages[k].tolist()),
                chosen_value=float(values[k]),
                retries=attempt,
            )
        log.debug("iterate %d attempt %d: no descent below %r", index, attempt, level)
        n_roots *= 2
    raise DescentStalledError(
        f"no subset average below level {level!r} after "
        f"{cfg.descent_retry_limit + 1} attempts",
        best_point=tuple(x_i.tolist()),
        best_value=level,
    )


def optimize(obj: Objective, cfg: RunConfig) -> RunResult:
    """Iterate :func:`step` from ``cfg.x0`` until the update moves less than
    ``cfg.epsilon``, the contour collapses, descent stalls, or the iteration
    cap is reached."""
    cfg.validate_for(obj)
    start = obj.evaluations
    x = np.asarray(cfg.x0, dtype=float)
    value: Optional[float] = None
    records: list[IterationRecord] = []
    status = Status.MAX_ITERATIONS_REACHED
    for i in range(cfg.max_iterations):
        try:
            rec = step(obj, x, cfg, index=i)
        except InsufficientRootsError as exc:
            log.debug("contour collapsed at iterate %d: %s", i, exc)
            status = Status.CONTOUR_COLLAPSED
            break
        except DescentStalledError as exc:
            log.info("descent stalled at iterate %d: %s", i, exc)
            status = Status.DESCENT_STALLED
            break
        records.append(rec)
        x_next = np.asarray(rec.chosen)
        moved = float(np.linalg.norm(x_next - x))
        x, value = x_next, rec.chosen_value
        if moved < cfg.epsilon:
            status = Status.CONVERGED
            break
    if value is None:
        value = evaluate(obj, x)
    return RunResult(
        minimizer=tuple(x.tolist()),
        minimum_value=float(value),
        iterations=tuple(records),
        status=status,
        evaluations_used=obj.evaluations - start,
    )
