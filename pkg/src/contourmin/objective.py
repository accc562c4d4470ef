"""Objective functions over box domains, plus the built-in benchmarks."""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainViolationError, UnknownBenchmarkError


@dataclass(frozen=True)
class BoxDomain:
    """Axis-aligned box ``lower[k] <= x[k] <= upper[k]``."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) == 0 or len(lower) != len(upper):
            raise ValueError("lower and upper must be non-empty and of equal length")
        if not all(lo < hi for lo, hi in zip(lower, upper)):
            raise ValueError(f"degenerate box: lower={lower} upper={upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(np.subtract(self.upper, self.lower)))

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            return False
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def clip(self, x):
        return np.clip(x, self.lower, self.upper)

    def uniform(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(size, self.dim))


class Objective:
    """A scalar field ``f: box -> R`` with an evaluation counter.

    ``func`` must accept an array of shape ``(m, dim)`` and return shape
    ``(m,)``. Row results must not depend on the other rows in the batch,
    so single-point and batched calls agree bit for bit.
    """

    def __init__(
        self,
        func: Callable[[np.ndarray], np.ndarray],
        domain: BoxDomain,
        name: str,
        known_minimum: Optional[tuple[tuple[float, ...], float]] = None,
    ):
        self.func = func
        self.domain = domain
        self.name = name
        if known_minimum is not None:
            point, value = known_minimum
            known_minimum = (tuple(float(v) for v in point), float(value))
        self.known_minimum = known_minimum
        self._evaluations = 0
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Objective(name={self.name!r}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def evaluations(self) -> int:
        return self._evaluations

    def reset_evaluations(self) -> None:
        with self._lock:
            self._evaluations = 0

    def _count(self, n: int) -> None:
        with self._lock:
            self._evaluations += n

    def __call__(self, x) -> float:
        return evaluate(self, x)

    def evaluate_many(self, points, check: bool = True) -> np.ndarray:
        """Evaluate a batch of points of shape ``(m, dim)``."""
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.dim:
            raise DomainViolationError(
                f"expected points of shape (m, {self.dim}), got {points.shape}"
            )
        if check and points.size:
            inside = np.all(
                (points >= self.domain.lower) & (points <= self.domain.upper), axis=1
            )
            if not inside.all():
                bad = points[np.argmin(inside)]
                raise DomainViolationError(
                    f"point {bad.tolist()} lies outside the domain of {self.name}"
                )
        self._count(len(points))
        if not len(points):
            return np.empty(0)
        return np.asarray(self.func(points), dtype=float)


def evaluate(obj: Objective, x) -> float:
    """Return ``f(x)``; raises :class:`DomainViolationError` outside the box."""
    x = np.asarray(x, dtype=float)
    if x.shape != (obj.dim,):
        raise DomainViolationError(f"expected a point of length {obj.dim}, got shape {x.shape}")
    return float(obj.evaluate_many(x[None, :])[0])


# Benchmark formulas. Columns are accumulated explicitly so each row's value
# is independent of the batch layout.


def sphere(x: np.ndarray) -> np.ndarray:
    out = np.zeros(x.shape[0])
    for k in range(x.shape[1]):
        out += x[:, k] ** 2
    return out


def mccormick(x: np.ndarray) -> np.ndarray:
    a, b = x[:, 0], x[:, 1]
    return np.sin(a + b) + (a - b) ** 2 - 1.5 * a + 2.5 * b + 1.0


def ackley(x: np.ndarray) -> np.ndarray:
    d = x.shape[1]
    sq = np.zeros(x.shape[0])
    cs = np.zeros(x.shape[0])
    for k in range(d):
        sq += x[:, k] ** 2
        cs += np.cos(2.0 * math.pi * x[:, k])
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(sq / d))
        - np.exp(cs / d)
        + math.e
        + 20.0
    )


BENCHMARK_NAMES = ("sphere_2", "sphere_3", "mccormick", "ackley")

_SPHERE = re.compile(r"sphere_(\d+)$")


def make_benchmark(name: str) -> Objective:
    """Build a fresh benchmark objective by its CLI name.

    ``sphere_<d>`` accepts any ``d >= 1``; ``mccormick`` and ``ackley`` are 2-D.
    """
    m = _SPHERE.match(name)
    if m:
        d = int(m.group(1))
        if d < 1:
            raise UnknownBenchmarkError(f"sphere dimension must be >= 1, got {d}")
        return Objective(
            sphere,
            BoxDomain((-5.0,) * d, (5.0,) * d),
            name,
            known_minimum=((0.0,) * d, 0.0),
        )
    if name == "mccormick":
        return Objective(
            mccormick,
            BoxDomain((-1.5, -3.0), (4.0, 4.0)),
            name,
            known_minimum=((-0.54719, -1.54719), -1.9133),
        )
    if name == "ackley":
        return Objective(
            ackley,
            BoxDomain((-5.0, -5.0), (5.0, 5.0)),
            name,
            known_minimum=((0.0, 0.0), 0.0),
        )
    raise UnknownBenchmarkError(
        f"unknown benchmark {name!r}; expected one of sphere_<d>, mccormick, ackley"
    )
