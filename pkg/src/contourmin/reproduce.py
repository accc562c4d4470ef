"""Benchmark reproduction runs with pass/fail thresholds."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .analysis import brute_force_min, contraction_report
from .engine import RunConfig, RunResult, optimize
from .errors import InsufficientTraceError, UnknownBenchmarkError
from .objective import make_benchmark

REFERENCE_STARTS = {
    "sphere_3": (1.0, 1.0, 1.0),
    "mccormick": (2.0, 2.0),
    "ackley": (2.0, 2.0),
}

# first-row contour heights of the reference runs
REFERENCE_FIRST_LEVEL = {
    "sphere_3": (3.0, 1e-9),
    "mccormick": (2.2431975047, 1e-9),
    "ackley": (6.59359908, 1e-8),
}

RUNTIME_LIMIT = {"sphere_3": 5.0, "mccormick": 10.0, "ackley": 30.0}

MCCORMICK_MIN = ((-0.54719, -1.54719), -1.9133)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


@dataclass
class Reproduction:
    benchmark: str
    config: RunConfig
    result: RunResult
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def strict_descent_violations(result: RunResult) -> int:
    levels = result.levels + [result.minimum_value]
    return sum(1 for a, b in zip(levels, levels[1:]) if not b < a)


def reference_config(name: str, seed: int = 0, x0=None) -> RunConfig:
    if name not in REFERENCE_STARTS:
        raise UnknownBenchmarkError(f"no reference run for {name!r}; choose from {sorted(REFERENCE_STARTS)}")
    return RunConfig(name, REFERENCE_STARTS[name] if x0 is None else x0, master_seed=seed)


def reproduce(
    name: str,
    seed: int = 0,
    oracle_resolution: int = 1001,
    robustness_starts: int = 20,
) -> Reproduction:
    cfg = reference_config(name, seed)
    obj = make_benchmark(name)
    t0 = time.perf_counter()
    result = optimize(obj, cfg)
    rep = Reproduction(name, cfg, result)
    checks = rep.checks

    target, tol = REFERENCE_FIRST_LEVEL[name]
    first = result.iterations[0].level if result.iterations else math.nan
    checks.append(Check("first level", abs(first - target) <= tol, f"{first!r} vs {target} (tol {tol:g})"))

    x = np.asarray(result.minimizer)
    if name == "sphere_3":
        norm = float(np.linalg.norm(x))
        checks.append(Check("minimizer norm", norm <= 0.05, f"|x*| = {norm:.3g} <= 0.05"))
        n = len(result.iterations)
        checks.append(Check("iterations", n <= 15, f"{n} <= 15"))
    elif name == "mccormick":
        (p, v) = MCCORMICK_MIN
        dist = float(np.linalg.norm(x - np.asarray(p)))
        checks.append(Check("minimizer distance", dist <= 1e-2, f"{dist:.3g} <= 1e-2"))
        err = abs(result.minimum_value - v)
        checks.append(Check("minimum value", err <= 1e-3, f"|f(x*) - ({v})| = {err:.3g} <= 1e-3"))
    elif name == "ackley":
        fx = result.minimum_value
        checks.append(Check("minimum value", fx <= 1e-3, f"f(x*) = {fx:.3g} <= 1e-3"))

    violations = strict_descent_violations(result)
    elapsed = time.perf_counter() - t0

    if name == "ackley" and robustness_starts:
        rng = np.random.default_rng([seed, 20])
        starts = obj.domain.uniform(rng, robustness_starts)
        worst = -math.inf
        for k, x0 in enumerate(starts):
            t1 = time.perf_counter()
            r = optimize(make_benchmark(name), reference_config(name, seed + k + 1, tuple(x0)))
            elapsed += time.perf_counter() - t1
            worst = max(worst, r.minimum_value)
            violations += strict_descent_violations(r)
        checks.append(
            Check(
                "random starts",
                worst <= 1e-2,
                f"worst f(x*) over {robustness_starts} starts = {worst:.3g} <= 1e-2",
            )
        )

    checks.append(Check("strict descent", violations == 0, f"{violations} violations"))
    limit = RUNTIME_LIMIT[name]
    checks.append(Check("runtime", elapsed < limit, f"{elapsed:.2f}s < {limit:g}s"))

    try:
        report = contraction_report(result)
        shrink = report.diameters[-1] / report.diameters[0]
        checks.append(
            Check(
                "contraction",
                report.geometric_fit < 0 and shrink <= 0.01,
                f"fit slope {report.geometric_fit:.3g} < 0, final/initial diameter {shrink:.3g} <= 0.01",
            )
        )
    except InsufficientTraceError as exc:
        checks.append(Check("contraction", False, str(exc)))

    if oracle_resolution:
        _, grid_value = brute_force_min(make_benchmark(name), oracle_resolution)
        gap = abs(result.minimum_value - grid_value)
        checks.append(
            Check("oracle", gap <= 1e-3, f"|f(x*) - grid min({oracle_resolution})| = {gap:.3g} <= 1e-3")
        )
    return rep
