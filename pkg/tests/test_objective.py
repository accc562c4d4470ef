import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contourmin.errors import DomainViolationError, UnknownBenchmarkError
from contourmin.objective import BoxDomain, Objective, evaluate, make_benchmark, sphere


@pytest.mark.parametrize(
    "name, x, expected, tol",
    [
        # first contour heights of the reference runs
        ("sphere_3", (1, 1, 1), 3.0000, 1e-6),
        ("mccormick", (2, 2), 2.2431975047, 1e-6),
        ("ackley", (2, 2), 6.59359908, 1e-6),
        ("sphere_3", (0, 0, 0), 0.0, 0.0),
        ("ackley", (0, 0), 0.0, 1e-12),
    ],
)
def test_evaluate_reference_values(name, x, expected, tol):
    assert abs(evaluate(make_benchmark(name), x) - expected) <= tol


@pytest.mark.parametrize("name", ["sphere_2", "sphere_3", "mccormick", "ackley"])
def test_known_minimum_matches_formula(name):
    obj = make_benchmark(name)
    point, value = obj.known_minimum
    assert abs(obj(point) - value) <= 1e-4
    assert obj.domain.contains(point)


def test_benchmark_boxes():
    assert make_benchmark("sphere_3").domain == BoxDomain((-5,) * 3, (5,) * 3)
    assert make_benchmark("ackley").domain == BoxDomain((-5, -5), (5, 5))
    mc = make_benchmark("mccormick")
    assert mc.domain == BoxDomain((-1.5, -3.0), (4.0, 4.0))
    assert mc.known_minimum == ((-0.54719, -1.54719), -1.9133)
    assert make_benchmark("sphere_7").dim == 7


@pytest.mark.parametrize("name", ["rosenbrock", "sphere", "sphere_0", "sphere_x"])
def test_unknown_benchmark(name):
    with pytest.raises(UnknownBenchmarkError):
        make_benchmark(name)


def test_out_of_domain_point_rejected():
    obj = make_benchmark("ackley")
    with pytest.raises(DomainViolationError):
        evaluate(obj, (100, 100))
    with pytest.raises(DomainViolationError):
        evaluate(obj, (0, 0, 0))
    # boundary is part of the closed box
    assert math.isfinite(evaluate(obj, (5, -5)))


def test_box_invariants():
    with pytest.raises(ValueError):
        BoxDomain((0, 1), (1, 1))
    with pytest.raises(ValueError):
        BoxDomain((0,), (1, 2))


def test_batch_and_single_evaluation_agree_bitwise():
    rng = np.random.default_rng(3)
    for name in ["sphere_3", "mccormick", "ackley"]:
        obj = make_benchmark(name)
        pts = obj.domain.uniform(rng, 257)
        batch = obj.evaluate_many(pts)
        single = np.array([evaluate(obj, p) for p in pts])
        assert np.array_equal(batch, single)


def test_evaluation_counter_is_thread_safe():
    obj = make_benchmark("sphere_2")
    pts = np.zeros((10, 2))

    def work():
        for _ in range(200):
            obj.evaluate_many(pts)
            obj((0.5, 0.5))

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert obj.evaluations == 8 * 200 * 11
    obj.reset_evaluations()
    assert obj.evaluations == 0


def test_custom_objective():
    obj = Objective(lambda x: np.abs(x).sum(axis=1), BoxDomain((-1,), (1,)), "abs")
    assert obj((-0.25,)) == 0.25
    assert obj.known_minimum is None


coords = st.floats(-5, 5, allow_nan=False)
points3 = st.tuples(coords, coords, coords)


@settings(max_examples=300, deadline=None)
@given(points3, points3, st.floats(0, 1))
def test_sphere_is_convex(x, y, lam):
    x, y = np.array(x), np.array(y)
    f = lambda p: sphere(p[None])[0]
    assert f(lam * x + (1 - lam) * y) <= lam * f(x) + (1 - lam) * f(y) + 1e-12
