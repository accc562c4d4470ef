import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contourmin.decompose import (
    ConvexityTestConfig,
    DisjointSet,
    Partition,
    group_roots,
    same_convex_subset,
    subset_average,
)
from contourmin.errors import ConfigurationError, EmptySetError
from contourmin.levelset import Root, RootFindConfig, bisect_root, sample_roots
from contourmin.objective import BoxDomain, Objective, make_benchmark

ACKLEY_L0 = 6.59359908


def dense_scan_max(obj, p, q, n=10_000):
    """Brute-force oracle: max of f over n interior points of segment [p, q]."""
    t = np.linspace(0.0, 1.0, n + 2)[1:-1]
    a, b = np.asarray(p.point), np.asarray(q.point)
    return obj.evaluate_many(t[:, None] * a + (1 - t[:, None]) * b).max()


def two_bowls():
    def f(x):
        return np.minimum(((x - [2.0, 0.0]) ** 2).sum(axis=1), ((x + [2.0, 0.0]) ** 2).sum(axis=1))

    return Objective(f, BoxDomain((-4, -4), (4, 4)), "two_bowls")


def is_partition(p: Partition, n: int) -> bool:
    flat = [i for s in p.subsets for i in s]
    return sorted(flat) == list(range(n)) and all(p.subsets) and len(p.representative) == n


def test_sphere_roots_share_a_subset():
    obj = make_benchmark("sphere_3")
    roots = sample_roots(obj, 3.0, RootFindConfig(n_roots=8, rng_seed=4), anchor=(1, 1, 1))
    cfg = ConvexityTestConfig()
    for p, q in itertools.combinations(roots, 2):
        assert same_convex_subset(obj, p, q, 3.0, cfg)


def test_ackley_segment_through_basin_passes():
    # Projecting (+-2.6, 0) onto the initial contour lands at (+-2.2602, 0).
    # A dense scan shows the whole segment between them is below the level,
    # so the test must accept the pair for every seed.
    obj = make_benchmark("ackley")
    p = bisect_root(obj, (2.6, 0), (0, 0), ACKLEY_L0)
    q = bisect_root(obj, (-2.6, 0), (0, 0), ACKLEY_L0)
    assert p.point[0] == pytest.approx(2.2602398, abs=1e-6)
    assert dense_scan_max(obj, p, q) < ACKLEY_L0
    for seed in range(10):
        assert same_convex_subset(obj, p, q, ACKLEY_L0, ConvexityTestConfig(rng_seed=seed))


def test_ackley_segment_across_ridge_fails():
    # Both roots border the local maximum near (2.5, 0.5); a dense scan puts
    # every interior point of the segment above the level.
    obj = make_benchmark("ackley")
    p = bisect_root(obj, (2.5, 0.5), (2.0, 0.0), ACKLEY_L0)
    q = bisect_root(obj, (2.5, 0.5), (2.0, 1.0), ACKLEY_L0)
    t = np.linspace(0, 1, 10_002)[1:-1]
    seg = t[:, None] * np.array(p.point) + (1 - t[:, None]) * np.array(q.point)
    assert (obj.evaluate_many(seg) >= ACKLEY_L0).all()
    for seed in range(10):
        assert not same_convex_subset(obj, p, q, ACKLEY_L0, ConvexityTestConfig(rng_seed=seed))


def test_identical_roots_are_same_subset():
    obj = make_benchmark("ackley")
    r = Root((1.0, 1.0), 1e-11, 0, 0)
    assert same_convex_subset(obj, r, r, obj(r.point) - 1e-11, ConvexityTestConfig())


def test_pair_test_is_symmetric():
    obj = make_benchmark("ackley")
    roots = sample_roots(obj, ACKLEY_L0, RootFindConfig(n_roots=16, rng_seed=9), anchor=(2, 2))
    cfg = ConvexityTestConfig(rng_seed=77)
    for p, q in itertools.combinations(roots, 2):
        assert same_convex_subset(obj, p, q, ACKLEY_L0, cfg) == same_convex_subset(
            obj, q, p, ACKLEY_L0, cfg
        )


def test_rejections_are_never_false_negatives():
    # A rejection is backed by a sampled point at or above the level, so the
    # dense-scan oracle must also find one.
    obj = make_benchmark("ackley")
    roots = sample_roots(obj, ACKLEY_L0, RootFindConfig(n_roots=16, rng_seed=0), anchor=(2, 2))
    cfg = ConvexityTestConfig(rng_seed=0)
    rejected = 0
    for p, q in itertools.combinations(roots, 2):
        if not same_convex_subset(obj, p, q, ACKLEY_L0, cfg):
            rejected += 1
            assert dense_scan_max(obj, p, q) >= ACKLEY_L0
    assert rejected > 0


def test_more_segment_samples_reject_more_pairs():
    obj = make_benchmark("ackley")
    roots = sample_roots(obj, ACKLEY_L0, RootFindConfig(n_roots=16, rng_seed=0), anchor=(2, 2))
    counts = []
    for n in (1, 20, 500):
        cfg = ConvexityTestConfig(n_segment_samples=n, rng_seed=0)
        counts.append(
            sum(not same_convex_subset(obj, p, q, ACKLEY_L0, cfg) for p, q in itertools.combinations(roots, 2))
        )
    assert counts[0] < counts[1] < counts[2]


def test_group_roots_sphere_single_subset():
    obj = make_benchmark("sphere_3")
    roots = sample_roots(obj, 3.0, RootFindConfig(n_roots=8, rng_seed=4), anchor=(1, 1, 1))
    part = group_roots(obj, roots, 3.0, ConvexityTestConfig())
    assert part.subsets == (tuple(range(8)),)
    assert len(set(part.representative)) == 1


def test_group_roots_single_root():
    obj = make_benchmark("sphere_3")
    part = group_roots(obj, [Root((1.0, 1.0, 1.0), 0.0)], 3.0, ConvexityTestConfig())
    assert part.subsets == ((0,),)
    assert part.representative == (0,)


def test_group_roots_separates_disjoint_basins():
    obj = two_bowls()
    roots = [
        Root((1.0, 0.0), 0.0, 0, 0),
        Root((-3.0, 0.0), 0.0, 0, 1),
        Root((3.0, 0.0), 0.0, 0, 2),
        Root((-1.0, 0.0), 0.0, 0, 3),
        Root((2.0, 1.0), 0.0, 0, 4),
    ]
    part = group_roots(obj, roots, 1.0, ConvexityTestConfig(rng_seed=3))
    assert part.subsets == ((0, 2, 4), (1, 3))
    assert is_partition(part, 5)


def test_group_roots_empty_input():
    with pytest.raises(EmptySetError):
        group_roots(make_benchmark("sphere_2"), [], 1.0, ConvexityTestConfig())


def test_group_roots_deterministic_and_order_independent():
    obj = make_benchmark("ackley")
    roots = sample_roots(obj, ACKLEY_L0, RootFindConfig(n_roots=16, rng_seed=1), anchor=(2, 2))
    cfg = ConvexityTestConfig(rng_seed=5)
    a = group_roots(obj, roots, ACKLEY_L0, cfg)
    assert a == group_roots(obj, roots, ACKLEY_L0, cfg)
    assert is_partition(a, len(roots))
    # pairwise outcomes from the batch path equal the single-pair path
    ds = DisjointSet(len(roots))
    for i, j in itertools.combinations(range(len(roots)), 2):
        if same_convex_subset(obj, roots[i], roots[j], ACKLEY_L0, cfg):
            ds.union(i, j)
    assert Partition.from_disjoint_set(ds) == a


def test_convexity_config_validation():
    with pytest.raises(ConfigurationError):
        ConvexityTestConfig(n_segment_samples=0)


@pytest.mark.parametrize(
    "points, expected",
    [
        ([(math.sqrt(3), 0, 0), (-math.sqrt(3), 0, 0)], (0, 0, 0)),
        ([(0.25, -4.0)], (0.25, -4.0)),
        ([(1, 1), (3, 5)], (2, 3)),
    ],
)
def test_subset_average(points, expected):
    roots = [Root(tuple(map(float, p)), 0.0) for p in points]
    assert np.array_equal(subset_average(roots), np.array(expected, dtype=float))


def test_subset_average_empty():
    with pytest.raises(EmptySetError):
        subset_average([])


def components(n, edges):
    """Connected components by depth-first search (oracle for DisjointSet)."""
    adj = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, out = set(), []
    for s in range(n):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v] - seen:
                seen.add(w)
                stack.append(w)
        out.append(sorted(comp))
    return sorted(out)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 30).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=60))))
def test_disjoint_set_matches_graph_components(case):
    n, edges = case
    ds = DisjointSet(n)
    for a, b in edges:
        ds.union(a, b)
    assert ds.groups() == components(n, edges)
    part = Partition.from_disjoint_set(ds)
    assert is_partition(part, n)
    for s in part.subsets:
        assert len({part.representative[i] for i in s}) == 1


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 20.0), st.integers(0, 2**32 - 1))
def test_jensen_descent_on_sphere_subsets(level, seed):
    obj = make_benchmark("sphere_3")
    anchor = np.array([0.0, math.sqrt(level), 0.0])
    roots = sample_roots(obj, level, RootFindConfig(n_roots=6, rng_seed=seed), anchor=anchor)
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, len(roots) + 1))
    subset = [roots[i] for i in rng.choice(len(roots), size=k, replace=False)]
    assert obj(subset_average(subset)) < level
