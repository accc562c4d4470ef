"""Grouping contour roots into locally convex subsets."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, EmptySetError
from .levelset import Root
from .objective import Objective
from .seeding import make_rng

_TINY = np.nextafter(0.0, 1.0)


@dataclass(frozen=True)
class ConvexityTestConfig:
    n_segment_samples: int = 20
    rng_seed: int = 0

    def __post_init__(self):
        if self.n_segment_samples < 1:
            raise ConfigurationError("n_segment_samples must be >= 1")


class DisjointSet:
    """Union-find with path compression and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def groups(self) -> list[list[int]]:
        by_root: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            by_root.setdefault(self.find(i), []).append(i)
        return sorted(by_root.values(), key=lambda g: g[0])


@dataclass(frozen=True)
class Partition:
    """Subsets of root positions; ``representative[i]`` is the set root of ``i``."""

    subsets: tuple[tuple[int, ...], ...]
    representative: tuple[int, ...]

    @classmethod
    def from_disjoint_set(cls, ds: DisjointSet) -> "Partition":
        groups = ds.groups()
        rep = tuple(ds.find(i) for i in range(len(ds.parent)))
        return cls(tuple(tuple(g) for g in groups), rep)

    def __len__(self):
        return len(self.subsets)


def _oriented(p: Root, q: Root) -> tuple[Root, Root]:
    # lambda weights the lower-indexed root, so (p, q) and (q, p) sample the same points
    if (q.root_index, q.point) < (p.root_index, p.point):
        return q, p
    return p, q


def _pair_rng(cfg: ConvexityTestConfig, p: Root, q: Root) -> np.random.Generator:
    j, k = sorted((p.root_index, q.root_index))
    return make_rng(cfg.rng_seed, p.iterate_index, j, k)


def _lambdas(rng: np.random.Generator, n: int) -> np.ndarray:
    # open interval: at the endpoints the segment sits on the contour itself
    return rng.uniform(_TINY, 1.0, size=n)


def same_convex_subset(
    obj: Objective,
    p: Root,
    q: Root,
    level: float,
    cfg: ConvexityTestConfig,
    rng: Optional[np.random.Generator] = None,
) -> bool:
    """Randomized segment test: True iff every sampled point on ``[p, q]``
    lies strictly below ``level``.

    Without an explicit ``rng`` the stream is keyed on the unordered pair, so
    ``(p, q)`` and ``(q, p)`` give the same answer.
    """
    p, q = _oriented(p, q)
    a, b = p.array, q.array
    if np.array_equal(a, b):
        return True
    if rng is None:
        rng = _pair_rng(cfg, p, q)
    lam = _lambdas(rng, cfg.n_segment_samples)
    pts = obj.domain.clip(lam[:, None] * a + (1.0 - lam[:, None]) * b)
    return bool(np.all(obj.evaluate_many(pts, check=False) < level))


def group_roots(
    obj: Objective,
    roots: Sequence[Root],
    level: float,
    cfg: ConvexityTestConfig,
    rng: Optional[np.random.Generator] = None,
) -> Partition:
    """Test every unordered pair and take the union-find closure of passing pairs.

    All segment samples are evaluated in one batch; merging happens afterwards
    in lexicographic pair order. ``rng``, if given, replaces the per-pair
    streams with a single shared one.
    """
    n = len(roots)
    if n == 0:
        raise EmptySetError("group_roots needs at least one root")
    ds = DisjointSet(n)
    pairs = [
        (i, j)
        for i, j in combinations(range(n), 2)
        if not np.array_equal(roots[i].array, roots[j].array)
    ]
    if pairs:
        N = cfg.n_segment_samples
        pts = np.array([r.point for r in roots], dtype=float)
        lam = np.stack(
            [
                _lambdas(rng if rng is not None else _pair_rng(cfg, roots[i], roots[j]), N)
                for i, j in pairs
            ]
        )
        first = [_oriented(roots[i], roots[j])[0] is roots[i] for i, j in pairs]
        ii = np.array([i if f else j for (i, j), f in zip(pairs, first)])
        jj = np.array([j if f else i for (i, j), f in zip(pairs, first)])
        seg = lam[:, :, None] * pts[ii][:, None, :] + (1.0 - lam[:, :, None]) * pts[jj][:, None, :]
        seg = obj.domain.clip(seg.reshape(-1, obj.dim))
        vals = obj.evaluate_many(seg, check=False).reshape(len(pairs), N)
        passed = np.all(vals < level, axis=1)
        for (i, j), ok in zip(pairs, passed):
            if ok:
                ds.union(i, j)
    for i, j in combinations(range(n), 2):
        if np.array_equal(roots[i].array, roots[j].array):
            ds.union(i, j)
    return Partition.from_disjoint_set(ds)


def subset_average(roots: Sequence) -> np.ndarray:
    """Componentwise arithmetic mean of roots (or raw points)."""
    if len(roots) == 0:
        raise EmptySetError("cannot average an empty subset")
    pts = np.array([r.point if isinstance(r, Root) else r for r in roots], dtype=float)
    return pts.mean(axis=0)
