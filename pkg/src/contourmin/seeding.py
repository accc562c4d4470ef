"""Deterministic seed hierarchy.

Every random stream in a run is keyed by the master seed plus a tuple of
integers (iterate, attempt, purpose, ...), so any component can be replayed
in isolation.
"""

import numpy as np

# purpose tags used as the last key element
ROOTS = 0
CONVEXITY = 1

_MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *key: int) -> int:
    """Return a 64-bit child seed for ``(seed, *key)``."""
    ss = np.random.SeedSequence(int(seed) & _MASK64, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & _MASK64, *(int(k) for k in key)])
