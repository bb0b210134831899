"""Seeded random streams.

Every random draw in the package comes from a Philox4x64 counter-based
generator keyed by ``SeedSequence(seed, spawn_key=stream)``. Independent
substreams (one per replica, per permutation, ...) differ only in the
``stream`` tuple, so results never depend on execution order or thread count.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) & _MASK64, spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))
