"""Deterministic, splittable random streams.

Every stochastic component draws from ``stream(seed, *key)``: the same
(seed, key) pair always yields the same generator, and distinct keys give
statistically independent streams.  Experiment runners key streams by
replicate index so that replicates can run in any order, or in parallel,
without changing the results.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the given seed and sub-stream key."""
    seq = np.random.SeedSequence(entropy=int(seed) & _MASK,
                                 spawn_key=tuple(int(k) & _MASK for k in key))
    return np.random.Generator(np.random.PCG64(seq))
