"""Seeding conventions.

Every stochastic operation takes an explicit integer seed and builds its own
``numpy.random.Generator`` backed by PCG64. Child seeds are derived with
``numpy.random.SeedSequence`` from a parent seed plus integer keys, so streams
for different purposes never overlap and results do not depend on call order.
"""

from __future__ import annotations

import numpy as np

# Stream keys used under a replication seed.
GRAPH, INDEPENDENT, CLUSTER, RANDOM, BELIEFS, WEIGHTS, COMMUNITIES = range(7)


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(seed: int, *keys: int) -> int:
    """64-bit child seed of ``seed`` for the key path ``keys``."""
    ss = np.random.SeedSequence([int(seed), *map(int, keys)])
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(hi) << 32 | int(lo)
