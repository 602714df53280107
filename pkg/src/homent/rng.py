"""Seed handling.

All randomness goes through :class:`numpy.random.Generator` backed by PCG64
and seeded from a :class:`numpy.random.SeedSequence`.  Independent streams
are derived with ``spawn_key`` so that a stream depends only on the master
seed and its integer path, never on scheduling.
"""

import numpy as np

MASK64 = (1 << 64) - 1


def seed_sequence(seed, *path):
    """Return the SeedSequence for ``seed`` at child position ``path``."""
    return np.random.SeedSequence(int(seed) & MASK64, spawn_key=tuple(int(p) for p in path))


def generator(seed, *path):
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *path)))


def derive_seed(seed, *path):
    """A 64-bit integer seed derived from ``seed`` and ``path``."""
    return int(seed_sequence(seed, *path).generate_state(1, dtype=np.uint64)[0])
