"""
Complement Sampling Lab - Seed derivation

One 64-bit master seed feeds everything. Independent streams are addressed
by an integer path (e.g. round index, stream id), so parallel trials never
share a generator and any single trial can be replayed in isolation.
"""

import numpy as np

# Stream ids inside a game round.
STREAM_KEY     = 0
STREAM_REFEREE = 1
STREAM_PLAYER  = 2


def derive_rng(master_seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, path)]))


def derive_seed(master_seed: int, *path: int) -> int:
    """A 63-bit integer seed for the given path."""
    state = np.random.SeedSequence([int(master_seed), *map(int, path)]).generate_state(2, np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])
