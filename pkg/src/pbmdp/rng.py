"""Seeded, splittable random streams.

A stream is identified by a :class:`numpy.random.SeedSequence`: a 64-bit
root seed plus a spawn key (the stream counter path).  Child streams are
addressed directly by index, so a child's draws never depend on how many
siblings were created before it.  This is what lets tree recursion and
benchmark episodes run in any order (or in parallel) with identical results.
"""

from __future__ import annotations

import numpy as np


def as_seed_sequence(seed=None) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        return np.random.SeedSequence(int(seed.integers(2**63)))
    return np.random.SeedSequence(seed)


def substream(ss: np.random.SeedSequence, *index: int) -> np.random.SeedSequence:
    """Child stream ``index`` of ``ss``; same as ``ss.spawn`` but random-access."""
    return np.random.SeedSequence(
        ss.entropy, spawn_key=tuple(ss.spawn_key) + tuple(int(i) for i in index)
    )


def generator(seed=None) -> np.random.Generator:
    """A PCG64 generator for ``seed`` (int, SeedSequence, Generator or None)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(as_seed_sequence(seed)))


def episode_seed(master_seed: int, episode: int) -> int:
    """64-bit seed of episode ``episode``; a pure function of its arguments."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(episode),))
    return int(ss.generate_state(1, np.uint64)[0])
