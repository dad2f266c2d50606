"""Seeded random streams.

Every stream is a Philox counter-based generator keyed by a master seed and
a tuple of stream ids, so child streams such as (run, round, projection) can
be derived in any order and always yield the same numbers.
"""

import numpy as np

__all__ = ["Rng", "derive_seed", "normal", "projection_matrix", "shuffled_indices"]


class Rng:
    """Single-owner random stream identified by ``(seed, stream)``."""

    def __init__(self, seed, stream=()):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self.stream = tuple(int(s) for s in stream)
        ss = np.random.SeedSequence(entropy=seed, spawn_key=self.stream)
        self._gen = np.random.Generator(np.random.Philox(ss))

    def child(self, *ids):
        return Rng(self.seed, self.stream + ids)

    def standard_normal(self, size=None):
        return self._gen.standard_normal(size)

    def permutation(self, n):
        return self._gen.permutation(n)

    def __repr__(self):
        return f"Rng(seed={self.seed}, stream={self.stream})"


def derive_seed(master, *ids):
    """Deterministic uint64 seed for the sub-experiment ``ids`` of ``master``."""
    ss = np.random.SeedSequence(entropy=int(master), spawn_key=tuple(int(i) for i in ids))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def normal(rng, mean=0.0, variance=1.0):
    """One draw from N(mean, variance)."""
    if variance < 0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    return mean + np.sqrt(variance) * float(rng.standard_normal())


def projection_matrix(rng, d, m):
    """d x m matrix with i.i.d. N(0, 1/d) entries.

    Note the 1/d variance (not the 1/m of the usual JL scaling): squared
    norms shrink by m/d on projection.
    """
    if d < 1 or m < 1:
        raise ValueError(f"projection needs d >= 1 and m >= 1, got d={d}, m={m}")
    return rng.standard_normal((d, m)) / np.sqrt(d)


def shuffled_indices(rng, n):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return rng.permutation(n)
