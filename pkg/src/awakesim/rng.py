"""Deterministic counter-mode randomness for every simulation component.

All coins in this package come from :func:`node_rng`, a stateless 64-bit hash
of ``(master_seed, node_id, stream_label, index)``.  Distinct argument tuples
give statistically independent values, which lets protocols treat their whole
coin schedule as pre-sampled: a sleeping node's future coins are well defined
without the node holding any generator state, and any slice of the schedule
can be recomputed lazily or in bulk.

:func:`node_rng_array` is the vectorized twin.  It applies the exact same
mixing function over numpy ``uint64`` arrays and is bit-identical to the
scalar path, so hot loops can draw whole coin matrices at once.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_NODE_PRIME = 0xA24BAED4963EE407
_INDEX_PRIME = 0x9FB21C651E98DF25

TWO64 = 1 << 64


def _splitmix(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


@lru_cache(maxsize=4096)
def _label_hash(label: str) -> int:
    # FNV-1a over the UTF-8 bytes; stable across platforms and runs.
    h = 0xCBF29CE484222325
    for b in label.encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & MASK64
    return h


def node_rng(master_seed: int, node_id: int, stream_label: str, index: int) -> int:
    """Return a uniform 64-bit value determined by the four arguments."""
    h = _splitmix((master_seed ^ _GOLDEN) & MASK64)
    h = _splitmix(h ^ ((node_id * _NODE_PRIME) & MASK64))
    h = _splitmix(h ^ _label_hash(stream_label))
    h = _splitmix(h ^ ((index * _INDEX_PRIME) & MASK64))
    return h


def _splitmix_np(z):
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


def node_rng_array(master_seed: int, node_ids, stream_label: str, indices):
    """Vectorized :func:`node_rng`; broadcasts ``node_ids`` against ``indices``.

    Either argument may be a scalar or an integer array.  The result dtype is
    ``uint64`` and every element equals the scalar ``node_rng`` value for the
    corresponding ``(node_id, index)`` pair.
    """
    nodes = np.asarray(node_ids, dtype=np.uint64)
    idx = np.asarray(indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h0 = _splitmix(np.uint64((master_seed ^ _GOLDEN) & MASK64).item())
        h = _splitmix_np(np.uint64(h0) ^ (nodes * np.uint64(_NODE_PRIME)))
        h = _splitmix_np(h ^ np.uint64(_label_hash(stream_label)))
        h = _splitmix_np(h ^ (idx * np.uint64(_INDEX_PRIME)))
    return h


def coin_threshold(p) -> int:
    """Map a probability to the integer cutoff used for 64-bit coin flips.

    A draw ``r`` counts as success iff ``r < coin_threshold(p)``.  Exact for
    ``Fraction`` probabilities, so coin decisions never depend on float
    rounding.
    """
    if isinstance(p, Fraction):
        if p < 0 or p > 1:
            raise ValueError(f"probability out of range: {p}")
        return (p.numerator * TWO64) // p.denominator
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    return min(TWO64, int(p * TWO64))


def uniform01(value: int) -> float:
    """Map a 64-bit draw to a float in [0, 1) with 53 random bits."""
    return (value >> 11) * (2.0 ** -53)
