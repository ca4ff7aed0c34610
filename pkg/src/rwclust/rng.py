"""Deterministic hierarchical seeding and ternary weight sampling.

Every branch derives its own 64-bit seed from the master seed by a counter
hash (SplitMix64), so branches can run in any order, or in parallel, and
still draw bit-identical parameters.  Ternary weights come straight from the
SplitMix64 output stream; everything else (k-means init, synthetic data,
noise) uses a numpy PCG64 generator seeded from the same tree.
"""

from __future__ import annotations

import numpy as np

_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix64(z: np.ndarray) -> np.ndarray:
    # SplitMix64 finalizer (Steele, Lea & Flood 2014 reference constants).
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def branch_seed(master_seed: int, index: int) -> int:
    """Derive the seed for child ``index`` of ``master_seed``.

    Pure function of its arguments; collision-resistant over the index
    ranges used here (one SplitMix64 step per index).
    """
    if index < 0:
        raise ValueError(f"index must be >= 0, got {index}")
    with np.errstate(over="ignore"):
        z = (np.uint64(master_seed & 0xFFFFFFFFFFFFFFFF)
             + _GAMMA * np.uint64(index + 1)) & _MASK64
        return int(_mix64(z))


def sample_ternary_weights(seed: int, count: int) -> np.ndarray:
    """Draw ``count`` i.i.d. uniform values from {-1, 0, +1} as float64.

    The stream is the SplitMix64 sequence started at ``seed``; each 64-bit
    output maps to a symbol by mod 3 (bias ~2**-64, far below anything a
    frequency test can see).
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    if count == 0:
        return np.zeros(0, dtype=np.float64)
    with np.errstate(over="ignore"):
        idx = np.arange(1, count + 1, dtype=np.uint64)
        z = (np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + _GAMMA * idx) & _MASK64
        words = _mix64(z)
    return (words % np.uint64(3)).astype(np.int64).astype(np.float64) - 1.0


def generator(seed: int) -> np.random.Generator:
    """PCG64 generator for the non-weight randomness attached to ``seed``."""
    return np.random.Generator(np.random.PCG64(seed & 0xFFFFFFFFFFFFFFFF))
