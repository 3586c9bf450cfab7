"""Deterministic seed derivation and bit-exact random streams.

Every random quantity in this package is a pure function of a 64-bit
master seed and integer indices, built from two fixed primitives:

* the SplitMix64 finalizer as the mixing step of :func:`derive_seed`,
  so child seeds (per game, per move, per tip node) are reproducible
  and composable;
* NumPy's PCG64 generator, seeded with a derived value, for bulk
  sampling (board cells, Monte Carlo trials).

Both generators produce identical bits on every platform, which is what
makes tournaments and Monte Carlo runs replayable byte for byte.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

# Additive constant of the SplitMix64 state transition.
_GAMMA = 0x9E3779B97F4A7C15

# Stream tags keep unrelated derivations on disjoint seed domains.
TIP_STREAM = 0x7190
POSITION_STREAM = 0xD0


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a fixed avalanche permutation of 64 bits."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def derive_seed(seed: int, *indices: int) -> int:
    """Derive a child seed by folding integer indices into ``seed``.

    Each index selects an output of the SplitMix64 stream anchored at
    the current state: ``h <- mix64(h + (v + 1) * GAMMA)``.  Scaling the
    index by the odd stream constant keeps numerically close seeds on
    unrelated streams (``derive_seed(s, i)`` and ``derive_seed(s', j)``
    can only collide when ``s - s'`` is a huge multiple of the
    constant).  The derivation is composable:
    ``derive_seed(s, a, b) == derive_seed(derive_seed(s, a), b)``.
    """
    h = seed & MASK64
    for v in indices:
        h = mix64((h + ((v + 1) & MASK64) * _GAMMA) & MASK64)
    return h


def unit_float(h: int) -> float:
    """Map a 64-bit integer to [0, 1) using its top 53 bits."""
    return ((h & MASK64) >> 11) * 2.0**-53


def generator(seed: int) -> np.random.Generator:
    """PCG64 generator for bulk draws, keyed by a derived seed."""
    return np.random.Generator(np.random.PCG64(seed & MASK64))


def bernoulli_matrix(rows: int, cols: int, p: float, seed: int) -> np.ndarray:
    """``rows x cols`` matrix of independent Bernoulli(p) draws (uint8).

    ``p = 0`` yields all zeros and ``p = 1`` all ones, since the
    underlying uniforms live in [0, 1).
    """
    rng = generator(seed)
    return (rng.random((rows, cols)) < p).astype(np.uint8)
