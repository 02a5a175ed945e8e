"""Seedable, portable random number machinery shared by the sampling kernels.

Two layers:

* `spawn_key` / `spawn_generator` derive independent numpy generators from a
  master seed and an integer path (e.g. ``(k, run_index)``) via
  ``numpy.random.SeedSequence``.  The derivation depends only on the path, not
  on execution order, so concurrent runs stay reproducible.
* A minimal PCG32 (O'Neill) implemented on two uint64 words, usable inside
  numba-compiled kernels where numpy generators are unavailable.  State is a
  2-element uint64 array ``[state, inc]``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

PCG32_MULT = np.uint64(6364136223846793005)


def spawn_key(master_seed: int, *path: int) -> np.ndarray:
    """Derive a PCG32 state array from a master seed and an integer path."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(path))
    words = ss.generate_state(2, dtype=np.uint64)
    return pcg32_init(words[0], words[1])


def spawn_generator(master_seed: int, *path: int) -> np.random.Generator:
    """numpy Generator seeded from the same (seed, path) scheme as spawn_key."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.PCG64(ss))


@njit(cache=True)
def pcg32_init(state: np.uint64, inc: np.uint64) -> np.ndarray:
    rng = np.empty(2, dtype=np.uint64)
    rng[1] = (inc << np.uint64(1)) | np.uint64(1)
    rng[0] = np.uint64(0)
    pcg32_next(rng)
    rng[0] = rng[0] + state
    pcg32_next(rng)
    return rng


@njit(cache=True)
def pcg32_next(rng: np.ndarray) -> np.uint64:
    """Advance the state and return 32 uniformly random bits."""
    old = rng[0]
    rng[0] = old * PCG32_MULT + rng[1]
    xorshifted = (((old >> np.uint64(18)) ^ old) >> np.uint64(27)) & np.uint64(0xFFFFFFFF)
    rot = old >> np.uint64(59)
    out = (xorshifted >> rot) | (xorshifted << ((np.uint64(0) - rot) & np.uint64(31)))
    return out & np.uint64(0xFFFFFFFF)


@njit(cache=True)
def pcg32_uniform(rng: np.ndarray) -> float:
    """Uniform double in [0, 1) with 32 bits of resolution."""
    return float(pcg32_next(rng)) * (1.0 / 4294967296.0)


@njit(cache=True)
def pcg32_randint(rng: np.ndarray, n: int) -> int:
    """Uniform integer in [0, n). Modulo reduction; bias is negligible for n << 2^32."""
    return int(pcg32_next(rng) % np.uint64(n))
