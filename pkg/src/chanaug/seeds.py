"""Deterministic 64-bit seed derivation.

Every randomized stage derives its stream as ``mix(master_seed, *indices)``
so results are independent of scheduling order and reproducible bit-for-bit.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One step of the splitmix64 finalizer (Steele et al.)."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def mix_seed(master_seed: int, *indices: int) -> int:
    """Fold non-negative indices into a master seed, one splitmix step each."""
    state = splitmix64(master_seed & _MASK64)
    for idx in indices:
        state = splitmix64(state ^ (idx & _MASK64))
    return state


def rng_for(master_seed: int, *indices: int) -> np.random.Generator:
    """Seeded PCG64 generator for the derived stream."""
    return np.random.default_rng(mix_seed(master_seed, *indices))
