"""Deterministic, splittable random streams.

Every random consumer (walk, instance generator, rounding, random-coloring
baseline) draws from its own labelled stream, so instance randomness and
algorithm randomness can be reseeded independently and a run's output does not
depend on thread scheduling.

Seeds are mixed with the splitmix64 finalizer:

    z = (x + 0x9E3779B97F4A7C15) mod 2^64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
    z = z ^ (z >> 31)

`mix64(seed, k1, k2, ...)` folds each key in as `h = splitmix64(h ^ k)`. The
resulting 64-bit value and the stream label form the 128-bit key of a Philox
counter-based generator.
"""
from enum import IntEnum

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


class Stream(IntEnum):
    """ASCII-tagged stream labels."""

    WALK = 0x5741_4C4B  # "WALK"
    INSTANCE = 0x494E_5354  # "INST"
    ROUNDING = 0x524F_554E  # "ROUN"
    BASELINE = 0x4241_5345  # "BASE"


def splitmix64(x: int) -> int:
    z = (x + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def mix64(seed: int, *keys: int) -> int:
    """Fold integer keys into a 64-bit seed."""
    h = splitmix64(seed & MASK64)
    for k in keys:
        h = splitmix64(h ^ (k & MASK64))
    return h


def derive_seed(seed: int, k: int) -> int:
    """Seed of the k-th retry / run / round derived from one user-facing seed."""
    return mix64(seed, k)


def make_rng(seed: int, stream: Stream, *keys: int) -> np.random.Generator:
    """Independent generator for (seed, stream, keys)."""
    key = (mix64(seed, *keys) << 64) | int(stream)
    return np.random.Generator(np.random.Philox(key=key))
