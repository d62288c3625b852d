"""Counter-based Gaussian random numbers, reproducible across runs and platforms.

Word ``i`` of stream ``s`` under seed ``seed`` is

    mix(key + (i + 1) * GOLDEN),   key = mix(seed + (s + 1) * GOLDEN)

where ``mix`` is the SplitMix64 finalizer and all arithmetic is modulo
2^64. Pairs of words become two standard normals by the Box-Muller
transform. Any draw can be computed without generating its predecessors.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TWO_NEG53 = 2.0**-53

# substreams used by the experiments
COEFFICIENT_NOISE = 0
DATA_NOISE = 1


def mix64(z):
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _key(seed, stream: int) -> np.ndarray:
    seed = np.asarray(seed, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(seed + np.uint64(stream + 1) * GOLDEN)


def random_words(seed, stream: int, counters) -> np.ndarray:
    """64-bit words for the given counters; ``seed`` broadcasts against ``counters``."""
    key = _key(seed, stream)
    c = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(key + (c + np.uint64(1)) * GOLDEN)


def uniforms(seed, stream: int, counters) -> np.ndarray:
    """Uniform doubles in ``(0, 1]`` (53-bit resolution)."""
    w = random_words(seed, stream, counters)
    return ((w >> np.uint64(11)).astype(np.float64) + 1.0) * _TWO_NEG53


def normals(seed, stream: int, n: int) -> np.ndarray:
    """``n`` standard normal draws; with an array of seeds of shape ``S`` the result is ``S + (n,)``."""
    pairs = (n + 1) // 2
    seed = np.asarray(seed, dtype=np.uint64)[..., None]
    idx = np.arange(pairs, dtype=np.uint64)
    u1 = uniforms(seed, stream, 2 * idx)
    u2 = uniforms(seed, stream, 2 * idx + np.uint64(1))
    r = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    z = np.stack([r * np.cos(angle), r * np.sin(angle)], axis=-1)
    z = z.reshape(z.shape[:-2] + (2 * pairs,))
    return z[..., :n]
