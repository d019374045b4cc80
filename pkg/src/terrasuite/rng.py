"""Deterministic 64-bit PRNG used for every random draw in the suite.

The generator is xoshiro256** seeded through splitmix64. It is implemented
here rather than taken from :mod:`random` so the draw sequence is pinned by
this file instead of the interpreter version: terrain layouts, spawn jitter
and random policies stay reproducible across builds and platforms.

Draw-order contracts (what consumes the stream, in which order) are
documented on the call sites: :func:`terrasuite.terrain.generate_terrain`
and :meth:`terrasuite.envs.Env.reset`.
"""

from __future__ import annotations

_MASK64 = 0xFFFFFFFFFFFFFFFF
# 2^-53, scales a 53-bit integer into [0, 1)
_TO_UNIT = 1.0 / (1 << 53)


def splitmix64(seed: int) -> int:
    """One step of splitmix64; used to expand a user seed into PRNG state."""
    z = (seed + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256(object):
    """xoshiro256** with a 64-bit seed.

    The four state words are produced by iterating splitmix64 on the seed,
    which guarantees a non-degenerate (non-zero) state for any input.
    """

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int):
        s = seed & _MASK64
        s = splitmix64(s)
        self._s0 = s
        s = splitmix64(s)
        self._s1 = s
        s = splitmix64(s)
        self._s2 = s
        s = splitmix64(s)
        self._s3 = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of resolution."""
        return (self.next_u64() >> 11) * _TO_UNIT

    def uniform(self, lo: float, hi: float) -> float:
        """Uniform float in [lo, hi]. lo == hi returns lo exactly."""
        return lo + (hi - lo) * self.random()

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n). Modulo reduction; the bias at 64 bits
        is far below anything observable for the small n used here."""
        if n <= 0:
            raise ValueError("randint requires n > 0")
        return self.next_u64() % n

    def state(self) -> tuple[int, int, int, int]:
        return (self._s0, self._s1, self._s2, self._s3)
