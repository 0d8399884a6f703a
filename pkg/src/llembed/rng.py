"""Portable pseudo-random number generation for dataset synthesis.

Dataset generators must be reproducible bit-for-bit from (parameters, seed)
alone, independent of the Python/numpy version in use, so they run on a
self-contained generator instead of ``numpy.random``: xoshiro256++ (Blackman
& Vigna) with its state expanded from the user seed by splitmix64.  Both
algorithms are published with reference outputs and are routinely
re-implemented across languages, which keeps cross-implementation replay of
a dataset manifest possible.

The integer stream and the derived uniforms are exact everywhere.  Gaussian
deviates go through ``math.log``/``cos``/``sin`` (Box-Muller) and therefore
inherit the platform libm's final-ulp rounding; identical on any one
platform, and in practice on every IEEE-754 libm we have seen.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1


def _splitmix64_stream(seed: int, count: int) -> list[int]:
    """First `count` outputs of splitmix64 starting from `seed`."""
    out = []
    x = seed & _MASK64
    for _ in range(count):
        x = (x + 0x9E3779B97F4A7C15) & _MASK64
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        out.append(z ^ (z >> 31))
    return out


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256PlusPlus:
    """xoshiro256++ with splitmix64 seeding.

    Accepts any Python int as seed (reduced mod 2**64).  `next_uint64` is
    the raw generator; `uniform` maps the top 53 bits onto [0, 1).
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        s = _splitmix64_stream(self.seed, 4)
        # All-zero state is invalid for xoshiro; splitmix64 cannot produce
        # four zero outputs in a row, so no further guard is needed.
        self._s = s
        self._gauss_spare: float | None = None

    def next_uint64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s0 + s3) & _MASK64, 23) + s0) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_uint64() >> 11) * 2.0**-53

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.random()

    def normal(self) -> float:
        """Standard normal deviate via the Box-Muller transform."""
        if self._gauss_spare is not None:
            z = self._gauss_spare
            self._gauss_spare = None
            return z
        # Shift u1 into (0, 1] so log() is always defined.
        u1 = ((self.next_uint64() >> 11) + 1) * 2.0**-53
        u2 = self.random()
        r = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        self._gauss_spare = r * math.sin(theta)
        return r * math.cos(theta)


RNG_ALGORITHM = "xoshiro256++ seeded by splitmix64; uniforms = (u64 >> 11) * 2^-53"
