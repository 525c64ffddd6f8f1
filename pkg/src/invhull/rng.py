"""Counter-based random streams, one per sample index.

Sample i of a run seeded with s draws from Philox keyed by
mix(s, i) = splitmix64(splitmix64(s) + i).  Each draw then depends only on
(s, i), so results do not change with the number of workers or the order
in which samples are evaluated.
"""

from __future__ import annotations

import numpy as np

from . import numtheory as nt

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def mix(seed: int, index: int) -> int:
    return splitmix64((splitmix64(seed & MASK64) + index) & MASK64)


def stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=mix(seed, index)))


def uniform_int(gen: np.random.Generator, lo: int, hi: int) -> int:
    """Uniform integer on [lo, hi]."""
    return int(gen.integers(lo, hi, endpoint=True))


def check_prime_range(lo: int, hi: int) -> None:
    p = max(lo, 2)
    while p <= hi and not nt.is_prime(p):
        p += 1
    if p > hi:
        raise ValueError(f"no primes in [{lo}, {hi}]")


def uniform_prime(gen: np.random.Generator, lo: int, hi: int) -> int:
    """Uniform prime on [lo, hi] by rejection; call check_prime_range first."""
    while True:
        n = uniform_int(gen, lo, hi)
        if nt.is_prime(n):
            return n
