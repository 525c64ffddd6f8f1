"""Exact integer arithmetic used throughout the package.

Primality is decided by a deterministic Miller-Rabin test (exact below
3.3e24, which covers every 64-bit input).  Factorization does trial division
by the primes below 10**4 and then splits the cofactor with Brent's variant
of Pollard rho.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

TRIAL_BOUND = 10**4
MAX_DIVISORS = 10**6

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


SMALL_PRIMES = _small_primes(TRIAL_BOUND)


def mod_inverse(a: int, n: int) -> int | None:
    """Inverse of ``a`` modulo ``n`` in ``[1, n-1]``, or None if ``a`` is not a unit."""
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    try:
        return pow(a, -1, n)
    except ValueError:
        return None


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    for p in _MR_BASES:
        if m % p == 0:
            return m == p
    if m < 41 * 41:
        return True
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def _brent(m: int, rng: random.Random) -> int:
    """Return a nontrivial factor of the odd composite ``m``."""
    while True:
        y = rng.randrange(1, m)
        c = rng.randrange(1, m)
        block = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % m
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(block, r - k)):
                    y = (y * y + c) % m
                    q = q * abs(x - y) % m
                g = math.gcd(q, m)
                k += block
            r *= 2
        if g == m:
            # the batched gcd overshot; step back one iteration at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % m
                g = math.gcd(abs(x - ys), m)
        if g != m:
            return g


def factorize(m: int) -> list[int]:
    """Prime factors of ``m`` with multiplicity, in ascending order."""
    if m < 1:
        raise ValueError(f"cannot factor {m}")
    factors: list[int] = []
    for p in SMALL_PRIMES:
        if p * p > m:
            break
        while m % p == 0:
            factors.append(p)
            m //= p
    if m == 1:
        return factors
    if m < TRIAL_BOUND * TRIAL_BOUND or is_prime(m):
        factors.append(m)
        return factors
    # fixed seed keeps results reproducible; rho output is exact either way
    rng = random.Random(m)
    stack = [m]
    while stack:
        x = stack.pop()
        if is_prime(x):
            factors.append(x)
            continue
        d = _brent(x, rng)
        stack.extend((d, x // d))
    factors.sort()
    return factors


def factor_counts(m: int) -> dict[int, int]:
    return dict(Counter(factorize(m)))


def divisors(m: int, limit: int = MAX_DIVISORS) -> list[int]:
    """Sorted positive divisors of ``m``.

    Raises ValueError when tau(m) exceeds ``limit`` instead of building a
    huge list.
    """
    counts = factor_counts(m)
    tau = math.prod(e + 1 for e in counts.values())
    if tau > limit:
        raise ValueError(f"{m} has {tau} divisors, above the limit {limit}")
    divs = [1]
    for p, e in counts.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    divs.sort()
    return divs


def tau(m: int) -> int:
    return math.prod(e + 1 for e in factor_counts(m).values())


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError(f"euler_phi needs n >= 1, got {n}")
    result = n
    for p in factor_counts(n):
        result -= result // p
    return result


def max_consecutive_ratio(divs: list[int]) -> Fraction:
    """Largest ratio d[i+1]/d[i] over a sorted divisor list (1 for a single divisor)."""
    best = Fraction(1)
    for lo, hi in zip(divs, divs[1:]):
        # cross-multiplied comparison, no float rounding
        if hi * best.denominator > best.numerator * lo:
            best = Fraction(hi, lo)
    return best


def t_ratio(m: int) -> Fraction:
    """Maximum ratio of consecutive divisors of ``m``, as an exact fraction."""
    return max_consecutive_ratio(divisors(m))


@dataclass(frozen=True)
class DivisorProfile:
    m: int
    divisors: tuple[int, ...]
    tau: int
    t_ratio: Fraction
    p_max: int


def divisor_profile(m: int) -> DivisorProfile:
    divs = divisors(m)
    primes = factorize(m)
    return DivisorProfile(
        m=m,
        divisors=tuple(divs),
        tau=len(divs),
        t_ratio=max_consecutive_ratio(divs),
        p_max=primes[-1] if primes else 1,
    )


def rho1(m: int) -> int:
    """Largest divisor of ``m`` not exceeding sqrt(m)."""
    divs = divisors(m)
    return divs[bisect_right(divs, math.isqrt(m)) - 1]


def rho2(m: int) -> int:
    """Smallest divisor of ``m`` not below sqrt(m)."""
    return m // rho1(m)


def special_n_values(bound: int) -> list[int]:
    """All n <= bound of the form 2^r 3^s 5^t + 1."""
    if bound < 2:
        raise ValueError(f"bound must be >= 2, got {bound}")
    out = []
    p2 = 1
    while p2 + 1 <= bound:
        p3 = p2
        while p3 + 1 <= bound:
            p5 = p3
            while p5 + 1 <= bound:
                out.append(p5 + 1)
                p5 *= 5
            p3 *= 3
        p2 *= 2
    return sorted(set(out))


def first_odd_primes(j: int) -> list[int]:
    return SMALL_PRIMES[1 : j + 1]


def shifted_prime(j: int, search_limit: int = 10**7) -> int:
    """Smallest prime p with 2p = -1 (mod Q), Q the product of the first j odd primes.

    ``search_limit`` caps the number of residue-class candidates examined.
    """
    if not 1 <= j <= 8:
        raise ValueError(f"j must be in [1, 8], got {j}")
    q = math.prod(first_odd_primes(j))
    p = (q - 1) // 2
    for _ in range(search_limit):
        if is_prime(p):
            return p
        p += q
    raise RuntimeError(f"no prime p = {(q - 1) // 2} (mod {q}) within {search_limit} candidates")


# --- batch helpers -------------------------------------------------------


def totients_upto(n: int):
    """numpy array phi[0..n] computed by a sieve."""
    import numpy as np

    phi = np.arange(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return phi


def primes_upto(n: int):
    import numpy as np

    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)

