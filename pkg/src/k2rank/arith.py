"""Integer primitives: primality, a smallest-prime-factor sieve, Jacobi
symbols, modular square roots and the two small Diophantine solvers
(x^2 - 2y^2 = n and x^2 + 32y^2 = l) used by the rank and form code.

Everything here works on Python ints; the numba kernels in
:mod:`k2rank.kernels` carry their own int64 copies of the hot pieces.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import NonResidue, NotOddSquarefree, NotRepresented, SieveTooLarge

# Witnesses 2..37 are deterministic for n < 3.3e24, which covers int64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

DEFAULT_SIEVE_BUDGET = 200_000_000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactorSieve:
    """Least-prime-factor table for 0..limit (entries 0 and 1 are 0)."""

    limit: int
    smallest_factor: np.ndarray

    def __post_init__(self):
        self.smallest_factor.setflags(write=False)

    def __getitem__(self, n: int) -> int:
        return int(self.smallest_factor[n])

    def factor(self, n: int) -> List[int]:
        """Prime factors of 1 <= n <= limit with multiplicity, ascending."""
        if not 1 <= n <= self.limit:
            raise ValueError(f"{n} outside sieve range 1..{self.limit}")
        spf = self.smallest_factor
        out = []
        while n > 1:
            p = int(spf[n])
            out.append(p)
            n //= p
        return out

    def primes(self, lo: int = 2, hi: int | None = None) -> np.ndarray:
        hi = self.limit if hi is None else min(hi, self.limit)
        idx = np.arange(max(lo, 2), hi + 1)
        return idx[self.smallest_factor[idx] == idx]


def build_sieve(limit: int, budget: int | None = None) -> FactorSieve:
    if limit < 2:
        raise ValueError("sieve limit must be at least 2")
    if budget is None:
        budget = int(os.environ.get("K2RANK_SIEVE_BUDGET", DEFAULT_SIEVE_BUDGET))
    if limit > budget:
        raise SieveTooLarge(f"sieve limit {limit} exceeds budget {budget}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 0
    return FactorSieve(limit, spf)


def factor_odd_squarefree(d: int, sieve: FactorSieve) -> List[int]:
    n = abs(d)
    if n > sieve.limit:
        raise ValueError(f"|d|={n} exceeds sieve limit {sieve.limit}")
    if n <= 1 or n % 2 == 0:
        raise NotOddSquarefree(f"{d} is not odd squarefree with |d| > 1")
    primes = sieve.factor(n)
    if len(set(primes)) != len(primes):
        raise NotOddSquarefree(f"{d} is not squarefree")
    return primes


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi needs a positive odd modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod(a: int, p: int) -> int:
    """Smaller square root of ``a`` modulo the odd prime ``p`` (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if jacobi(a, p) != 1:
        raise NonResidue(f"{a} is not a square mod {p}")
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while jacobi(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 1, t * t % p
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


@dataclass(frozen=True)
class PellSolution:
    """A pair with ``u**2 - 2*w**2 == n_value``."""

    u: int
    w: int
    n_value: int

    def __post_init__(self):
        if self.u * self.u - 2 * self.w * self.w != self.n_value:
            raise ValueError(f"({self.u}, {self.w}) does not represent {self.n_value}")

    def as_tuple(self) -> Tuple[int, int]:
        return self.u, self.w


def pell_search_bound(n: int) -> int:
    return math.ceil((1 + math.sqrt(2)) * math.sqrt(abs(n) / 2)) + 2


def solve_x2_minus_2y2(n: int) -> PellSolution:
    """Minimal-w solution of u^2 - 2w^2 = n with u > 0 (u >= 0 if n = -2w^2)."""
    if n == 0:
        raise ValueError("n must be nonzero")
    w = 0 if n > 0 else math.isqrt((-n + 1) // 2)
    for w in range(w, pell_search_bound(n) + 1):
        m = n + 2 * w * w
        if m < 0:
            continue
        u = math.isqrt(m)
        if u * u == m:
            return PellSolution(u, w, n)
    raise NotRepresented(f"{n} is not of the form x^2 - 2y^2")


def solve_x2_plus_32y2(l: int) -> Tuple[int, int]:
    if l < 1:
        raise ValueError("l must be positive")
    for y in range(math.isqrt(l // 32) + 1):
        m = l - 32 * y * y
        x = math.isqrt(m)
        if x * x == m:
            return x, y
    raise NotRepresented(f"{l} is not of the form x^2 + 32y^2")


def pell_unit_apply(s: PellSolution) -> PellSolution:
    """Multiply u + w*sqrt(2) by the unit square 3 + 2*sqrt(2)."""
    return PellSolution(3 * s.u + 4 * s.w, 2 * s.u + 3 * s.w, s.n_value)
