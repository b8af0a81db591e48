"""4-rank of the tame kernel K2(O_F) for F = Q(sqrt(d)), d odd squarefree.

The rank comes from a (t+1)x(t+1) matrix of local Hilbert symbols whose
columns are the places 2, p_1, ..., p_t and whose rows pair -d with
p_1, ..., p_{t-1}, then with v, and finally pair +-d with -1:

    d < 0:  4-rank = t - rank(M')
    d > 0:  4-rank = t - rank(M) + a' - a

with a = 0 if 2 is a norm from F (else 1) and 2^a' the index of the norm
subgroup inside {+-1, +-2}.  That index is the count of -1, 2 that are not
norms, except when -2 is the only nontrivial norm: then a' = 1, not 2.
v = 2 unless 2 is a norm, in which case d = u^2 - 2w^2 and v = |u + w|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .arith import (
    FactorSieve,
    PellSolution,
    factor_odd_squarefree,
    solve_x2_minus_2y2,
)
from .errors import InvariantViolation, NotOddSquarefree, NotRepresented, PellFailure
from .gf2 import BitMatrix, from_signs, rank
from .localsym import hilbert, hilbert_2, hilbert_odd


@dataclass(frozen=True)
class FieldSpec:
    d: int
    primes: Tuple[int, ...]
    two_is_norm: bool
    minus_one_is_norm: bool
    minus_two_is_norm: bool = False

    @property
    def t(self) -> int:
        return len(self.primes)

    @property
    def norm_index_log2(self) -> int:
        nontrivial = self.two_is_norm + self.minus_one_is_norm + self.minus_two_is_norm
        return 2 - (nontrivial + 1) // 2


@dataclass(frozen=True)
class SymbolMatrix:
    sign_grid: Tuple[Tuple[int, ...], ...]
    v: int
    column_labels: Tuple[int, ...]
    row_labels: Tuple[int, ...]
    pell: Optional[PellSolution] = None

    @property
    def bits(self) -> BitMatrix:
        return from_signs(self.sign_grid)


@dataclass(frozen=True)
class RankReport:
    d: int
    t: int
    rank: int
    a: int
    a_prime: int
    four_rank: int
    spec: FieldSpec
    matrix: SymbolMatrix


def odd_prime_factors(d: int, sieve: Optional[FactorSieve] = None) -> List[int]:
    """Ascending odd prime factors of an odd squarefree d, |d| > 1."""
    if sieve is not None and abs(d) <= sieve.limit:
        return factor_odd_squarefree(d, sieve)
    n = abs(d)
    if n <= 1 or n % 2 == 0:
        raise NotOddSquarefree(f"{d} is not odd squarefree with |d| > 1")
    out = []
    q = 3
    while q * q <= n:
        if n % q == 0:
            n //= q
            if n % q == 0:
                raise NotOddSquarefree(f"{d} is not squarefree")
            out.append(q)
        q += 2
    if n > 1:
        out.append(n)
    return out


def norms_from_field(d: int, primes) -> Tuple[bool, bool]:
    """(2 is a norm from Q(sqrt d), -1 is a norm from Q(sqrt d)).

    Decided locally: x is a norm iff (x, d)_v = 1 at v = inf, 2 and every
    p | d.
    """
    two = all(p % 8 in (1, 7) for p in primes)
    return two, _local_norm(-1, d, primes)


def _local_norm(n: int, d: int, primes) -> bool:
    # n in {-1, -2}: only inf, 2 and the p | d can obstruct
    return d > 0 and hilbert_2(n, d) == 1 and all(hilbert_odd(n, d, p) == 1 for p in primes)


def is_local_norm(n: int, d: int, primes) -> bool:
    """Hasse criterion for n being a norm from Q(sqrt d); used as an oracle."""
    places = ["inf", 2, *sorted(set(primes) | {q for q in _odd_primes_of(n)})]
    return all(hilbert(n, d, v) == 1 for v in places)


def _odd_primes_of(n: int) -> List[int]:
    n = abs(n)
    while n % 2 == 0 and n:
        n //= 2
    out, q = [], 3
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 2
    if n > 1:
        out.append(n)
    return out


def field_spec(d: int, sieve: Optional[FactorSieve] = None) -> FieldSpec:
    primes = tuple(odd_prime_factors(d, sieve))
    two, m1 = norms_from_field(d, primes)
    return FieldSpec(d, primes, two, m1, _local_norm(-2, d, primes))


def choose_v(d: int, spec: FieldSpec, pell: Optional[PellSolution] = None) -> Tuple[int, Optional[PellSolution]]:
    """v for the v-row, with the Pell solution it came from (None when v = 2).

    Pass ``pell`` to override the canonical minimal-w solution.
    """
    if not spec.two_is_norm:
        return 2, None
    if pell is None:
        try:
            pell = solve_x2_minus_2y2(d)
        except NotRepresented as exc:
            raise PellFailure(f"2 is a norm from Q(sqrt {d}) but the search found no u, w") from exc
    # |u + w|: the canonical solution already has u + w > 0, and taking the
    # absolute value keeps the d > 0 rank independent of the sign of u + w*sqrt(2).
    v = abs(pell.u + pell.w)
    if v == 0 or any(math.gcd(v, p) != 1 for p in spec.primes):
        raise InvariantViolation(f"v={v} shares a factor with d={d}")
    return v, pell


def build_matrix(
    d: int,
    sieve: Optional[FactorSieve] = None,
    spec: Optional[FieldSpec] = None,
    pell: Optional[PellSolution] = None,
) -> SymbolMatrix:
    if spec is None:
        spec = field_spec(d, sieve)
    v, pell = choose_v(d, spec, pell)
    primes = spec.primes
    places = (2, *primes)
    row_args = [*primes[:-1], v]
    grid = [tuple(hilbert(-d, b, q) for q in places) for b in row_args]
    last = d if d > 0 else -d
    grid.append(tuple(hilbert(last, -1, q) for q in places))
    return SymbolMatrix(
        sign_grid=tuple(grid),
        v=v,
        column_labels=places,
        row_labels=(*primes[:-1], v, -1),
        pell=pell,
    )


def four_rank(
    d: int,
    sieve: Optional[FactorSieve] = None,
    pell: Optional[PellSolution] = None,
) -> RankReport:
    spec = field_spec(d, sieve)
    m = build_matrix(d, spec=spec, pell=pell)
    rk = rank(m.bits)
    t = spec.t
    # a, a' are reported for both signs but only enter the d > 0 formula.
    a = 0 if spec.two_is_norm else 1
    a_prime = spec.norm_index_log2
    r4 = t - rk if d < 0 else t - rk + a_prime - a
    if not 0 <= r4 <= t:
        raise InvariantViolation(f"4-rank {r4} out of range for d={d}, t={t}")
    return RankReport(d, t, rk, a, a_prime, r4, spec, m)
