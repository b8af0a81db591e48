"""Quadratic-form side of the story for d = +-pl, p = l = 1 (mod 8).

The 4-ranks of Q(sqrt(pl)) and Q(sqrt(-pl)) are predicted here purely from
symbol evaluations (the <1,32> predicate, the Legendre symbol (l/p) and
the quadratic symbol of pi = a + b*sqrt(2) with a^2 - 2b^2 = p) and never
from the Hilbert-symbol matrix, so the two can be checked against each
other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .arith import (
    PellSolution,
    is_prime,
    jacobi,
    solve_x2_minus_2y2,
    solve_x2_plus_32y2,
)
from .errors import (
    ConsistencyViolation,
    InvalidDiscriminant,
    NotRepresented,
    PellFailure,
    RangeExceeded,
)
from .localsym import quad_symbol_sqrt2

# Oracle budget for form_representation_check: largest search length in m.
REPRESENTATION_SEARCH_BUDGET = 2_000_000


def _check_one_mod_eight_prime(x: int, name: str) -> None:
    if x % 8 != 1 or not is_prime(x):
        raise ValueError(f"{name}={x} must be a prime = 1 (mod 8)")


def satisfies_1_32(l: int) -> bool:
    """Whether l = x^2 + 32y^2, cross-checked against ((1+sqrt 2)/l) = 1."""
    _check_one_mod_eight_prime(l, "l")
    try:
        solve_x2_plus_32y2(l)
        by_search = True
    except NotRepresented:
        by_search = False
    by_symbol = quad_symbol_sqrt2(1, 1, l) == 1
    if by_search != by_symbol:
        raise ConsistencyViolation(f"<1,32> search and symbol disagree at l={l}")
    return by_search


def pell_pi(p: int) -> PellSolution:
    """Canonical pi = a + b*sqrt(2) of norm p."""
    if p % 8 not in (1, 7):
        raise ValueError(f"p={p} is not +-1 mod 8")
    try:
        return solve_x2_minus_2y2(p)
    except NotRepresented as exc:
        raise PellFailure(f"no a^2 - 2b^2 = {p} found") from exc


def pi_symbol(p: int, l: int) -> int:
    _check_one_mod_eight_prime(p, "p")
    _check_one_mod_eight_prime(l, "l")
    if jacobi(l, p) != 1:
        raise ValueError(f"(l/p) must be +1 for (p, l) = ({p}, {l})")
    pi = pell_pi(p)
    return quad_symbol_sqrt2(pi.u, pi.w, l)


@dataclass(frozen=True)
class FormClassification:
    p: int
    l: int
    legendre_lp: int
    p_sat_1_32: bool
    l_sat_1_32: bool
    pi_symbol: Optional[int]
    predicted_rank_pos: int
    predicted_rank_neg: Optional[int]

    @property
    def l_form(self) -> Optional[str]:
        """Which of <1,-2p>, <p,-2> l satisfies (only when (l/p) = 1)."""
        if self.pi_symbol is None:
            return None
        return "<1,-2p>" if self.pi_symbol == 1 else "<p,-2>"


def classify_pl(p: int, l: int) -> FormClassification:
    _check_one_mod_eight_prime(p, "p")
    _check_one_mod_eight_prime(l, "l")
    if p == l:
        raise ValueError("p and l must be distinct")
    leg = jacobi(l, p)
    p_sat = satisfies_1_32(p)
    l_sat = satisfies_1_32(l)
    same = p_sat == l_sat
    if leg == -1:
        return FormClassification(p, l, leg, p_sat, l_sat, None, 1 if same else 0, None)

    pis = pi_symbol(p, l)
    unit_sym = 1 if l_sat else -1  # ((1 + sqrt 2)/l)
    v_pos = pis * unit_sym
    if not same:
        rank_pos = 1
    else:
        rank_pos = 2 if v_pos == 1 else 1
    rank_neg = 2 if pis == 1 else 1
    return FormClassification(p, l, leg, p_sat, l_sat, pis, rank_pos, rank_neg)


@dataclass(frozen=True)
class ClassNumberReport:
    discriminant: int
    h_plus: int
    cycle_count_detail: List[int] = field(default_factory=list)


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def reduced_forms(D: int) -> List[Tuple[int, int, int]]:
    """Primitive reduced indefinite forms (a, b, c) with b^2 - 4ac = D."""
    s = math.isqrt(D)
    out = []
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        ac = (b * b - D) // 4
        for a_abs in range(1, -ac + 1):
            if -ac % a_abs:
                continue
            # sqrt(D) - b < 2|a| < sqrt(D) + b, with sqrt(D) irrational
            if not (2 * a_abs + b > s and 2 * a_abs - b <= s):
                continue
            for a in (a_abs, -a_abs):
                c = ac // a
                if math.gcd(math.gcd(a, b), c) == 1:
                    out.append((a, b, c))
    return out


def is_reduced(form: Tuple[int, int, int], D: int) -> bool:
    a, b, _ = form
    s = math.isqrt(D)
    return 0 < b <= s and 2 * abs(a) + b > s and 2 * abs(a) - b <= s


def rho(form: Tuple[int, int, int], D: int) -> Tuple[int, int, int]:
    """One reduction step: (a, b, c) -> (c, b', a') with b' = -b mod 2|c|,
    b' in (sqrt D - 2|c|, sqrt D) when |c| < sqrt D and in (-|c|, |c|] otherwise."""
    _, b, c = form
    s = math.isqrt(D)
    m = 2 * abs(c)
    if abs(c) <= s:
        b2 = s - (s + b) % m
    else:
        b2 = (-b) % m
        if b2 > abs(c):
            b2 -= m
    return c, b2, (b2 * b2 - D) // (4 * c)


def reduce_form(form: Tuple[int, int, int], D: int) -> Tuple[int, int, int]:
    a, b, c = form
    if b * b - 4 * a * c != D:
        raise InvalidDiscriminant(f"{form} does not have discriminant {D}")
    while not is_reduced(form, D):
        form = rho(form, D)
    return form


def same_narrow_class(f: Tuple[int, int, int], g: Tuple[int, int, int], D: int) -> bool:
    """Proper equivalence: reduce f, then walk its cycle looking for g's reduction."""
    start = reduce_form(f, D)
    target = reduce_form(g, D)
    h = start
    while True:
        if h == target:
            return True
        h = rho(h, D)
        if h == start:
            return False


def principal_form(D: int) -> Tuple[int, int, int]:
    b = D % 2
    return 1, b, (b * b - D) // 4


def narrow_class_number(D: int) -> ClassNumberReport:
    if D <= 0 or D % 4 not in (0, 1) or _is_square(D):
        raise InvalidDiscriminant(f"{D} is not a positive non-square discriminant")
    forms = reduced_forms(D)
    for f in forms:
        if rho(f, D) not in forms:
            raise ConsistencyViolation(f"rho({f}) is not reduced")
    unseen = set(forms)
    cycles = []
    for f in forms:
        if f not in unseen:
            continue
        length = 0
        g = f
        while True:
            unseen.discard(g)
            length += 1
            g = rho(g, D)
            if g == f:
                break
            if g not in unseen:
                raise ConsistencyViolation(f"rho left the reduced set or merged cycles at {g}")
        cycles.append(length)
    return ClassNumberReport(D, len(cycles), cycles)


def pell_fundamental(D: int) -> Tuple[int, int]:
    """Smallest x, y > 0 with x^2 - D*y^2 = 1 (continued fraction of sqrt D)."""
    a0 = math.isqrt(D)
    if a0 * a0 == D:
        raise ValueError("D must not be a square")
    m, q, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    while h * h - D * k * k != 1:
        m = a * q - m
        q = (D - m * m) // q
        a = (a0 + m) // q
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    return h, k


def _search_bound(K: int, D: int) -> int:
    x1, y1 = pell_fundamental(D)
    # Nagell: every class of solutions of x^2 - D y^2 = K > 0 has one with
    # 0 <= y <= y1 * sqrt(K / (2 (x1 + 1))).
    return math.isqrt(y1 * y1 * K // (2 * (x1 + 1))) + 1


def p_form_has_order_two(p: int) -> bool:
    """Whether <p, 0, -2> is a non-principal narrow class of discriminant 8p.

    The two-form dichotomy for l^(h+/4) presumes this; when the prime over p
    is narrowly principal (possible only if the fundamental unit has norm +1)
    neither equation need be solvable with a positive right-hand side.
    """
    _check_one_mod_eight_prime(p, "p")
    D = 8 * p
    return not same_narrow_class((p, 0, -2), principal_form(D), D)


def form_representation_check(p: int, l: int, report: ClassNumberReport) -> Tuple[bool, bool, bool]:
    """Direct search for l^(h+/4) = p n^2 - 2 m^2 and l^(h+/4) = n^2 - 2p m^2
    with m != 0 (mod l).  Returns (sat_p_minus2, sat_1_minus2p, consistent).
    """
    _check_one_mod_eight_prime(p, "p")
    _check_one_mod_eight_prime(l, "l")
    if report.discriminant != 8 * p:
        raise ValueError(f"report is for D={report.discriminant}, expected {8 * p}")
    if jacobi(l, p) != 1:
        raise ValueError("(l/p) must be +1")
    if report.h_plus % 4:
        raise ConsistencyViolation(f"h+({8 * p}) = {report.h_plus} is not divisible by 4")
    N = l ** (report.h_plus // 4)
    if N >= 2**63:
        raise RangeExceeded(f"l^(h+/4) = {l}^{report.h_plus // 4} does not fit in 64 bits")
    D = 2 * p
    bound_1 = _search_bound(N, D)
    bound_p = _search_bound(p * N, D)
    if max(bound_1, bound_p) > REPRESENTATION_SEARCH_BUDGET:
        raise RangeExceeded(f"search length {max(bound_1, bound_p)} exceeds the oracle budget")

    sat_1 = any(m % l and _is_square(N + D * m * m) for m in range(bound_1 + 1))
    sat_p = False
    for m in range(bound_p + 1):
        if m % l == 0:
            continue
        X2 = p * N + D * m * m
        X = math.isqrt(X2)
        if X * X == X2 and X % p == 0:
            sat_p = True
            break
    consistent = sat_1 != sat_p and sat_1 == (pi_symbol(p, l) == 1)
    return sat_p, sat_1, consistent
