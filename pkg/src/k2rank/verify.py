"""Cross-module property suites, shared by ``k2rank verify`` and the tests.

Each suite returns a SuiteResult; ``failures`` lists counterexamples as
short strings (capped, the count is exact).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .arith import FactorSieve, PellSolution, build_sieve, is_prime, jacobi, pell_unit_apply
from .errors import RangeExceeded, TableViolation
from .forms import (
    classify_pl,
    form_representation_check,
    narrow_class_number,
    p_form_has_order_two,
    pi_symbol,
    satisfies_1_32,
)
from .fourrank import four_rank
from .localsym import hilbert, quad_symbol_sqrt2
from .survey import Family, congruence_table_check, records

MAX_LISTED = 20


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    n_failures: int = 0
    failures: List[str] = field(default_factory=list)
    notes: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.n_failures == 0

    def fail(self, msg: str) -> None:
        self.n_failures += 1
        if len(self.failures) < MAX_LISTED:
            self.failures.append(msg)


def _odd_primes_of(n: int) -> List[int]:
    n = abs(n)
    out, q = [], 3
    while n % 2 == 0:
        n //= 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 2
    if n > 1:
        out.append(n)
    return out


def _nonzero(rng: random.Random, bound: int) -> int:
    x = 0
    while x == 0:
        x = rng.randint(-bound, bound)
    return x


def symbols_suite(max_value: int = 10_000, samples: int = 10_000, seed: int = 0) -> SuiteResult:
    """Product formula, symmetry and bilinearity of Hilbert symbols."""
    res = SuiteResult("symbols")
    rng = random.Random(seed)
    for _ in range(samples):
        a, a2, b = (_nonzero(rng, max_value) for _ in range(3))
        places = ["inf", 2, *sorted(set(_odd_primes_of(a)) | set(_odd_primes_of(b)) | set(_odd_primes_of(a2)))]
        prod = 1
        for v in places:
            h = hilbert(a, b, v)
            prod *= h
            if h != hilbert(b, a, v):
                res.fail(f"symmetry ({a},{b})_{v}")
            if hilbert(a * a2, b, v) != h * hilbert(a2, b, v):
                res.fail(f"bilinearity ({a}*{a2},{b})_{v}")
        if prod != 1:
            res.fail(f"product formula ({a},{b})")
        # an odd prime dividing neither argument
        q = next(q for q in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41) if a % q and b % q)
        if hilbert(a, b, q) != 1:
            res.fail(f"unramified ({a},{b})_{q}")
        res.checked += 1
    return res


def rankinv_suite(max_abs: int = 100_000, sieve: Optional[FactorSieve] = None) -> SuiteResult:
    """four_rank is unchanged when the canonical (u, w) is replaced by
    (3u+4w, 2u+3w), by (-u, w) and by (u, -w)."""
    res = SuiteResult("rankinv")
    sieve = sieve or build_sieve(max(max_abs, 16))
    for kind in ("ODD", "NODD"):
        for rec in records(Family(kind, 3, max_abs - 1), sieve):
            if not rec.two_is_norm:
                continue
            base = four_rank(rec.d, sieve)
            s = base.matrix.pell
            alts = [pell_unit_apply(s), PellSolution(-s.u, s.w, rec.d), PellSolution(s.u, -s.w, rec.d)]
            alts.append(pell_unit_apply(alts[1]))
            for alt in alts:
                if math.gcd(alt.u + alt.w, rec.d) != 1:
                    continue
                res.checked += 1
                got = four_rank(rec.d, sieve, pell=alt).four_rank
                if got != base.four_rank:
                    res.fail(f"d={rec.d} (u,w)={alt.as_tuple()}: {got} != {base.four_rank}")
            if base.four_rank != rec.four_rank:
                res.fail(f"d={rec.d}: kernel {rec.four_rank} != reference {base.four_rank}")
    return res


def tables_suite(max_abs: int = 100_000, sieve: Optional[FactorSieve] = None) -> SuiteResult:
    res = SuiteResult("tables")
    try:
        report = congruence_table_check(max_abs, sieve)
    except TableViolation as exc:
        res.fail(str(exc))
        return res
    res.checked = report.checked
    res.notes["split_proportions"] = {str(k): v for k, v in report.split_proportions().items()}
    return res


def _pairs(max_product: int):
    ps = [p for p in range(17, max_product // 17 + 1, 8) if is_prime(p)]
    for i, p in enumerate(ps):
        for l in ps[i + 1 :]:
            if p * l >= max_product:
                break
            yield p, l


def forms_suite(max_value: int = 1_000_000, sieve: Optional[FactorSieve] = None) -> SuiteResult:
    """<1,32> dual route below max_value, h+(8p) = 0 mod 4 for p < min(max, 10^4),
    and classifier predictions vs the matrix for every pl < max_value."""
    res = SuiteResult("forms")
    n_dual = 0
    for l in range(17, max_value, 8):
        if is_prime(l):
            satisfies_1_32(l)  # raises on disagreement
            n_dual += 1
    n_h = 0
    for p in range(17, min(max_value, 10_000), 8):
        if is_prime(p):
            h = narrow_class_number(8 * p).h_plus
            n_h += 1
            if h % 4:
                res.fail(f"h+({8 * p}) = {h}")
    mm = classifier_vs_matrix(max_value, sieve)
    res.checked = n_dual + n_h + mm.checked
    res.n_failures += mm.n_failures
    res.failures.extend(mm.failures[: MAX_LISTED - len(res.failures)])
    res.notes.update(dual_route=n_dual, class_numbers=n_h, pairs=mm.checked)
    return res


def classifier_vs_matrix(max_product: int = 1_000_000, sieve: Optional[FactorSieve] = None) -> SuiteResult:
    res = SuiteResult("classifier")
    if max_product <= 17 * 41:
        return res
    sieve = sieve or build_sieve(max_product)
    matrix = {}
    for kind in ("X", "Y"):
        for rec in records(Family(kind, 15, max_product - 1, (1, 1)), sieve):
            matrix[rec.d] = rec.four_rank
    for p, l in _pairs(max_product):
        c = classify_pl(p, l)
        res.checked += 1
        if c.predicted_rank_pos != matrix[p * l]:
            res.fail(f"d={p * l}: predicted {c.predicted_rank_pos}, matrix {matrix[p * l]}")
        if c.predicted_rank_neg is not None and c.predicted_rank_neg != matrix[-p * l]:
            res.fail(f"d={-p * l}: predicted {c.predicted_rank_neg}, matrix {matrix[-p * l]}")
    return res


def prop44_suite(max_product: int = 1_000_000, sieve: Optional[FactorSieve] = None) -> SuiteResult:
    """(v/l) from the matrix-side v against the pi-symbol identity."""
    res = SuiteResult("prop44")
    sieve = sieve or build_sieve(max(max_product, 16))
    for p, l in _pairs(max_product):
        if jacobi(l, p) != 1:
            continue
        pis = pi_symbol(p, l)
        unit = quad_symbol_sqrt2(1, 1, l)
        for d, want in ((p * l, pis * unit), (-p * l, pis)):
            v = four_rank(d, sieve).matrix.v
            res.checked += 1
            if jacobi(v, l) != want:
                res.fail(f"d={d}: (v/l) = {jacobi(v, l)}, expected {want}")
    return res


def prop34_suite(max_product: int = 1_000_000) -> SuiteResult:
    """Direct form search vs the pi-symbol on pairs where the search fits.

    Pairs whose p has <p,0,-2> narrowly principal are searched too but only
    tallied (``outside_premise``): the dichotomy is not claimed there.
    """
    res = SuiteResult("prop34")
    skipped = 0
    outside = outside_ok = 0
    reports = {}
    for p, l in _pairs(max_product):
        if jacobi(l, p) != 1:
            continue
        if p not in reports:
            reports[p] = (narrow_class_number(8 * p), p_form_has_order_two(p))
        report, premise = reports[p]
        try:
            sat_p, sat_1, ok = form_representation_check(p, l, report)
        except RangeExceeded:
            skipped += 1
            continue
        if not premise:
            outside += 1
            outside_ok += ok
            continue
        res.checked += 1
        if not ok:
            res.fail(f"(p,l)=({p},{l}): <p,-2>={sat_p}, <1,-2p>={sat_1}")
    res.notes.update(skipped_range=skipped, outside_premise=outside, outside_premise_consistent=outside_ok)
    return res


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "symbols": lambda m, sieve=None: symbols_suite(max_value=m),
    "prop34": lambda m, sieve=None: prop34_suite(m),
    "prop44": prop44_suite,
    "tables": tables_suite,
    "rankinv": rankinv_suite,
    "forms": forms_suite,
}


def run_suite(name: str, max_value: int, sieve: Optional[FactorSieve] = None) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name](max_value, sieve=sieve)
