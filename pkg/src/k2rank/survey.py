"""Exhaustive 4-rank surveys over families of quadratic fields and the
density experiments built on them."""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from . import kernels
from .arith import FactorSieve, build_sieve, is_prime, jacobi
from .errors import InvariantViolation, TableViolation
from .forms import classify_pl

# kind -> (sign, kernel family code, smallest admissible |d|)
FAMILY_KINDS: Dict[str, Tuple[int, int, int]] = {
    "X": (1, 2, 15),
    "Y": (-1, 2, 15),
    "PLR": (1, 3, 105),
    "NPLR": (-1, 3, 105),
    "ODD": (1, 0, 3),
    "NODD": (-1, 0, 3),
}


@dataclass(frozen=True)
class Family:
    kind: str
    min_abs: int
    max_abs: int
    congruence_filter: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family {self.kind!r}")
        if not 3 <= self.min_abs <= self.max_abs:
            raise ValueError("need 3 <= min_abs <= max_abs")
        if self.congruence_filter is not None:
            if FAMILY_KINDS[self.kind][1] != 2:
                raise ValueError("congruence filters apply to X and Y only")
            if any(r not in (1, 3, 5, 7) for r in self.congruence_filter):
                raise ValueError("congruence residues must be odd classes mod 8")

    @classmethod
    def standard(cls, kind: str, bound: int = 10**6) -> "Family":
        """The family with its smallest admissible |d| and |d| < bound."""
        return cls(kind, FAMILY_KINDS[kind][2], bound - 1)

    @property
    def sign(self) -> int:
        return FAMILY_KINDS[self.kind][0]

    def _kernel_args(self):
        _, fam, _ = FAMILY_KINDS[self.kind]
        fi, fj = self.congruence_filter or (-1, -1)
        return self.sign, fam, fi, fj


@dataclass
class SurveyTally:
    family: Family
    total: int
    counts: Dict[int, int]

    def merge(self, other: "SurveyTally") -> "SurveyTally":
        counts = Counter(self.counts)
        counts.update(other.counts)
        lo = min(self.family.min_abs, other.family.min_abs)
        hi = max(self.family.max_abs, other.family.max_abs)
        fam = Family(self.family.kind, lo, hi, self.family.congruence_filter)
        return SurveyTally(fam, self.total + other.total, dict(sorted(counts.items())))

    def proportion(self, k: int) -> float:
        return self.counts.get(k, 0) / self.total if self.total else 0.0

    def to_json_dict(self) -> dict:
        top = max([3, *self.counts])
        return {
            "family": self.family.kind,
            "min": self.family.min_abs,
            "max": self.family.max_abs,
            "total": self.total,
            "counts": {str(k): int(self.counts.get(k, 0)) for k in range(top + 1)},
        }


def default_threads() -> int:
    env = os.environ.get("K2_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _chunks(lo: int, hi: int, parts: int) -> List[Tuple[int, int]]:
    parts = max(1, min(parts, hi - lo + 1))
    step = math.ceil((hi - lo + 1) / parts)
    return [(a, min(a + step - 1, hi)) for a in range(lo, hi + 1, step)]


def _tally_chunk(args) -> Tuple[np.ndarray, int]:
    lo, hi, kernel_args, spf = args
    sign, fam, fi, fj = kernel_args
    return kernels.tally_range(lo, hi, sign, fam, fi, fj, spf)


def tally(family: Family, sieve: FactorSieve, threads: int = 1) -> SurveyTally:
    if family.max_abs > sieve.limit:
        raise ValueError(f"family bound {family.max_abs} exceeds sieve limit {sieve.limit}")
    kargs = family._kernel_args()
    spf = sieve.smallest_factor
    jobs = [(lo, hi, kargs, spf) for lo, hi in _chunks(family.min_abs, family.max_abs, threads * 4)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_tally_chunk, jobs))
    else:
        results = [_tally_chunk(j) for j in jobs]
    counts = np.zeros(kernels.MAX_T, dtype=np.int64)
    for part, bad in results:
        if bad:
            raise InvariantViolation(f"rank computation failed at d={bad}")
        counts += part
    top = int(np.flatnonzero(counts).max()) if counts.any() else 0
    return SurveyTally(family, int(counts.sum()), {k: int(counts[k]) for k in range(top + 1)})


@dataclass(frozen=True)
class OutputRecord:
    d: int
    t: int
    primes: Tuple[int, ...]
    two_is_norm: bool
    minus_one_is_norm: bool
    v: int
    rank: int
    a: int
    a_prime: int
    four_rank: int

    CSV_HEADER = "d,t,primes,two_is_norm,minus_one_is_norm,v,rank,a,a_prime,four_rank"

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "t": self.t,
            "primes": ";".join(map(str, self.primes)),
            "two_is_norm": self.two_is_norm,
            "minus_one_is_norm": self.minus_one_is_norm,
            "v": self.v,
            "rank": self.rank,
            "a": self.a,
            "a_prime": self.a_prime,
            "four_rank": self.four_rank,
        }

    def to_csv_row(self) -> str:
        out = []
        for value in self.to_json_dict().values():
            if isinstance(value, bool):
                out.append("true" if value else "false")
            else:
                out.append(str(value))
        return ",".join(out)

    @classmethod
    def from_json_dict(cls, obj: dict) -> "OutputRecord":
        return cls(
            d=int(obj["d"]),
            t=int(obj["t"]),
            primes=tuple(int(x) for x in str(obj["primes"]).split(";") if x),
            two_is_norm=bool(obj["two_is_norm"]),
            minus_one_is_norm=bool(obj["minus_one_is_norm"]),
            v=int(obj["v"]),
            rank=int(obj["rank"]),
            a=int(obj["a"]),
            a_prime=int(obj["a_prime"]),
            four_rank=int(obj["four_rank"]),
        )

    @classmethod
    def from_csv_row(cls, line: str) -> "OutputRecord":
        names = cls.CSV_HEADER.split(",")
        values = line.rstrip("\n").split(",")
        if len(values) != len(names):
            raise ValueError(f"expected {len(names)} fields, got {len(values)}")
        obj = dict(zip(names, values))
        for key in ("two_is_norm", "minus_one_is_norm"):
            if obj[key] not in ("true", "false"):
                raise ValueError(f"bad boolean {obj[key]!r}")
            obj[key] = obj[key] == "true"
        return cls.from_json_dict(obj)

    @classmethod
    def from_report(cls, r) -> "OutputRecord":
        return cls(
            r.d, r.t, tuple(r.spec.primes), r.spec.two_is_norm, r.spec.minus_one_is_norm,
            r.matrix.v, r.rank, r.a, r.a_prime, r.four_rank,
        )


def records(family: Family, sieve: FactorSieve) -> List[OutputRecord]:
    if family.max_abs > sieve.limit:
        raise ValueError(f"family bound {family.max_abs} exceeds sieve limit {sieve.limit}")
    sign, fam, fi, fj = family._kernel_args()
    recs, facs = kernels.rank_records(family.min_abs, family.max_abs, sign, fam, fi, fj, sieve.smallest_factor)
    out = []
    for row, fac in zip(recs.tolist(), facs.tolist()):
        if row[kernels.REC_R4] < 0:
            raise InvariantViolation(f"rank computation failed at d={row[kernels.REC_D]}")
        t = row[kernels.REC_T]
        out.append(
            OutputRecord(
                d=row[kernels.REC_D],
                t=t,
                primes=tuple(fac[:t]),
                two_is_norm=bool(row[kernels.REC_TWO]),
                minus_one_is_norm=bool(row[kernels.REC_M1]),
                v=row[kernels.REC_V],
                rank=row[kernels.REC_RANK],
                a=row[kernels.REC_A],
                a_prime=row[kernels.REC_AP],
                four_rank=row[kernels.REC_R4],
            )
        )
    return out


# --- density experiments ---------------------------------------------------

THEORETICAL = {
    # family -> (Q(sqrt(pl)), Q(sqrt(-pl)) or None)
    "A": ({1: Fraction(3, 4), 2: Fraction(1, 4)}, {1: Fraction(1, 2), 2: Fraction(1, 2)}),
    "B": ({0: Fraction(1, 2), 1: Fraction(1, 2)}, None),
}


@dataclass
class DensityReport:
    p: int
    family: str
    l_max: int
    n: int
    observed: Dict[int, float]
    theoretical: Dict[int, Fraction]
    z_scores: Dict[int, float]
    observed_neg: Optional[Dict[int, float]] = None
    theoretical_neg: Optional[Dict[int, Fraction]] = None
    z_scores_neg: Optional[Dict[int, float]] = None

    def max_abs_z(self) -> float:
        zs = list(self.z_scores.values()) + list((self.z_scores_neg or {}).values())
        return max(abs(z) for z in zs)

    def to_json_dict(self) -> dict:
        def frac(m):
            return None if m is None else {str(k): f"{v.numerator}/{v.denominator}" for k, v in m.items()}

        def num(m):
            return None if m is None else {str(k): round(v, 6) for k, v in m.items()}

        out = {
            "p": self.p,
            "family": self.family,
            "lmax": self.l_max,
            "n": self.n,
            "observed": num(self.observed),
            "theoretical": frac(self.theoretical),
            "z_scores": num(self.z_scores),
        }
        if self.observed_neg is not None:
            out["observed_neg"] = num(self.observed_neg)
            out["theoretical_neg"] = frac(self.theoretical_neg)
            out["z_scores_neg"] = num(self.z_scores_neg)
        return out


def _compare(counts: Counter, n: int, theory: Dict[int, Fraction]):
    observed = {k: counts.get(k, 0) / n for k in sorted(set(theory) | set(counts))}
    z = {}
    for k, q in theory.items():
        se = math.sqrt(float(q) * (1 - float(q)) / n)
        z[k] = (observed.get(k, 0.0) - float(q)) / se if se else 0.0
    return observed, z


def primes_one_mod_eight(l_max: int, sieve: Optional[FactorSieve] = None) -> List[int]:
    if sieve is not None and sieve.limit >= l_max:
        ps = sieve.primes(17, l_max)
        return [int(x) for x in ps[ps % 8 == 1]]
    return [l for l in range(17, l_max + 1, 8) if is_prime(l)]


def density_experiment(p: int, family: str, l_max: int, sieve: Optional[FactorSieve] = None) -> DensityReport:
    if p % 8 != 1 or not is_prime(p):
        raise ValueError(f"p={p} must be a prime = 1 (mod 8)")
    if family not in THEORETICAL:
        raise ValueError("family must be 'A' or 'B'")
    want = 1 if family == "A" else -1
    pos, neg = Counter(), Counter()
    n = 0
    for l in primes_one_mod_eight(l_max, sieve):
        if l == p or jacobi(l, p) != want:
            continue
        c = _classify(p, l)
        pos[c.predicted_rank_pos] += 1
        if c.predicted_rank_neg is not None:
            neg[c.predicted_rank_neg] += 1
        n += 1
    if n == 0:
        raise ValueError("no primes l in range")
    theory_pos, theory_neg = THEORETICAL[family]
    obs, z = _compare(pos, n, theory_pos)
    report = DensityReport(p, family, l_max, n, obs, theory_pos, z)
    if theory_neg is not None:
        report.observed_neg, report.z_scores_neg = _compare(neg, n, theory_neg)
        report.theoretical_neg = theory_neg
    return report


@lru_cache(maxsize=None)
def _classify(p: int, l: int):
    return classify_pl(p, l)


# --- congruence tables ------------------------------------------------------

# (sign, smaller residue, larger residue, (l/p) or 0) -> allowed 4-ranks.
# When one prime is 1 mod 8 it is "p" and the Legendre symbol is (l/p).
_ALLOWED: Dict[Tuple[int, int, int, int], frozenset] = {
    (1, 3, 3, 0): frozenset({0}),
    (1, 5, 5, 0): frozenset({1}),
    (1, 7, 7, 0): frozenset({1}),
    (1, 3, 5, 0): frozenset({1}),
    (1, 3, 7, 0): frozenset({1}),
    (1, 5, 7, 0): frozenset({1}),
    (1, 1, 3, -1): frozenset({0}),
    (1, 1, 3, 1): frozenset({1}),
    (1, 1, 5, -1): frozenset({0}),
    (1, 1, 5, 1): frozenset({1}),
    (1, 1, 7, -1): frozenset({1}),
    (1, 1, 7, 1): frozenset({1, 2}),
    (1, 1, 1, 1): frozenset({1, 2}),
    (1, 1, 1, -1): frozenset({0, 1}),
    (-1, 3, 3, 0): frozenset({1}),
    (-1, 5, 5, 0): frozenset({1}),
    (-1, 7, 7, 0): frozenset({1}),
    (-1, 3, 5, 0): frozenset({0}),
    (-1, 3, 7, 0): frozenset({0}),
    (-1, 5, 7, 0): frozenset({0}),
    (-1, 1, 1, -1): frozenset({1}),
    (-1, 1, 3, -1): frozenset({0}),
    (-1, 1, 3, 1): frozenset({1}),
    (-1, 1, 5, -1): frozenset({0}),
    (-1, 1, 5, 1): frozenset({1}),
    (-1, 1, 7, -1): frozenset({0}),
    (-1, 1, 7, 1): frozenset({0, 1}),
    (-1, 1, 1, 1): frozenset({1, 2}),
}


def _cell_name(key: Tuple[int, int, int, int]) -> str:
    sign, i, j, leg = key
    name = f"{'real' if sign > 0 else 'imaginary'}, p,l = {i},{j} mod 8"
    return name + (f", (l/p) = {leg:+d}" if leg else "")


CONGRUENCE_TABLES: Dict[Tuple[int, int, int, int], Tuple[str, frozenset]] = {
    key: (_cell_name(key), allowed) for key, allowed in _ALLOWED.items()
}


def table_cell(d: int, p: int, l: int) -> Tuple[int, int, int, int]:
    i, j = sorted((p % 8, l % 8))
    leg = 0
    if i == 1:
        q, r = (p, l) if p % 8 == 1 else (l, p)
        leg = jacobi(r, q)
    return (1 if d > 0 else -1, i, j, leg)


@dataclass
class TableCheckReport:
    bound: int
    checked: int
    cells: Dict[Tuple[int, int, int, int], Counter] = field(default_factory=dict)

    def split_proportions(self) -> Dict[Tuple[int, int, int, int], Dict[int, float]]:
        out = {}
        for key, counts in self.cells.items():
            if len(CONGRUENCE_TABLES[key][1]) > 1:
                n = sum(counts.values())
                out[key] = {k: c / n for k, c in sorted(counts.items())}
        return out


def congruence_table_check(bound: int, sieve: Optional[FactorSieve] = None) -> TableCheckReport:
    """Check every d = +-pl with |d| < bound against the congruence-class
    rules (and the {1,2} / {0,1} ranges for p = l = 1 mod 8).  Raises
    TableViolation on the first d outside its allowed set."""
    if sieve is None:
        sieve = build_sieve(max(bound, 16))
    report = TableCheckReport(bound, 0)
    if bound <= 15:
        return report
    for kind in ("X", "Y"):
        for rec in records(Family(kind, 15, bound - 1), sieve):
            p, l = rec.primes
            key = table_cell(rec.d, p, l)
            name, allowed = CONGRUENCE_TABLES[key]
            if rec.four_rank not in allowed:
                raise TableViolation(rec.d, f"{name} cell {key[1:]} allows {sorted(allowed)}, got {rec.four_rank}")
            report.cells.setdefault(key, Counter())[rec.four_rank] += 1
            report.checked += 1
    return report


# --- corollaries -----------------------------------------------------------

COROLLARY = {
    1: {
        1: {0: Fraction(5, 16), 1: Fraction(19, 32), 2: Fraction(3, 32)},
        3: {0: Fraction(3, 8), 1: Fraction(5, 8)},
        5: {0: Fraction(1, 8), 1: Fraction(7, 8)},
        7: {1: Fraction(15, 16), 2: Fraction(1, 16)},
        None: {0: Fraction(13, 64), 1: Fraction(97, 128), 2: Fraction(5, 128)},
    },
    -1: {
        1: {0: Fraction(3, 8), 1: Fraction(9, 16), 2: Fraction(1, 16)},
        3: {0: Fraction(5, 8), 1: Fraction(3, 8)},
        5: {0: Fraction(5, 8), 1: Fraction(3, 8)},
        7: {0: Fraction(11, 16), 1: Fraction(5, 16)},
        None: {0: Fraction(37, 64), 1: Fraction(13, 32), 2: Fraction(1, 64)},
    },
}


@dataclass
class PairCells:
    """Ordered-pair tallies: cells[i, j, s, r] for p = 2i+1, l = 2j+1 mod 8,
    s = [(l/p) = 1], 4-rank r.  Each d = +-pl is counted once per ordering."""

    sign: int
    bound: int
    cells: np.ndarray

    def class_counts(self, i: Optional[int] = None, j: Optional[int] = None) -> np.ndarray:
        sl_i = slice(None) if i is None else i // 2
        sl_j = slice(None) if j is None else j // 2
        sub = self.cells[sl_i, sl_j]
        return sub.reshape(-1, sub.shape[-1]).sum(axis=0)

    @property
    def total_d(self) -> int:
        return int(self.cells.sum()) // 2


def pair_tallies(sign: int, bound: int, sieve: FactorSieve) -> PairCells:
    cells, bad = kernels.pair_cells(15, bound - 1, sign, sieve.smallest_factor)
    if bad:
        raise InvariantViolation(f"rank computation failed at d={bad}")
    return PairCells(sign, bound, cells)


@dataclass
class CorollaryRow:
    label: str
    n: int
    observed: Dict[int, float]
    theoretical: Dict[int, Fraction]

    def max_deviation(self) -> float:
        return max(abs(self.observed.get(k, 0.0) - float(q)) for k, q in self.theoretical.items())


def corollary_check(pc: PairCells) -> List[CorollaryRow]:
    """Observed vs limiting proportions for X_1..X_7 and X (or Y_*, Y).

    Convergence is slow; this reports, it does not assert.
    """
    name = "X" if pc.sign > 0 else "Y"
    rows = []
    for i in (1, 3, 5, 7, None):
        counts = pc.class_counts(i)
        n = int(counts.sum())
        obs = {k: int(counts[k]) / n for k in range(len(counts)) if counts[k]} if n else {}
        label = f"{name}_{i}" if i else name
        rows.append(CorollaryRow(label, n if i else n // 2, obs, COROLLARY[pc.sign][i]))
    return rows
