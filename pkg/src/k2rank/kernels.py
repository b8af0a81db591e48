"""int64 kernels for the survey hot loop.

These mirror :mod:`k2rank.arith`, :mod:`k2rank.localsym`, :mod:`k2rank.gf2`
and :func:`k2rank.fourrank.four_rank`, restricted to machine integers so
numba can compile them.  With ``K2RANK_NO_JIT=1`` they run as ordinary
Python, which is slow but gives identical results.

Family codes: 0 = all t >= 1, 2 = t == 2, 3 = t == 3.
"""

from __future__ import annotations

import math

import numpy as np

from ._jit import njit

MAX_T = 16
# columns of the record array produced by rank_records
REC_D, REC_T, REC_TWO, REC_M1, REC_V, REC_RANK, REC_A, REC_AP, REC_R4 = range(9)
REC_WIDTH = 9


@njit
def jacobi(a, n):
    a = a % n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = n % 8
            if r == 3 or r == 5:
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a = a % n
    if n == 1:
        return result
    return 0


@njit
def _eps(x):
    return ((x - 1) // 2) % 2


@njit
def _omega(x):
    return ((x * x - 1) // 8) % 2


@njit
def hilbert_odd(a, b, p):
    alpha = 0
    while a % p == 0:
        a //= p
        alpha += 1
    beta = 0
    while b % p == 0:
        b //= p
        beta += 1
    s = 1
    if (alpha * beta * ((p - 1) // 2)) % 2 == 1:
        s = -s
    if beta % 2 == 1:
        s *= jacobi(a, p)
    if alpha % 2 == 1:
        s *= jacobi(b, p)
    return s


@njit
def hilbert_2(a, b):
    alpha = 0
    while a % 2 == 0:
        a //= 2
        alpha += 1
    beta = 0
    while b % 2 == 0:
        b //= 2
        beta += 1
    e = _eps(a) * _eps(b) + alpha * _omega(b) + beta * _omega(a)
    if e % 2 == 1:
        return -1
    return 1


@njit
def hilbert_at(a, b, q):
    if q == 2:
        return hilbert_2(a, b)
    return hilbert_odd(a, b, q)


@njit
def isqrt(m):
    r = int(math.sqrt(m))
    while r * r > m:
        r -= 1
    while (r + 1) * (r + 1) <= m:
        r += 1
    return r


@njit
def pell_minimal(n):
    """(u, w) with u^2 - 2w^2 = n, minimal w, u >= 0; (-1, -1) if none found."""
    an = n if n > 0 else -n
    bound = int(math.ceil((1.0 + math.sqrt(2.0)) * math.sqrt(an / 2.0))) + 2
    w = 0
    if n < 0:
        w = isqrt((an + 1) // 2)
    while w <= bound:
        m = n + 2 * w * w
        if m >= 0:
            u = isqrt(m)
            if u * u == m:
                return u, w
        w += 1
    return -1, -1


@njit
def gf2_rank(rows, nrows):
    rk = 0
    for i in range(nrows):
        pivot = rows[i]
        if pivot == 0:
            continue
        rk += 1
        low = pivot & -pivot
        for j in range(i + 1, nrows):
            if rows[j] & low:
                rows[j] ^= pivot
    return rk


@njit
def factor_into(n, spf, buf):
    """Write the prime factors of odd n into buf; return t, or -1 if n is
    even, 1, or not squarefree."""
    if n <= 1 or n % 2 == 0:
        return -1
    t = 0
    prev = 0
    while n > 1:
        p = int(spf[n])
        if p == prev:
            return -1
        buf[t] = p
        t += 1
        prev = p
        n //= p
    return t


@njit
def four_rank_core(d, primes, t, out):
    """Fill one record row for d whose odd prime factors are primes[:t]."""
    two = 1
    for i in range(t):
        r = primes[i] % 8
        if r != 1 and r != 7:
            two = 0
            break
    m1 = 0
    if d > 0 and hilbert_2(-1, d) == 1:
        m1 = 1
        for i in range(t):
            if hilbert_odd(-1, d, primes[i]) != 1:
                m1 = 0
                break
    v = 2
    if two == 1:
        u, w = pell_minimal(d)
        if u < 0:
            return False
        v = u + w
    rows = np.zeros(t + 1, dtype=np.int64)
    nd = -d
    for i in range(t):
        b = primes[i] if i < t - 1 else v
        word = 0
        if hilbert_2(nd, b) == -1:
            word |= 1
        for j in range(t):
            if hilbert_odd(nd, b, primes[j]) == -1:
                word |= 1 << (j + 1)
        rows[i] = word
    last = d if d > 0 else nd
    word = 0
    if hilbert_2(last, -1) == -1:
        word |= 1
    for j in range(t):
        if hilbert_odd(last, -1, primes[j]) == -1:
            word |= 1 << (j + 1)
    rows[t] = word
    rk = gf2_rank(rows, t + 1)
    a = 1 - two
    m2 = 0
    if d > 0 and hilbert_2(-2, d) == 1:
        m2 = 1
        for i in range(t):
            if hilbert_odd(-2, d, primes[i]) != 1:
                m2 = 0
                break
    # 2^a' is the index of the norms inside {+-1, +-2}
    ap = 2 - (two + m1 + m2 + 1) // 2
    r4 = t - rk
    if d > 0:
        r4 += ap - a
    out[REC_D] = d
    out[REC_T] = t
    out[REC_TWO] = two
    out[REC_M1] = m1
    out[REC_V] = v
    out[REC_RANK] = rk
    out[REC_A] = a
    out[REC_AP] = ap
    out[REC_R4] = r4
    return True


@njit
def _admissible(t, fam):
    if t < 1:
        return False
    if fam == 0:
        return True
    return t == fam


@njit
def _pair_match(primes, fi, fj):
    if fi < 0:
        return True
    a = primes[0] % 8
    b = primes[1] % 8
    return (a == fi and b == fj) or (a == fj and b == fi)


@njit
def tally_range(lo, hi, sign, fam, fi, fj, spf):
    """Counts of 4-rank values over sign*n, lo <= n <= hi.

    Returns (counts, status): counts[k] for 4-rank k (k < MAX_T); status is
    0 on success, otherwise the offending d (Pell failure or out-of-range
    4-rank).
    """
    counts = np.zeros(MAX_T, dtype=np.int64)
    buf = np.zeros(MAX_T, dtype=np.int64)
    out = np.zeros(REC_WIDTH, dtype=np.int64)
    for n in range(lo, hi + 1):
        t = factor_into(n, spf, buf)
        if not _admissible(t, fam):
            continue
        if fi >= 0 and not _pair_match(buf, fi, fj):
            continue
        d = sign * n
        if not four_rank_core(d, buf, t, out):
            return counts, d
        r4 = out[REC_R4]
        if r4 < 0 or r4 > t:
            return counts, d
        counts[r4] += 1
    return counts, 0


@njit
def rank_records(lo, hi, sign, fam, fi, fj, spf):
    """Per-d records (see REC_* columns) plus the factor lists."""
    buf = np.zeros(MAX_T, dtype=np.int64)
    out = np.zeros(REC_WIDTH, dtype=np.int64)
    cap = 16
    recs = np.zeros((cap, REC_WIDTH), dtype=np.int64)
    facs = np.zeros((cap, MAX_T), dtype=np.int64)
    k = 0
    for n in range(lo, hi + 1):
        t = factor_into(n, spf, buf)
        if not _admissible(t, fam):
            continue
        if fi >= 0 and not _pair_match(buf, fi, fj):
            continue
        d = sign * n
        if not four_rank_core(d, buf, t, out):
            out[:] = 0
            out[REC_D] = d
            out[REC_R4] = -1
        if k == cap:
            cap *= 2
            r2 = np.zeros((cap, REC_WIDTH), dtype=np.int64)
            r2[:k] = recs[:k]
            recs = r2
            f2 = np.zeros((cap, MAX_T), dtype=np.int64)
            f2[:k] = facs[:k]
            facs = f2
        recs[k] = out
        facs[k, :] = 0
        facs[k, :t] = buf[:t]
        k += 1
    return recs[:k], facs[:k]


@njit
def pair_cells(lo, hi, sign, spf):
    """Ordered-pair tallies for d = sign*p*l.

    cells[i, j, s, r] counts ordered (p, l) with p = 2i+1, l = 2j+1 (mod 8),
    s = 0 if (l/p) = -1 else 1, and 4-rank r.  Each d contributes twice.
    """
    cells = np.zeros((4, 4, 2, 4), dtype=np.int64)
    buf = np.zeros(MAX_T, dtype=np.int64)
    out = np.zeros(REC_WIDTH, dtype=np.int64)
    for n in range(lo, hi + 1):
        t = factor_into(n, spf, buf)
        if t != 2:
            continue
        d = sign * n
        if not four_rank_core(d, buf, t, out):
            return cells, d
        r4 = out[REC_R4]
        for k in range(2):
            p = buf[k]
            l = buf[1 - k]
            s = 1 if jacobi(l, p) == 1 else 0
            cells[(p % 8) // 2, (l % 8) // 2, s, r4] += 1
    return cells, 0
