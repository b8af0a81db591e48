import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k2rank.arith import (
    PellSolution,
    build_sieve,
    factor_odd_squarefree,
    is_prime,
    jacobi,
    pell_unit_apply,
    solve_x2_minus_2y2,
    solve_x2_plus_32y2,
    sqrt_mod,
)
from k2rank.errors import NonResidue, NotOddSquarefree, NotRepresented, SieveTooLarge


def trial_division(n):
    out, q = [], 2
    while q * q <= n:
        while n % q == 0:
            out.append(q)
            n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def naive_prime(n):
    return n >= 2 and all(n % q for q in range(2, math.isqrt(n) + 1))


def test_is_prime_matches_naive_below_20000():
    assert [n for n in range(20_000) if is_prime(n)] == [n for n in range(20_000) if naive_prime(n)]


@pytest.mark.parametrize(
    "n, expected",
    [
        (2**61 - 1, True),
        (9223372036854775783, True),  # largest prime below 2^63
        (3215031751, False),  # strong pseudoprime to bases 2, 3, 5, 7
        (341550071728321, False),  # strong pseudoprime to bases 2..17
        (2**62 + 1, False),
    ],
)
def test_is_prime_large(n, expected):
    assert is_prime(n) is expected


def test_sieve_factor_matches_trial_division():
    s = build_sieve(5000)
    for n in range(1, 5001):
        assert s.factor(n) == trial_division(n)
    assert list(s.primes(2, 30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_sieve_is_read_only():
    s = build_sieve(100)
    with pytest.raises(ValueError):
        s.smallest_factor[5] = 1


def test_sieve_budget():
    with pytest.raises(SieveTooLarge):
        build_sieve(1000, budget=999)


def test_factor_odd_squarefree(sieve_small):
    assert factor_odd_squarefree(-15, sieve_small) == [3, 5]
    assert factor_odd_squarefree(161, sieve_small) == [7, 23]
    for bad in (1, -1, 9, 45, 30, 0):
        with pytest.raises(NotOddSquarefree):
            factor_odd_squarefree(bad, sieve_small)


def test_jacobi_examples():
    assert jacobi(3, 7) == -1
    assert jacobi(2, 17) == 1
    assert jacobi(15, 45) == 0
    with pytest.raises(ValueError):
        jacobi(3, 8)


@given(st.integers(-10**6, 10**6), st.integers(1, 2000).map(lambda k: 2 * k + 1))
def test_jacobi_is_product_of_legendre(a, n):
    expected = 1
    for q in trial_division(n):
        r = a % q
        expected *= 0 if r == 0 else (1 if pow(r, (q - 1) // 2, q) == 1 else -1)
    assert jacobi(a, n) == expected


def test_sqrt_mod_examples():
    assert sqrt_mod(2, 17) == 6
    assert sqrt_mod(0, 13) == 0
    with pytest.raises(NonResidue):
        sqrt_mod(3, 7)


@settings(max_examples=300)
@given(st.sampled_from([p for p in range(3, 3000, 2) if naive_prime(p)]), st.integers(1, 10**6))
def test_sqrt_mod_roundtrip(p, x):
    a = x * x % p
    r = sqrt_mod(a, p)
    assert r * r % p == a and r <= p - r


def test_pell_examples():
    assert solve_x2_minus_2y2(7).as_tuple() == (3, 1)
    assert solve_x2_minus_2y2(17).as_tuple() == (5, 2)
    assert solve_x2_minus_2y2(-7).as_tuple() == (1, 2)
    with pytest.raises(NotRepresented):
        solve_x2_minus_2y2(3)
    with pytest.raises(ValueError):
        PellSolution(3, 2, 7)


@given(st.integers(-5000, 5000).filter(bool))
def test_pell_minimal_against_scan(n):
    # brute-force scan over a generous box
    found = [(u, w) for w in range(0, 200) for u in [math.isqrt(max(n + 2 * w * w, 0))]
             if n + 2 * w * w >= 0 and u * u == n + 2 * w * w]
    try:
        s = solve_x2_minus_2y2(n)
    except NotRepresented:
        assert not found
        return
    assert found and s.w == found[0][1]


def test_x2_plus_32y2():
    assert solve_x2_plus_32y2(113) == (9, 1)
    assert solve_x2_plus_32y2(41) == (3, 1)
    with pytest.raises(NotRepresented):
        solve_x2_plus_32y2(17)


def test_unit_apply():
    s = pell_unit_apply(PellSolution(3, 1, 7))
    assert s.as_tuple() == (13, 9) and s.n_value == 7
