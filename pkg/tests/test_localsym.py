import pytest
from hypothesis import given
from hypothesis import strategies as st

from k2rank.errors import DegenerateSymbol
from k2rank.localsym import hilbert, hilbert_2, hilbert_inf, hilbert_odd, quad_symbol_sqrt2
from k2rank.verify import symbols_suite

nonzero = st.integers(-3000, 3000).filter(bool)




def test_examples():
    assert hilbert_odd(-15, 3, 3) == -1
    assert hilbert_odd(-15, 3, 5) == -1
    assert hilbert_2(-15, 2) == 1
    assert hilbert_2(3, 3) == -1
    assert hilbert_inf(-1, -1) == -1 and hilbert_inf(-1, 3) == 1
    assert hilbert(-15, 3, "inf") == 1


def test_dispatch_matches_direct():
    assert hilbert(5, 7, 2) == hilbert_2(5, 7)
    assert hilbert(5, 7, 7) == hilbert_odd(5, 7, 7)


def test_odd_symbol_against_local_solutions():
    # unit-unit and unit-uniformizer cases at p = 3, 5
    for p in (3, 5):
        for a in range(1, p):
            for b in (1, 2, p, 2 * p):
                got = hilbert_odd(a, b, p)
                if b % p:
                    assert got == 1
                else:
                    assert got == (1 if pow(a, (p - 1) // 2, p) == 1 else -1)


@given(nonzero, nonzero)
def test_product_formula(a, b):
    places = ["inf", 2] + [q for q in range(3, 3001, 2) if (a % q == 0 or b % q == 0)
                           and all(q % r for r in range(3, int(q**0.5) + 1, 2))]
    prod = 1
    for v in places:
        prod *= hilbert(a, b, v)
    assert prod == 1


@given(nonzero, nonzero, nonzero)
def test_bilinear_and_symmetric_at_2(a, a2, b):
    assert hilbert_2(a * a2, b) == hilbert_2(a, b) * hilbert_2(a2, b)
    assert hilbert_2(a, b) == hilbert_2(b, a)


@given(nonzero)
def test_a_minus_a(a):
    for v in ("inf", 2, 3, 5, 7):
        assert hilbert(a, -a, v) == 1
    if a != 1:
        for v in ("inf", 2, 3, 5):
            assert hilbert(a, 1 - a, v) == 1


def test_quad_symbol_examples():
    assert quad_symbol_sqrt2(1, 1, 113) == 1
    assert quad_symbol_sqrt2(1, 1, 97) == -1
    assert quad_symbol_sqrt2(5, 2, 89) == 1
    with pytest.raises(ValueError):
        quad_symbol_sqrt2(1, 1, 7)
    # 6 + sqrt 2 = 0 mod 17 when sqrt 2 = 11
    with pytest.raises(DegenerateSymbol):
        quad_symbol_sqrt2(6, 1, 17, alpha=11)


def test_quad_symbol_conjugate_units_agree():
    # (1 + sqrt 2)(1 - sqrt 2) = -1 is a square mod l = 1 mod 8
    for l in (17, 41, 73, 89, 97, 113):
        assert quad_symbol_sqrt2(1, 1, l) == quad_symbol_sqrt2(1, -1, l)


def test_symbols_suite_small():
    res = symbols_suite(max_value=500, samples=500, seed=1)
    assert res.passed and res.checked == 500
