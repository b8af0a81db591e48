import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k2rank import forms
from k2rank.arith import is_prime, jacobi
from k2rank.errors import InvalidDiscriminant, RangeExceeded
from k2rank.forms import (
    classify_pl,
    form_representation_check,
    narrow_class_number,
    p_form_has_order_two,
    pell_fundamental,
    pell_pi,
    pi_symbol,
    reduce_form,
    same_narrow_class,
    satisfies_1_32,
)
from k2rank.fourrank import four_rank

P1 = [p for p in range(17, 4000, 8) if is_prime(p)]


def fundamental_unit(D):
    """Smallest x + y sqrt D > 1 of norm +-1, with its norm."""
    a0 = math.isqrt(D)
    m, q, a = 0, 1, a0
    h_prev, h, k_prev, k = 1, a0, 0, 1
    while abs(h * h - D * k * k) != 1:
        m = a * q - m
        q = (D - m * m) // q
        a = (a0 + m) // q
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    return h, k, h * h - D * k * k


def analytic_h_plus(p):
    """Narrow class number of Q(sqrt 2p) from h log(eps) = -sum chi(a) log sin(pi a / D)."""
    D = 8 * p
    s = -sum(jacobi(D, a) * math.log(math.sin(math.pi * a / D)) for a in range(1, D // 2, 2))
    x, y, norm = fundamental_unit(2 * p)
    h = round(s / math.log(x + y * math.sqrt(2 * p)))
    return h if norm == -1 else 2 * h


def test_satisfies_1_32():
    assert satisfies_1_32(113) and satisfies_1_32(41)
    assert not satisfies_1_32(17) and not satisfies_1_32(97)
    with pytest.raises(ValueError):
        satisfies_1_32(23)


def test_pell_pi():
    assert pell_pi(17).as_tuple() == (5, 2)
    assert pell_pi(41).as_tuple() == (7, 2)
    assert pell_pi(73).as_tuple() == (9, 2)


def test_pi_symbol_requires_residue():
    assert jacobi(89, 17) == 1
    pi_symbol(17, 89)
    with pytest.raises(ValueError):
        pi_symbol(17, 41)  # (41/17) = -1


def test_classify_examples():
    c = classify_pl(17, 89)
    assert (c.predicted_rank_pos, c.predicted_rank_neg) == (1, 2)
    assert c.l_form == "<1,-2p>"
    c = classify_pl(17, 41)
    assert c.legendre_lp == -1 and c.predicted_rank_neg is None and c.l_form is None
    with pytest.raises(ValueError):
        classify_pl(17, 17)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(P1[:60]), st.sampled_from(P1[:60]))
def test_classify_matches_matrix(p, l):
    if p == l:
        return
    c = classify_pl(p, l)
    assert c.predicted_rank_pos == four_rank(p * l).four_rank
    if c.predicted_rank_neg is not None:
        assert c.predicted_rank_neg == four_rank(-p * l).four_rank


def test_narrow_class_number_examples():
    assert narrow_class_number(8).h_plus == 1
    assert narrow_class_number(136).h_plus == 4
    assert narrow_class_number(5).h_plus == 1
    for bad in (0, -8, 9, 7):
        with pytest.raises(InvalidDiscriminant):
            narrow_class_number(bad)


@pytest.mark.parametrize("p", P1[:40])
def test_h_plus_vs_analytic_formula(p):
    h = narrow_class_number(8 * p).h_plus
    assert h == analytic_h_plus(p)
    assert h % 4 == 0


def test_pell_fundamental():
    assert pell_fundamental(2) == (3, 2)
    assert pell_fundamental(146) == (145, 12)


def test_reduction_and_classes():
    D = 136
    f = reduce_form((17, 0, -2), D)
    assert forms.is_reduced(f, D)
    assert same_narrow_class((1, 0, -34), (1, 0, -34), D)
    # 35 + 6 sqrt 34 has norm +1, so -1 is not a narrow norm
    assert not same_narrow_class((1, 0, -34), (-1, 0, 34), D)
    with pytest.raises(InvalidDiscriminant):
        reduce_form((1, 0, -3), D)


def test_p_form_order_two():
    assert p_form_has_order_two(17)
    assert not p_form_has_order_two(73)


def test_representation_check_consistent():
    r = narrow_class_number(8 * 17)
    sat_p, sat_1, ok = form_representation_check(17, 89, r)
    assert ok and sat_1 and not sat_p
    with pytest.raises(ValueError):
        form_representation_check(17, 89, narrow_class_number(8 * 41))


def test_representation_check_outside_premise():
    # 73 n^2 - 2 m^2 and n^2 - 146 m^2 reach -89 but not +89
    sat_p, sat_1, ok = form_representation_check(73, 89, narrow_class_number(8 * 73))
    assert (sat_p, sat_1, ok) == (False, False, False)


def test_representation_check_budget(monkeypatch):
    monkeypatch.setattr(forms, "REPRESENTATION_SEARCH_BUDGET", 1)
    with pytest.raises(RangeExceeded):
        form_representation_check(17, 89, narrow_class_number(8 * 17))
