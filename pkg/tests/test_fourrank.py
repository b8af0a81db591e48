import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k2rank.arith import PellSolution, pell_unit_apply
from k2rank.errors import NotOddSquarefree
from k2rank.fourrank import (
    build_matrix,
    choose_v,
    field_spec,
    four_rank,
    is_local_norm,
    norms_from_field,
    odd_prime_factors,
)


def odd_squarefree(n):
    if n % 2 == 0 or n < 3:
        return False
    q = 3
    while q * q <= n:
        if n % (q * q) == 0:
            return False
        q += 2
    return True


signed_d = st.integers(3, 200_000).filter(odd_squarefree).flatmap(lambda n: st.sampled_from([n, -n]))


@pytest.mark.parametrize(
    "d, expected",
    [(15, (False, False)), (7, (True, False)), (17, (True, True)), (-15, (False, False)), (-17, (True, False))],
)
def test_norms_from_field(d, expected):
    assert norms_from_field(d, odd_prime_factors(d)) == expected


@settings(max_examples=300)
@given(signed_d)
def test_norm_tests_match_hasse(d):
    primes = odd_prime_factors(d)
    two, m1 = norms_from_field(d, primes)
    assert two == is_local_norm(2, d, primes)
    assert m1 == is_local_norm(-1, d, primes)
    assert field_spec(d).minus_two_is_norm == is_local_norm(-2, d, primes)


def test_choose_v():
    assert choose_v(15, field_spec(15))[0] == 2
    v, pell = choose_v(7, field_spec(7))
    assert v == 4 and pell.as_tuple() == (3, 1)


def test_build_matrix_grids():
    m = build_matrix(15)
    assert m.sign_grid == ((1, -1, -1), (1, -1, -1), (-1, -1, 1))
    assert m.column_labels == (2, 3, 5) and m.row_labels == (3, 2, -1)
    assert build_matrix(-15).sign_grid == ((-1, 1, -1), (1, -1, -1), (-1, -1, 1))


@pytest.mark.parametrize(
    "d, r4, rank, a, ap",
    [(15, 1, 2, 1, 2), (-15, 0, 2, 1, 2), (33, 0, 2, 1, 1), (161, 1, 2, 0, 1), (7, 1, 1, 0, 1), (-7, 0, 1, 0, 1)],
)
def test_four_rank_examples(d, r4, rank, a, ap):
    r = four_rank(d)
    assert (r.four_rank, r.rank, r.a, r.a_prime) == (r4, rank, a, ap)


def test_a_prime_index_rule():
    # -2 the only nontrivial norm in {-1, 2, -2}: index 2, so a' = 1
    spec = field_spec(33)
    assert (spec.two_is_norm, spec.minus_one_is_norm, spec.minus_two_is_norm) == (False, False, True)
    assert spec.norm_index_log2 == 1
    assert field_spec(15).norm_index_log2 == 2
    assert field_spec(17).norm_index_log2 == 0


def test_rejects_bad_d():
    for d in (1, -1, 0, 9, 12, -45):
        with pytest.raises(NotOddSquarefree):
            four_rank(d)


def test_sieve_and_trial_division_agree(sieve_small):
    for d in (15, -15, 3 * 5 * 7 * 11 * 13, -(3 * 5 * 7 * 11 * 13), 199_999):
        assert odd_prime_factors(d, sieve_small) == odd_prime_factors(d)


@settings(max_examples=300)
@given(signed_d)
def test_rank_bounds(d):
    r = four_rank(d)
    assert 0 <= r.four_rank <= r.t
    assert 0 <= r.rank <= r.t + 1
    assert len(r.matrix.sign_grid) == r.t + 1


@settings(max_examples=300)
@given(signed_d)
def test_pell_choice_independence(d):
    base = four_rank(d)
    if not base.spec.two_is_norm:
        return
    s = base.matrix.pell
    for alt in (pell_unit_apply(s), PellSolution(-s.u, s.w, d), PellSolution(s.u, -s.w, d)):
        if all((alt.u + alt.w) % p for p in base.spec.primes):
            assert four_rank(d, pell=alt).four_rank == base.four_rank
