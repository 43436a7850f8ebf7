from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qfc.localorbit import (BudgetExceeded, E_sum, ResidueRing, check_generating_identity, epsilon,
                            generating_identity, local_zeta_closed, orbital_series, orbital_series_bruteforce,
                            parity_support_ok, stabilizer_order_mod_p2, standard_rep)
from qfc.gf import field_of_order
from qfc.places import LOCAL_TYPES
from qfc.series import RationalFnU, b_local

SPLIT, INERT, RAMA, RAMB = LOCAL_TYPES


def test_standard_reps_q3():
    r = standard_rep(3, SPLIT)
    assert r.x == ((0,), (1,), (0,)) and r.P_digits() == [1, 0, 0] and r.P_abs == 1
    r = standard_rep(3, RAMA)
    assert r.x == ((1,), (0,), (0, 2))  # (1, 0, -pi)
    assert r.P_digits() == [0, 1, 0] and r.P_abs == Fraction(1, 3)  # P = 4 pi = pi
    r = standard_rep(3, INERT)
    F = field_of_order(3)
    lead = r.P_digits()[0]
    assert lead and not F.is_square_code(lead)
    assert not F.is_square_code(standard_rep(3, RAMB).P_digits()[1])


@pytest.mark.parametrize("qv", [3, 5, 7, 9])
def test_reps_have_the_advertised_square_class(qv):
    F = field_of_order(qv)
    for t in LOCAL_TYPES:
        r = standard_rep(qv, t)
        digits = r.P_digits()
        k = 1 if t.ramified else 0
        assert all(d == 0 for d in digits[:k]) and digits[k] != 0
        assert F.is_square_code(digits[k]) == r.unit_is_square


def test_unsupported_residue_field():
    for bad in (4, 6, 1):
        with pytest.raises(ValueError):
            standard_rep(bad, SPLIT)


def test_closed_forms():
    assert local_zeta_closed(SPLIT, 3) == RationalFnU([1], [1, -3])
    assert local_zeta_closed(INERT, 5) == RationalFnU([1, 1], [1, -6, 5])
    assert local_zeta_closed(RAMA, 7) == local_zeta_closed(RAMB, 7) == RationalFnU([1], [1, -8, 7])


def test_epsilon_values():
    assert epsilon(SPLIT, 3) == Fraction(4, 9)
    assert epsilon(INERT, 3) == Fraction(2, 9)
    assert epsilon(RAMA, 3) == epsilon(RAMB, 3) == Fraction(8, 81)


@given(st.sampled_from([3, 5, 7, 11, 13, 9, 25, 27, 49, 81, 121, 125]))
def test_epsilon_sum(qv):
    x = Fraction(1, qv)
    assert E_sum(qv) == 1 - x ** 2 - x ** 3 + x ** 4
    assert all(epsilon(t, qv) == b_local(t, qv) for t in LOCAL_TYPES)


def test_first_volumes_by_direct_count():
    # mod pi: 12 of 27 triples have P a nonzero square, 6 a nonsquare
    assert orbital_series(standard_rep(3, SPLIT), 0, precision=1).coeffs[0] == Fraction(12, 27)
    assert orbital_series(standard_rep(3, INERT), 0, precision=1).coeffs[0] == Fraction(6, 27)
    v = orbital_series(standard_rep(3, RAMA), 1).coeffs
    assert v[1] == Fraction(1, 2) * Fraction(1, 3) * Fraction(2, 3) * Fraction(8, 9)


@pytest.mark.parametrize("t", LOCAL_TYPES)
@pytest.mark.parametrize("qv,M,N", [(3, 2, 3), (3, 1, 2), (5, 1, 2)])
def test_histogram_agrees_with_bruteforce(t, qv, M, N):
    rep = standard_rep(qv, t)
    assert orbital_series(rep, M, N).coeffs == orbital_series_bruteforce(rep, M, N).coeffs


@pytest.mark.parametrize("t", LOCAL_TYPES)
def test_counting_stabilizes(t):
    rep = standard_rep(3, t)
    base = orbital_series(rep, 2, precision=4).coeffs
    assert orbital_series(rep, 2, precision=5).coeffs == base
    for m in range(3):
        assert orbital_series(rep, m, precision=m + 2).coeffs[m] == base[m]
        assert orbital_series(rep, m, precision=m + 3).coeffs[m] == base[m]


@pytest.mark.parametrize("t", LOCAL_TYPES)
@pytest.mark.parametrize("qv,M", [(3, 3), (5, 2), (7, 1)])
def test_generating_identity(t, qv, M):
    s = orbital_series(standard_rep(qv, t), M)
    assert parity_support_ok(s)
    assert all(c >= 0 for c in s.coeffs)
    lhs, rhs = generating_identity(s)
    assert lhs == rhs and check_generating_identity(s)


def test_generating_identity_detects_errors():
    s = orbital_series(standard_rep(3, SPLIT), 2)
    bad = type(s)(s.qv, INERT, s.coeffs, s.precision)
    assert not check_generating_identity(bad)


def test_residue_ring_arithmetic():
    R = ResidueRing(field_of_order(9), 2)
    el = R.all()
    assert R.codes(el).tolist() == list(range(81))
    one = R.scalar(1)
    assert (R.codes(R.mul(el, one)) == range(81)).all()
    pi = R.element([0, 1])
    assert int(R.codes(R.mul(pi, pi))) == 0
    ordv, lead = R.valuation_and_residue([0, 1, 9, 18, 10])
    assert ordv.tolist() == [2, 0, 1, 1, 0] and lead.tolist() == [0, 1, 1, 2, 1]


@pytest.mark.parametrize("t", LOCAL_TYPES)
def test_stabilizers_q3(t):
    st_ = stabilizer_order_mod_p2(standard_rep(3, t))
    assert st_.group_order == 3 ** 6 * 2 ** 2 * 8 == 23328
    assert st_.stabilizer_order * st_.orbit_size == st_.group_order
    assert st_.orbit_volume == epsilon(t, 3)
    if t.ramified:
        assert st_.stabilizer_order == 2 * 2 * 3 ** 4 == 324


def test_budgets():
    with pytest.raises(BudgetExceeded):
        orbital_series(standard_rep(3, SPLIT), 4, budget=1000)
    with pytest.raises(BudgetExceeded):
        stabilizer_order_mod_p2(standard_rep(9, RAMA))
