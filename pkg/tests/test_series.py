import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from qfc.gf import field_of_order
from qfc.localorbit import local_zeta_closed
from qfc.places import LOCAL_TYPES, Place, all_places_up_to, parse_place
from qfc.quadext import enumerate_extensions
from qfc.series import (BaseFieldInfo, E_local, KINDS, PowerSeriesU, RationalFnU, b_local, eta_dominating,
                        eta_dominating_value, eta_local_factor, eta_series, euler_product, euler_product_E,
                        predicted_constant, tail_coefficient_growth, zeta_rational, zeta_truncated, zeta_value)

F3 = field_of_order(3)


@st.composite
def series(draw, order=6, unit=False):
    cs = draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7),
                       min_size=order + 1, max_size=order + 1))
    if unit and cs[0] == 0:
        cs[0] = Fraction(1)
    return PowerSeriesU(3, cs)


@given(series(), series(), series())
def test_series_ring_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(series(unit=True))
def test_series_inverse(a):
    assert a * a.inverse() == PowerSeriesU.one(3, a.order)


def test_orders_combine_to_minimum():
    a = PowerSeriesU(3, [1, 1, 1, 1])
    b = PowerSeriesU(3, [1, 2])
    assert (a * b).order == 1 and (a + b).order == 1


def test_zeta_values():
    Z = zeta_rational(3)
    assert zeta_value(3, 2) == Fraction(27, 16)
    assert Z.limit_times([1, -3], Fraction(1, 3)) == Fraction(3, 2)
    for q in (3, 5, 9):
        cs = zeta_rational(q).series(q, 8).coeffs
        assert list(cs) == [Fraction(q ** (n + 1) - 1, q - 1) for n in range(9)]


def test_truncated_zeta_matches_closed_form():
    for q in (3, 5):
        assert zeta_truncated(q, [], 7) == zeta_rational(q).series(q, 7)
    deg1 = [v for v in all_places_up_to(F3, 1)]
    assert len(deg1) == 4 and zeta_truncated(3, deg1, 5)[1] == 0


def test_truncation_is_exact():
    T = [parse_place("t", F3), Place.infinite(3)]
    a = zeta_truncated(3, T, 6)
    assert zeta_truncated(3, T, 8).truncate(6) == a
    assert eta_dominating(3, T, 8).truncate(6) == eta_dominating(3, T, 6)


def test_argument_shifts():
    z = zeta_rational(3)
    assert z.series(3, 5).shift_s_minus_one() == z.scale_variable(3).series(3, 5)
    assert z.series(3, 6).double_s() == z.substitute_power(2).series(3, 6)


def test_tail_coefficient_growth():
    assert tail_coefficient_growth(RationalFnU.from_factors(den_factors=[(1, -27)]), Fraction(1, 27)) == 1
    assert tail_coefficient_growth(zeta_rational(3), Fraction(1, 3)) == Fraction(3, 2)
    f = RationalFnU.from_factors(den_factors=[(1, -1), (1, -27)])
    assert tail_coefficient_growth(f, Fraction(1, 27)) == Fraction(27, 26)
    # numerically: c_n / 27^n approaches the constant
    c = f.series(3, 12).coeffs
    assert abs(c[12] / Fraction(27) ** 12 - Fraction(27, 26)) < Fraction(1, 10 ** 15)
    with pytest.raises(ValueError):
        tail_coefficient_growth(f, Fraction(1, 5))


@pytest.mark.parametrize("t", LOCAL_TYPES)
@pytest.mark.parametrize("d", [1, 2, 3])
def test_eta_factor_is_the_local_zeta(t, d):
    assert eta_local_factor(t, 3, d) == local_zeta_closed(t, 3 ** d).substitute_power(d)


def test_eta_properties_sampled():
    exts = enumerate_extensions(F3, 2)
    places = all_places_up_to(F3, 6)
    dom = eta_dominating(3, [], 6)
    for E in random.Random(1).sample(exts, 50):
        eta = eta_series(E, [], 6, places)
        assert eta[0] == 1
        assert all(c >= 0 for c in eta)
        assert eta.dominated_by(dom)


def test_eta_trivial_when_all_places_removed():
    E = enumerate_extensions(F3, 2)[0]
    T = all_places_up_to(F3, 3)
    assert eta_series(E, T, 3) == PowerSeriesU.one(3, 3)


def test_eta_dominating_value_decreases_to_one():
    vals = [eta_dominating_value(3, all_places_up_to(F3, B) if B else [], 3) for B in range(0, 4)]
    assert all(a > b > 1 for a, b in zip(vals, vals[1:]))
    assert vals[-1] - 1 < Fraction(1, 100)


def test_euler_factor_and_table():
    assert E_local(3) == Fraction(70, 81)
    for qv in (3, 9, 25):
        assert sum(b_local(t, qv) for t in LOCAL_TYPES) == E_local(qv)


def test_euler_product_tail_is_certified():
    for S in ([], [Place.infinite(3)], [parse_place("t^2+1", F3)]):
        v6, t6 = euler_product_E(3, S, 6)
        v12, t12 = euler_product_E(3, S, 12)
        assert abs(v12 - v6) <= t6
        assert t12 < mpmath.mpf("1e-4")
    for kind in ("average", "density"):
        a, b = euler_product(kind, 3, (), 5), euler_product(kind, 3, (), 10)
        assert abs(a.value - b.value) <= a.tail


def test_removing_infinity_divides_by_its_factor():
    v, _ = euler_product_E(3, [], 12)
    w, _ = euler_product_E(3, [Place.infinite(3)], 12)
    assert mpmath.almosteq(w, v / mpmath.mpf(70) * 81, rel_eps=mpmath.mpf(10) ** -30)


def test_predicted_constants_at_q3():
    info = BaseFieldInfo(3)
    assert info.c == Fraction(1, 2) and info.zeta2 == Fraction(27, 16)
    mv = predicted_constant(info, "mean_value")
    assert mv.prefactor == Fraction(27, 16)
    assert abs(mv.value - mpmath.mpf("0.889746679697")) < 1e-10 and mv.tail < 1e-4
    dens = predicted_constant(info, "density")
    assert dens.exact == Fraction(16, 9)
    # the truncated product approaches the closed form
    assert abs(dens.prefactor * dens.product.value - mpmath.mpf(16) / 9) <= dens.prefactor * dens.product.tail
    avg = predicted_constant(info, "average")
    gavg = predicted_constant(info, "genus_average")
    assert gavg.prefactor == 3 * avg.prefactor
    # average = mean value / density
    assert abs(avg.value - mv.value / dens.value) < 1e-6
    filt = predicted_constant(info, "filtering")
    assert filt.prefactor * 2 == mv.prefactor
    assert set(KINDS) == {"mean_value", "filtering", "density", "average", "genus_average"}


def test_predicted_constant_conditions():
    v = parse_place("t", F3)
    info = BaseFieldInfo(3)
    parts = [predicted_constant(info, "mean_value", {v: t}).value for t in LOCAL_TYPES]
    assert abs(sum(parts) - predicted_constant(info, "mean_value").value) < 1e-7
    with pytest.raises(ValueError):
        predicted_constant(info, "mean_value", {v: "split"})
    with pytest.raises(ValueError):
        predicted_constant(info, "nonsense")
