import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qfc.gf import (FieldElement, FieldError, GF, embed, embedding_table, field_of_order, least_irreducible, make_field,
                    prime_power)

ORDERS = [3, 5, 7, 9, 25, 27, 81]


def test_prime_power():
    assert prime_power(27) == (3, 3)
    assert prime_power(7) == (7, 1)
    for bad in (1, 6, 12, 0):
        with pytest.raises(FieldError):
            prime_power(bad)


def test_characteristic_two_rejected():
    with pytest.raises(FieldError):
        GF(2, 1)
    with pytest.raises(FieldError):
        field_of_order(4)


def test_f9_modulus_is_least_irreducible():
    # t^2 + 1 is the first monic quadratic over F_3 without roots
    assert field_of_order(9).modulus == (1, 0, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)


def test_prime_field_matches_integer_arithmetic():
    F = field_of_order(7)
    for a, b in itertools.product(range(7), repeat=2):
        assert F.add(a, b) == (a + b) % 7
        assert F.mul(a, b) == (a * b) % 7
        if b:
            assert F.mul(F.div(a, b), b) == a


@pytest.mark.parametrize("q", ORDERS)
def test_multiplicative_group_is_cyclic(q):
    F = field_of_order(q)
    g = F.primitive_element
    seen = {F.power(g, k) for k in range(q - 1)}
    assert seen == set(range(1, q))


@pytest.mark.parametrize("q", ORDERS)
def test_half_of_units_are_squares(q):
    F = field_of_order(q)
    squares = {F.mul(a, a) for a in range(1, q)}
    assert len(squares) == (q - 1) // 2
    assert all(F.is_square_code(a) == (a in squares) for a in range(1, q))
    assert F.nonsquare == min(set(range(1, q)) - squares)
    chi = F.chi_table
    assert chi[0] == 0 and int(chi.sum()) == 0


@st.composite
def field_triples(draw):
    q = draw(st.sampled_from(ORDERS))
    el = st.integers(0, q - 1)
    return field_of_order(q), draw(el), draw(el), draw(el)


@given(field_triples())
def test_field_axioms(data):
    F, a, b, c = data
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
    assert F.power(a, F.q) == a


@given(field_triples())
def test_element_operators(data):
    F, a, b, _ = data
    x, y = FieldElement(F, a), FieldElement(F, b)
    assert (x + y) - y == x
    assert (x * y).code == F.mul(a, b)
    if b:
        assert (x / y) * y == x
    assert x ** 0 == 1


def test_integers_map_through_the_prime_field():
    F = field_of_order(9)
    assert F(3) == 0 and F(4) == 1
    assert F([0, 1]).code == 3


@pytest.mark.parametrize("q", [9, 25, 27])
def test_vectorized_multiplication_agrees_with_scalar(q):
    F = field_of_order(q)
    a, b = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    prod = F.vmul(a.ravel(), b.ravel())
    expect = [F.mul(int(x), int(y)) for x, y in zip(a.ravel(), b.ravel())]
    assert prod.tolist() == expect


@pytest.mark.parametrize("src,dst", [(3, 9), (3, 27), (9, 81), (5, 25)])
def test_embedding_is_a_ring_homomorphism(src, dst):
    S, D = field_of_order(src), field_of_order(dst)
    img = embedding_table(S, D)
    assert img[0] == 0 and img[1] == 1
    for a, b in itertools.product(range(src), repeat=2):
        assert img[S.add(a, b)] == D.add(img[a], img[b])
        assert img[S.mul(a, b)] == D.mul(img[a], img[b])


def test_nonsquare_of_f3_becomes_square_in_f9():
    F3, F9 = make_field(3), make_field(3, 2)
    two = F3(2)
    assert not two.is_square()
    assert embed(two, F9).is_square()


def test_embedding_requires_subfield():
    with pytest.raises(FieldError):
        embedding_table(field_of_order(9), field_of_order(27))
