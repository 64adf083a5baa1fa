from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from supercasimir import linalg
from supercasimir.exact import (
    LaurentPoly,
    T,
    as_fraction,
    check_points,
    lagrange_basis,
    laurent_eval,
    vanishing_polynomial,
)

small = st.integers(-6, 6)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=7)
polys = st.dictionaries(small, coeffs, max_size=4).map(LaurentPoly)
points = st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(lambda x: x != 0)


def test_as_fraction_rejects_floats():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(ValueError):
        as_fraction("0.5")
    assert as_fraction("3/4") == Fraction(3, 4)


def test_laurent_printing_and_zero_stripping():
    p = LaurentPoly({-1: 2, 0: 1, 3: -1, 5: 0})
    assert str(p) == "-t^3 + 1 + 2*t^-1"
    assert LaurentPoly({2: 1, }) - LaurentPoly({2: 1}) == 0
    assert str(LaurentPoly()) == "0"


def test_negative_power_only_for_monomials():
    assert (T * 3) ** -2 == LaurentPoly({-2: Fraction(1, 9)})
    with pytest.raises(ValueError):
        (T + 1) ** -1


def test_eval_at_zero_with_negative_powers():
    with pytest.raises((ValueError, ZeroDivisionError)):
        laurent_eval(T ** -1, 0)


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)


@given(polys, polys, points)
def test_evaluation_is_a_homomorphism(p, q, c):
    assert (p * q)(c) == p(c) * q(c)
    assert (p + q)(c) == p(c) + q(c)


@given(st.lists(points, min_size=1, max_size=5, unique=True))
def test_lagrange_identities(pts):
    ps = lagrange_basis(pts)
    for i, p in enumerate(ps):
        for j, d in enumerate(pts):
            assert p(d) == (1 if i == j else 0)
    total = LaurentPoly()
    for p in ps:
        total = total + p
    assert total == 1
    v = vanishing_polynomial(pts)
    assert all(v(d) == 0 for d in pts)


@pytest.mark.parametrize("pts", [[1, 1], [0, 2], [Fraction(1, 2), Fraction(2, 4)]])
def test_bad_points(pts):
    with pytest.raises(ValueError):
        check_points(pts)


def test_lagrange_two_points():
    p1, p2 = lagrange_basis([1, 2])
    assert p1 == LaurentPoly({0: 2, 1: -1})
    assert p2 == LaurentPoly({0: -1, 1: 1})


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_nullity(rows):
    rows = [[Fraction(x) for x in r] for r in rows]
    ns = linalg.nullspace(rows, 3)
    assert linalg.rank(rows) + len(ns) == 3
    for v in ns:
        assert all(x == 0 for x in linalg.matvec(rows, v))


def test_inverse_roundtrip():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    assert linalg.matmul(a, linalg.inverse(a)) == linalg.identity(2)
    with pytest.raises(ZeroDivisionError):
        linalg.inverse([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])
