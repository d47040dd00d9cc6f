"""Field arithmetic in Q(i, sqrt2)."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quatcliff.scalars import (BACKEND_NAME, ExtendedScalar, XS_I, XS_ONE,
                               XS_SQRT2, XS_ZERO, rat_str, to_rat, xs)

small = st.integers(min_value=-6, max_value=6)


def scalars():
    return st.builds(xs, small, small, small, small)


def test_backend_reports_a_name():
    assert BACKEND_NAME in ("gmpy2", "fraction")


def test_constants():
    assert XS_I * XS_I == -XS_ONE
    assert XS_SQRT2 * XS_SQRT2 == xs(2)
    assert XS_ZERO + XS_ONE == XS_ONE
    assert not XS_ZERO
    assert XS_ONE


def test_string_coercion():
    assert to_rat("3/4") == to_rat(Fraction(3, 4))
    assert rat_str(to_rat("3/4")) == "3/4"
    assert xs("1/2", "-2/3") == xs(Fraction(1, 2), Fraction(-2, 3))


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + XS_ZERO == a
    assert a * XS_ONE == a
    assert a - a == XS_ZERO


@given(scalars())
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == XS_ONE
        assert XS_ONE / a == a.inverse()


@given(scalars(), scalars())
def test_conjugation_is_multiplicative(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert a.conjugate().conjugate() == a


def test_int_and_fraction_coercion():
    a = xs(1, 2, 3, 4)
    assert 2 * a == a + a
    assert a * Fraction(1, 2) + a * Fraction(1, 2) == a
    assert a / 2 + a / 2 == a


def test_known_inverse():
    # (1 + sqrt2) inverse is (sqrt2 - 1)
    a = xs(1, 0, 1, 0)
    assert a.inverse() == xs(-1, 0, 1, 0)
    # (i + sqrt2)(i - sqrt2) = -1 - 2 = -3 wait: i^2 - 2 = -3, so inverse of
    # (i + sqrt2) is (i - sqrt2)/(-3) -- checked by multiplication instead
    b = xs(0, 1, 1, 0)
    assert b * b.inverse() == XS_ONE


@given(scalars())
def test_json_round_trip(a):
    blob = json.dumps(a.to_json())
    assert ExtendedScalar.from_json(json.loads(blob)) == a


def test_str_smoke():
    assert str(XS_ZERO) == "0"
    s = str(xs(1, -1, Fraction(1, 2), 0))
    assert "i" in s and "s2" in s
