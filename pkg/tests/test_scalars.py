from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import at
from qasa.scalars import (
    ONE, Q, ZERO, LaurentPoly, QScalar, ScalarParseError, TruncSeries, format_scalar, parse_scalar,
    q_integer, q_integer_base, series_exp, series_log,
)

coeff = st.integers(-4, 4)


@st.composite
def laurent(draw, nonzero=False):
    lo = draw(st.integers(-3, 3))
    cs = draw(st.lists(coeff, min_size=1, max_size=4))
    p = LaurentPoly({lo + i: c for i, c in enumerate(cs)})
    if nonzero and p.is_zero():
        p = LaurentPoly({lo: 1})
    return p


@st.composite
def scalars(draw):
    n = QScalar(draw(laurent()))
    d = QScalar(draw(laurent(nonzero=True)))
    return n / d


def test_q_integer_small_values():
    assert q_integer(0) == ZERO
    assert q_integer(1) == ONE
    assert q_integer(3) == Q ** 2 + 1 + Q ** -2


def test_q_integer_base_examples():
    assert q_integer_base(2, Q) == Q + Q.inverse()
    assert q_integer_base(2, Q.inverse()) == Q.inverse() + Q
    assert q_integer_base(0, Q.inverse()) == ZERO


def test_q_integer_base_rejects_non_monomial():
    with pytest.raises(ValueError):
        q_integer_base(2, Q + 1)


def test_negative_q_integer_is_odd():
    for m in range(1, 6):
        assert q_integer(-m) == -q_integer(m)


@pytest.mark.parametrize("m", range(-50, 51))
def test_q_integer_times_denominator(m):
    assert q_integer(m) * (Q - Q.inverse()) == Q ** m - Q ** (-m)


def test_q_integer_matches_numeric_formula():
    q = Fraction(3, 2)
    for m in range(-6, 7):
        assert at(q_integer(m)) == (q ** m - q ** -m) / (q - 1 / q)


@given(scalars(), scalars(), scalars())
def test_field_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    if a:
        assert a * a.inverse() == ONE


@given(laurent(), laurent(nonzero=True))
def test_reduced_quotient_round_trip(p, r):
    x = QScalar(p) / QScalar(r)
    assert x * QScalar(r) == QScalar(p)
    assert parse_scalar(format_scalar(x)) == x


@given(laurent(), laurent(nonzero=True))
def test_canonical_form_is_unique(p, r):
    x = QScalar(p) / QScalar(r)
    y = (QScalar(p) * QScalar(r)) / (QScalar(r) * QScalar(r))
    assert x.key() == y.key()
    assert hash(x) == hash(y)


@given(scalars(), scalars())
def test_evaluation_is_a_homomorphism(a, b):
    try:
        va, vb = at(a), at(b)
    except ZeroDivisionError:
        return
    assert at(a + b) == va + vb
    assert at(a * b) == va * vb


def test_text_form_examples():
    x = parse_scalar("(q^2-1)/(q+q^-1)")
    assert at(x) == (Fraction(9, 4) - 1) / (Fraction(3, 2) + Fraction(2, 3))
    assert parse_scalar(format_scalar(x)) == x
    assert format_scalar(ONE) == "1"
    assert format_scalar(Q ** -2) == "q^-2"


@pytest.mark.parametrize("bad", ["q^", "(q+1", "1/0", "x", ""])
def test_parse_errors(bad):
    with pytest.raises((ScalarParseError, ValueError, ZeroDivisionError)):
        parse_scalar(bad)


def test_exp_and_log_examples():
    assert series_log(TruncSeries.constant(1, 5)) == TruncSeries.constant(0, 5)
    assert series_exp(TruncSeries.constant(0, 5)) == TruncSeries.constant(1, 5)
    a = Q + 2
    e = series_exp(TruncSeries.from_list([0, a, 0, 0]))
    assert list(e.coeffs) == [ONE, a, a * a * QScalar(Fraction(1, 2)), a ** 3 * QScalar(Fraction(1, 6))]


def test_exp_log_reject_wrong_constant_term():
    with pytest.raises(ValueError):
        series_exp(TruncSeries.from_list([1, 1]))
    with pytest.raises(ValueError):
        series_log(TruncSeries.from_list([2, 1]))


@given(st.lists(st.integers(-3, 3), min_size=20, max_size=20))
def test_log_inverts_exp(cs):
    s = TruncSeries.from_list([0] + [Q ** c - 1 for c in cs])
    assert s.order == 20
    assert series_log(series_exp(s)) == s


def test_series_mul_truncation_is_consistent():
    a = TruncSeries.from_list([1, Q, 2])
    b = TruncSeries.from_list([1, 1, 1, 1, 1])
    assert (a * b).order == 2
    assert (a * b).coeffs == (ONE, Q + 1, Q + 3)
    with pytest.raises(IndexError):
        (a * b).coeff(3)


def test_mixed_directions_rejected():
    with pytest.raises(ValueError):
        TruncSeries.from_list([1]) + TruncSeries.from_list([1], at_infinity=True)
