from fractions import Fraction

import pytest

from conftest import at
from qasa.drinfeld import (
    NotHighestWeight, extract_drinfeld_data, highest_weight_report, match_polynomial, phi_eigenseries,
    phi_series_from_brackets, round_trip, synthesize_phi,
)
from qasa.modules import build_natural_evaluation_module, find_highest_weight_vectors, trivial_module
from qasa.rootdata import RootDatum
from qasa.scalars import ONE, Q, ZERO

CONFIGS = [(1, 2), (2, 1), (2, 2)]


def _hw(mod):
    hw = find_highest_weight_vectors(mod)
    assert len(hw) == 1
    return hw[0]


@pytest.mark.parametrize("mn", CONFIGS)
@pytest.mark.parametrize("a", [ONE, Q])
def test_phi_two_routes_agree(mn, a):
    rd = RootDatum(*mn)
    mod = build_natural_evaluation_module(rd, a, window=1)
    v = _hw(mod)
    for i in rd.index_set:
        for sign in (1, -1):
            assert phi_eigenseries(mod, i, sign, v, 8) == phi_series_from_brackets(mod, i, sign, v, 8)


def test_sl12_data_a_equals_one():
    mod = build_natural_evaluation_module(RootDatum(1, 2), ONE)
    d = extract_drinfeld_data(mod, _hw(mod), T=20)
    assert d.P == {2: (ONE,)}
    assert d.c == Q
    assert d.Q == (ONE, -ONE)
    assert all(d.f_coeff(n) == ONE for n in range(-20, 21))
    assert all(d.checks.values())


def test_sl12_data_a_equals_q():
    mod = build_natural_evaluation_module(RootDatum(1, 2), Q)
    d = extract_drinfeld_data(mod, _hw(mod), T=20)
    assert d.Q == (ONE, -Q)
    assert all(d.f_coeff(n) == Q ** n for n in range(-20, 21))
    with pytest.raises(IndexError):
        d.f_coeff(21)


@pytest.mark.parametrize("mn", [(2, 1), (2, 2)])
def test_even_first_node_data(mn):
    rd = RootDatum(*mn)
    for a, root in [(ONE, Q.inverse()), (Q, ONE)]:
        mod = build_natural_evaluation_module(rd, a)
        d = extract_drinfeld_data(mod, _hw(mod), T=20)
        assert d.P[1] == (ONE, -root)
        assert all(d.P[i] == (ONE,) for i in d.P if i != 1)
        assert d.c == ONE and d.Q == (ONE,)
        assert all(d.f_coeff(n) == ZERO for n in range(-20, 21))


@pytest.mark.parametrize("mn", CONFIGS)
@pytest.mark.parametrize("a", [ONE, Q, Q ** -2])
def test_invariants_and_round_trip(mn, a):
    rd = RootDatum(*mn)
    mod = build_natural_evaluation_module(rd, a)
    v = _hw(mod)
    d = extract_drinfeld_data(mod, v, T=20)
    assert (d.c - d.c.inverse()) / (Q - Q.inverse()) == d.f_coeff(0)
    for n in range(-20 + len(d.Q) - 1, 21):
        assert sum((d.Q[k] * d.f_coeff(n - k) for k in range(len(d.Q))), ZERO) == ZERO
    assert all(z and w for z, w in round_trip(mod, v, d).values())
    rep = highest_weight_report(mod, v, d)
    for i, node in rep.nodes.items():
        assert node["nilpotency"] == node["deg_P"] + 1 or node["nilpotency"] <= node["deg_P"] + 1


def test_trivial_module_data():
    rd = RootDatum(2, 1)
    mod = trivial_module(rd)
    d = extract_drinfeld_data(mod, [ONE], T=6)
    assert all(p == (ONE,) for p in d.P.values())
    assert d.c == ONE and d.Q == (ONE,)


def test_not_highest_weight():
    mod = build_natural_evaluation_module(RootDatum(1, 2), ONE, window=0)
    with pytest.raises(NotHighestWeight):
        extract_drinfeld_data(mod, [ZERO, ONE, ZERO], T=4)


def test_synthesis_matches_closed_form_numerically():
    # P(z) = 1 - b z: phi^+(z) = q_i (1 - b z / q_i) / (1 - b q_i z), expanded by hand at q = 3/2
    qi = Q
    P = (ONE, -Q ** 2)
    plus = synthesize_phi(P, qi, 10, False)
    minus = synthesize_phi(P, qi, 10, True)
    assert match_polynomial(plus, minus, qi, 10) == P
    q = Fraction(3, 2)
    b = q ** 2
    assert at(plus.coeff(0)) == q
    for n in range(1, 11):
        assert at(plus.coeff(n)) == q * (b * q) ** n - b * (b * q) ** (n - 1)
