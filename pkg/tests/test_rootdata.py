from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qasa.rootdata import (
    RootDatum, RootDatumError, Weight, odd_segment_set, positive_roots, s_greater, s_order_key,
)

configs = st.tuples(st.integers(1, 4), st.integers(1, 4)).filter(lambda t: max(t) > 1)


def test_cartan_matrix_sl12():
    assert RootDatum(1, 2).cartan_matrix == ((0, 1), (1, -2))


def test_cartan_matrix_sl21():
    assert RootDatum(2, 1).cartan_matrix == ((2, -1), (-1, 0))


def test_cartan_matrix_sl22():
    assert RootDatum(2, 2).cartan_matrix == ((2, -1, 0), (-1, 0, 1), (0, 1, -2))


@pytest.mark.parametrize("M,N", [(1, 1), (0, 2), (2, 0), (-1, 3)])
def test_invalid_root_data(M, N):
    with pytest.raises(RootDatumError):
        RootDatum(M, N)


def test_index_checks():
    rd = RootDatum(1, 2)
    assert list(rd.index_set) == [1, 2]
    with pytest.raises(RootDatumError):
        rd.cartan_pairing(0, 1)
    with pytest.raises(RootDatumError):
        rd.sign(4)
    assert rd.is_odd_index(1) and not rd.is_odd_index(2)


@given(configs)
def test_cartan_matrix_symmetric_and_odd_node(mn):
    rd = RootDatum(*mn)
    A = rd.cartan_matrix
    n = rd.rank
    for i in range(n):
        for j in range(n):
            assert A[i][j] == A[j][i]
            if abs(i - j) > 1:
                assert A[i][j] == 0
    # the only vanishing diagonal entry sits at the odd node
    assert [i + 1 for i in range(n) if A[i][i] == 0] == [rd.M]
    for i in range(n):
        if i + 1 != rd.M:
            assert A[i][i] == 2 * rd.sign(i + 1)


@given(configs)
def test_segment_sets(mn):
    rd = RootDatum(*mn)
    n = rd.rank
    assert len(positive_roots(rd)) == n * (n + 1) // 2
    S = odd_segment_set(rd)
    assert all(a <= rd.M <= b and a < b for a, b in S)
    assert len(S) == sum(1 for a in range(1, rd.M + 1) for b in range(rd.M, n + 1) if a < b)
    keys = [s_order_key(s) for s in S]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_s_order_examples():
    # longer segments are larger; at equal length the smaller left end wins
    assert s_greater((1, 3), (2, 3))
    assert s_greater((1, 2), (2, 3))
    assert not s_greater((2, 3), (1, 2))


def test_weights_pairing():
    rd = RootDatum(2, 2)
    a1, a2, a3 = (Weight.simple_root(rd, i) for i in (1, 2, 3))
    assert a1.pairing(a2) == -1 and a2.pairing(a2) == 0 and a3.pairing(a3) == -2
    d = Weight.null_root(rd)
    w0 = Weight.affine_fundamental(rd)
    assert d.pairing(d) == 0 and w0.pairing(d) == 1
    a0 = Weight.alpha0(rd)
    assert (a0 + a1 + a2 + a3) == d
    assert a0.pairing(d) == 0
    assert (a1 + a2).in_positive_cone() and not (a1 - a2).in_positive_cone()
    assert Fraction(1, 2) * (a1 + a1) == a1
    assert (a1 + a2).eps_coordinates() == (1, 0, -1, 0)


@given(configs, st.data())
def test_weight_pairing_bilinear(mn, data):
    rd = RootDatum(*mn)
    vec = st.tuples(*[st.integers(-3, 3)] * rd.rank)
    x, y, z = (Weight(rd, 0, 0, data.draw(vec)) for _ in range(3))
    assert (x + y).pairing(z) == x.pairing(z) + y.pairing(z)
    assert x.pairing(y) == y.pairing(x)


def test_json_round_trip():
    rd = RootDatum(2, 3)
    assert RootDatum.from_json(rd.to_json()) == rd
