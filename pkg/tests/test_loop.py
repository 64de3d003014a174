from fractions import Fraction

import pytest

from qasa.algebra import D, Generator, XP
from qasa.loop import (
    InconclusiveWindow, WindowOverflow, build_loop_module, cartan_period, check_evaluation_map,
    check_relations_on_loop_module, hw_vector_in_component, loop_decompose,
)
from qasa.modules import build_natural_evaluation_module, find_highest_weight_vectors, trivial_module
from qasa.rootdata import RootDatum
from qasa.scalars import ONE, Q

RD = RootDatum(1, 2)
NAT = build_natural_evaluation_module(RD, ONE, window=1)
V = find_highest_weight_vectors(NAT)[0]


def test_d_exponents():
    lm = build_loop_module(NAT, Fraction(1, 2), (-2, 2))
    assert lm.d_exponent(1) == Fraction(3, 2)
    assert lm.d_exponent_text(-1) == "-1+1/2"
    assert build_loop_module(NAT, 0, (-2, 2)).d_exponent_text(3) == "3"
    assert lm.dim == 15


def test_window_overflow_is_flagged():
    lm = build_loop_module(NAT, 0, (-1, 1))
    with pytest.raises(WindowOverflow):
        lm.act(Generator(XP, 1, 2), 0, V)
    t, w = lm.act(Generator(D, 0, 1), 1, V)
    assert t == 1 and w == [x * Q for x in V]


def test_relations_need_a_wide_enough_window():
    with pytest.raises(InconclusiveWindow):
        check_relations_on_loop_module(build_loop_module(NAT, 0, (-1, 1)), 2)


@pytest.mark.parametrize("b", [0, Fraction(1, 2)])
def test_relations_on_interior_slices(b):
    rep = check_relations_on_loop_module(build_loop_module(NAT, b, (-3, 3)), 1)
    assert rep.passed and rep.conclusive and rep.checks


def test_decomposition_of_natural_loop_module():
    lm = build_loop_module(NAT, 0, (-4, 4))
    r, degs = cartan_period(lm, V)
    assert r == 1
    dec = loop_decompose(lm, V)
    assert dec.certified and len(dec.components) == 1
    js = dec.to_json(NAT.dim)
    assert js["slice_dims"] == [3] * 7 and js["direct_sum"]
    comp = dec.components[0]
    ev = check_evaluation_map(lm, comp, dec.interior)
    assert ev["intertwines"] and ev["full_rank"] and ev["samples"] > 0
    assert hw_vector_in_component(lm, comp, dec.interior) is not None


def test_trivial_base_splits_per_slice():
    triv = trivial_module(RD)
    lm = build_loop_module(triv, 0, (-3, 3))
    dec = loop_decompose(lm, [ONE])
    assert dec.r == 0 and len(dec.components) == 7
    assert all(n == 1 for n in dec.slice_sums.values())


def test_empty_interior_is_inconclusive():
    with pytest.raises(InconclusiveWindow):
        loop_decompose(build_loop_module(NAT, 0, (0, 1)), V, margin=1)
