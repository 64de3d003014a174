import pytest

from qasa.algebra import Element
from qasa.modules import build_natural_evaluation_module, check_identities_on_module
from qasa.rootdata import RootDatum
from qasa.scalars import Q
from qasa.suites import (
    SUITES, appendix_bc_chains, build_suite, definition_relations, iter_families, lemma_42, lemma_a2,
    qbracket_free, run_suite,
)


def test_suite_names():
    assert set(SUITES) == {"definition", "appendix-a", "lemma-A2", "lemma-4.2", "appendix-bc-chains", "qbracket-free"}
    with pytest.raises(ValueError):
        build_suite("nope", RootDatum(1, 2), 1)


def test_instance_lists_are_deterministic_and_uniquely_named():
    rd = RootDatum(2, 2)
    a = [i.name for i in definition_relations(rd, 1)]
    b = [i.name for i in definition_relations(rd, 1)]
    assert a == b and len(set(a)) == len(a)


def test_super_serre_only_when_both_blocks_exceed_one():
    for mn, present in [((1, 2), False), ((2, 1), False), ((2, 2), True)]:
        fams = iter_families(definition_relations(RootDatum(*mn), 1))
        assert any(k.startswith("rel.sserre") for k in fams) is present


def test_smaller_window_gives_fewer_instances():
    rd = RootDatum(2, 1)
    assert len(definition_relations(rd, 0)) < len(definition_relations(rd, 1)) < len(definition_relations(rd, 2))


def test_qbracket_free_identities_expand_to_zero():
    insts = qbracket_free(RootDatum(2, 2), count=50, seed=3)
    assert len(insts) == 200
    assert all(not (i.lhs - i.rhs) for i in insts)


def test_lemma_42_only_for_m_equal_one():
    assert lemma_42(RootDatum(2, 2), 1) == []
    names = [i.name for i in lemma_42(RootDatum(1, 3), 0)]
    assert len(names) == 2 * 3


def test_chain_lemma_part_one_needs_rank_three():
    for mn in [(1, 2), (2, 1), (2, 2)]:
        assert not [i for i in lemma_a2(RootDatum(*mn), 1) if ".part1[" in i.name]
    assert [i for i in lemma_a2(RootDatum(1, 3), 0) if ".part1[" in i.name]
    with_odd = lemma_a2(RootDatum(1, 3), 0)
    without = lemma_a2(RootDatum(1, 3), 0, include_odd_middle=False)
    assert len(without) <= len(with_odd)


def test_run_suite_order_and_json():
    rd = RootDatum(1, 2)
    insts = appendix_bc_chains(rd, 1)
    res = run_suite(insts, rd)
    assert [r.name for r in res] == [i.name for i in insts]
    assert all(r.proved for r in res)
    js = res[0].to_json()
    assert set(js) >= {"name", "verdict", "steps"} and "elapsed" not in js
    assert "elapsed" in res[0].to_json(timing=True)


@pytest.mark.parametrize("mn", [(1, 2), (2, 1)])
def test_suites_hold_as_matrices_on_the_natural_module(mn):
    rd = RootDatum(*mn)
    mod = build_natural_evaluation_module(rd, Q, window=1)
    for name in ("appendix-a", "lemma-A2", "appendix-bc-chains"):
        rep = check_identities_on_module(mod, build_suite(name, rd, 1))
        assert rep.passed, (name, rep.failures[:3])


def test_a_false_identity_is_not_proved():
    from qasa.algebra import Xp
    from qasa.suites import Instance

    rd = RootDatum(1, 2)
    x1, x2 = Element.word(Xp(1, 0)), Element.word(Xp(2, 0))
    res = run_suite([Instance("adjacent-commute", x1 * x2, x2 * x1, "test")], rd)
    assert not res[0].proved
