import pytest

from qasa.algebra import CH, D, H, K, XM, XP, Element, Generator
from qasa.linalg import SMat
from qasa.modules import (
    ModuleError, ModuleRelationError, NotAnEigenvector, build_natural_evaluation_module,
    check_integrability, check_relations_on_module, direct_sum, eigenvalue, find_highest_weight_vectors,
    integrability_report, node_parameters, scalar_cartan_module, trivial_module, weight_spaces,
)
from qasa.rootdata import RootDatum
from qasa.scalars import ONE, Q, ZERO

CONFIGS = [(1, 2), (2, 1), (2, 2)]


def test_node_parameters_step_by_q_l():
    rd = RootDatum(2, 2)
    a = Q ** 2
    assert node_parameters(rd, a) == {1: a, 2: a * Q, 3: a * Q * Q.inverse()}


@pytest.mark.parametrize("mn", CONFIGS)
def test_natural_module_shape(mn):
    rd = RootDatum(*mn)
    mod = build_natural_evaluation_module(rd, ONE, window=1)
    assert mod.dim == rd.M + rd.N
    assert mod.parities == tuple([0] * rd.M + [1] * rd.N)
    assert mod.matrix(Generator(CH, 0, 1)) == SMat.identity(mod.dim)
    # K_i e_k = q^{(eps_k, alpha_i)}
    for i in rd.index_set:
        k = mod.matrix(Generator(K, i, 1))
        assert k.diagonal() == [Q ** rd.eps_alpha_pairing(j, i) for j in range(1, mod.dim + 1)]


def test_natural_module_x_matrices():
    rd = RootDatum(1, 2)
    a = Q ** 3
    mod = build_natural_evaluation_module(rd, a, window=1)
    params = node_parameters(rd, a)
    for i in rd.index_set:
        assert mod.matrix(Generator(XP, i, 2)) == SMat.unit(3, i - 1, i, params[i] ** 2)
        assert mod.matrix(Generator(XM, i, -1)) == SMat.unit(3, i, i - 1, params[i].inverse())


@pytest.mark.parametrize("mn", CONFIGS)
@pytest.mark.parametrize("a", [ONE, Q])
def test_gate_passes(mn, a):
    mod = build_natural_evaluation_module(RootDatum(*mn), a, window=2)
    assert mod.gate.passed and mod.gate.checks


def test_corrupted_module_is_rejected():
    rd = RootDatum(1, 2)
    with pytest.raises(ModuleRelationError) as ei:
        build_natural_evaluation_module(rd, ONE, window=1, corrupt=True)
    assert not ei.value.report.passed
    mod = build_natural_evaluation_module(rd, ONE, window=1, corrupt=True, check=False)
    rep = check_relations_on_module(mod, 1)
    assert rep.failures and not rep.passed


def test_uniform_parameter_breaks_the_relations():
    # X^{+-}_i(n) = a^n E without the node shift violates the h-X relations
    rd = RootDatum(2, 1)
    good = build_natural_evaluation_module(rd, Q, window=1)

    def rule(g):
        if g.kind in (XP, XM):
            base = good.matrix(Generator(g.kind, g.i, 0))
            return base.scale(Q ** g.n)
        return good.matrix(g)

    from qasa.modules import Module
    bad = Module(rd, good.parities, rule)
    assert not check_relations_on_module(bad, 1).passed


def test_generator_validation():
    mod = build_natural_evaluation_module(RootDatum(1, 2), ONE, window=0)
    with pytest.raises(ModuleError):
        mod.matrix(Generator(D, 0, 1))
    with pytest.raises(ModuleError):
        mod.matrix(Generator(H, 1, 0))
    with pytest.raises(Exception):
        mod.matrix(Generator(XP, 3, 0))
    with pytest.raises(ModuleError):
        build_natural_evaluation_module(RootDatum(1, 2), ZERO)


def test_element_action_matches_matrix():
    mod = build_natural_evaluation_module(RootDatum(2, 1), Q, window=0)
    e = Element.word(Generator(XP, 1, 1), Generator(XM, 1, 0)) + Element.word(Generator(H, 2, 1)).scale(Q)
    v = [ONE, Q, ONE + Q]
    assert mod.apply(e, v) == mod.element_matrix(e).apply(v)


@pytest.mark.parametrize("mn", CONFIGS)
def test_integrability_and_exact_nilpotency(mn):
    rd = RootDatum(*mn)
    mod = build_natural_evaluation_module(rd, Q, window=1)
    assert check_integrability(mod, 2)
    for i in rd.index_set:
        for m in range(-2, 3):
            for kind in (XP, XM):
                assert (mod.matrix(Generator(kind, i, m)) ** (mod.dim + 1)).is_zero()
    rep = integrability_report(mod, 2)
    assert rep.type1 and rep.nilpotent and rep.level_zero and not rep.problems


def test_scalar_cartan_module_fails_type_one_only():
    rd = RootDatum(1, 2)
    mod = scalar_cartan_module(rd)
    assert check_relations_on_module(mod, 1).passed
    assert not check_integrability(mod, 1)


def test_trivial_and_direct_sum():
    rd = RootDatum(1, 2)
    triv = trivial_module(rd)
    assert check_relations_on_module(triv, 1).passed
    nat = build_natural_evaluation_module(rd, ONE, window=1)
    s = direct_sum(nat, triv)
    assert s.dim == 4 and check_relations_on_module(s, 1).passed
    assert len(find_highest_weight_vectors(s)) == 2
    assert len(find_highest_weight_vectors(nat)) == 1


def test_weight_spaces_and_eigenvalue():
    rd = RootDatum(2, 2)
    mod = build_natural_evaluation_module(rd, ONE, window=0)
    ws = weight_spaces(mod)
    assert sorted(len(v) for v in ws.values()) == [1, 1, 1, 1]
    k1 = mod.matrix(Generator(K, 1, 1))
    assert eigenvalue(k1, [ONE, ZERO, ZERO, ZERO]) == Q
    with pytest.raises(NotAnEigenvector):
        eigenvalue(k1, [ONE, ONE, ZERO, ZERO])
    with pytest.raises(NotAnEigenvector):
        eigenvalue(k1, [ZERO] * 4)
