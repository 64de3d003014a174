import pytest

from qasa.lemmas import verify_lemma_instances
from qasa.modules import build_natural_evaluation_module, direct_sum, trivial_module
from qasa.rootdata import RootDatum
from qasa.scalars import ONE, Q

NAMES = ["segment-propagation", "segment-cubes-vanish", "odd-node-nilpotent", "highest-weight-exists"]


@pytest.mark.parametrize("mn", [(1, 2), (2, 1), (2, 2)])
@pytest.mark.parametrize("a", [ONE, Q])
def test_lemma_instances_on_natural_modules(mn, a):
    mod = build_natural_evaluation_module(RootDatum(*mn), a, window=1)
    res = verify_lemma_instances(mod, 1)
    assert [r.name for r in res] == NAMES
    assert all(r.status in ("pass", "vacuous") for r in res), [r.to_json() for r in res]
    assert res[-1].status == "pass"


def test_negative_window_is_vacuous():
    mod = trivial_module(RootDatum(1, 2))
    assert [r.status for r in verify_lemma_instances(mod, -1)] == ["vacuous"] * 4


def test_direct_sum_has_two_highest_weight_lines():
    rd = RootDatum(1, 2)
    s = direct_sum(build_natural_evaluation_module(rd, ONE, window=1), trivial_module(rd))
    res = {r.name: r for r in verify_lemma_instances(s, 1)}
    assert res["highest-weight-exists"].candidates == 2
