import pytest
from hypothesis import given
from hypothesis import strategies as st

from gnapkit.core import is_nap01, is_ultrametric, validate
from gnapkit.generate import (GenConfig, MckpConfig, random_gnap, random_knapsack, random_mckp,
                              random_mssubsum, random_psum, random_unitc)
from gnapkit.penaltysum import validate_psum
from gnapkit.textformat import render_instance

from conftest import seeds

configs = st.builds(GenConfig, taxa=st.integers(1, 6), height=st.integers(1, 3), max_len=st.integers(1, 3),
                    ultrametric=st.booleans(), exact_taxa=st.booleans())


def test_same_seed_same_instance():
    cfg = GenConfig(taxa=3, height=1)
    assert render_instance(random_gnap(0, cfg)) == render_instance(random_gnap(0, cfg))
    assert random_mckp(7) == random_mckp(7)


def test_different_seeds_differ():
    texts = {render_instance(random_gnap(s, GenConfig(taxa=5))) for s in range(20)}
    assert len(texts) > 15


@given(seeds, configs)
def test_generated_gnap_is_valid(seed, cfg):
    inst = random_gnap(seed, cfg)
    assert validate(inst) == []
    assert inst.tree.height == cfg.height
    if cfg.exact_taxa:
        assert inst.n_taxa == cfg.taxa
    assert all(len(p) <= cfg.max_len for p in inst.lists)
    assert 0 <= inst.budget <= cfg.max_budget


@given(seeds, st.integers(1, 3))
def test_ultrametric_flag(seed, height):
    inst = random_gnap(seed, GenConfig(taxa=6, height=height, ultrametric=True))
    assert is_ultrametric(inst.tree)[0]


@given(seeds)
def test_nap01_flag(seed):
    inst = random_gnap(seed, GenConfig(taxa=6, nap01=True))
    assert is_nap01(inst)


@given(seeds)
def test_unit_cost_flag(seed):
    inst = random_gnap(seed, GenConfig(taxa=6, unit_cost=True, paid_below_one=True))
    for pl in inst.lists:
        assert [p.cost for p in pl] == [0, 1]
        assert pl[0].survival == 0 and 0 < pl[1].survival < 1


def test_inconsistent_knobs():
    with pytest.raises(ValueError):
        random_gnap(0, GenConfig(unit_cost=True, nap01=True))
    with pytest.raises(ValueError):
        random_gnap(0, GenConfig(max_len=4, max_cost=1))


@given(seeds)
def test_other_generators(seed):
    m = random_mckp(seed, MckpConfig(max_classes=4))
    assert 1 <= m.m <= 4 and m.budget >= 0 and m.target >= 0
    assert validate_psum(random_psum(seed)) == []
    kp = random_knapsack(seed)
    assert all(c >= 1 for c, _ in kp.items)
    z = random_mssubsum(seed)
    assert len(z.Z) >= 1 and min(z.Z) >= 0
    u = random_unitc(seed)
    assert u.tree.height == 2 and len(u.tree.children[u.tree.root]) == 1
