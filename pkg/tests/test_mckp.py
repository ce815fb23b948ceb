import pytest
from hypothesis import given

from gnapkit.core import WorkCapExceeded
from gnapkit.mckp import (SOLVERS, MckpInstance, mckp_auto, mckp_dp_budget, mckp_dp_value, mckp_optimum,
                          mckp_preprocess, mckp_xp_classes, mckp_xp_varc, mckp_xp_vard)

from conftest import m1, mckp_instances

DECIDERS = [mckp_dp_budget, mckp_dp_value, mckp_xp_varc, mckp_xp_vard, mckp_xp_classes, mckp_auto]


def test_preprocess_same_cost():
    inst, kept = mckp_preprocess(MckpInstance((((1, 2), (1, 5)),), 1, 0))
    assert inst.classes == (((1, 5),),)
    assert kept == ((1,),)


def test_preprocess_dominated():
    inst, _ = mckp_preprocess(MckpInstance((((1, 5), (2, 3)),), 2, 0))
    assert inst.classes == (((1, 5),),)


def test_preprocess_keeps_undominated():
    inst, _ = mckp_preprocess(MckpInstance((((1, 2), (2, 3)),), 2, 0))
    assert inst.classes == (((1, 2), (2, 3)),)


@pytest.mark.parametrize("decide", DECIDERS, ids=lambda f: f.__name__)
def test_m1_yes(decide):
    d = decide(m1())
    assert d.feasible
    assert d.witness == (1, 0)
    assert (d.cost, d.value) == (3, 4)


@pytest.mark.parametrize("decide", DECIDERS, ids=lambda f: f.__name__)
def test_m1_target_five_is_no(decide):
    assert not decide(m1(target=5)).feasible


@pytest.mark.parametrize("decide", DECIDERS, ids=lambda f: f.__name__)
def test_single_free_item(decide):
    assert decide(MckpInstance((((0, 0),),), 0, 0)).feasible


@pytest.mark.parametrize("decide", DECIDERS, ids=lambda f: f.__name__)
def test_m1_budget_two(decide):
    assert decide(m1(budget=2, target=3)).feasible
    assert not decide(m1(budget=2, target=4)).feasible


@pytest.mark.parametrize("decide", DECIDERS, ids=lambda f: f.__name__)
def test_m1_budget_one(decide):
    assert not decide(m1(budget=1)).feasible


@pytest.mark.parametrize("decide", DECIDERS, ids=lambda f: f.__name__)
def test_single_cost(decide):
    inst = MckpInstance((((2, 1), (2, 4)), ((2, 3),)), 4, 7)
    assert decide(inst).feasible
    assert not decide(inst.with_budget(3)).feasible
    assert not decide(inst.with_target(8)).feasible


def test_free_zero_target():
    inst = MckpInstance((((0, 0), (0, 1)), ((0, 0),)), 0, 0)
    assert mckp_xp_classes(inst).feasible


def test_oracle_work_cap():
    inst = MckpInstance(tuple(((0, 0), (1, 1), (2, 2)) for _ in range(6)), 3, 3)
    with pytest.raises(WorkCapExceeded):
        mckp_xp_classes(inst, work_cap=100)


def test_optimum():
    assert mckp_optimum(m1()) == 4
    assert mckp_optimum(m1(budget=1)) is None


@given(mckp_instances())
def test_deciders_agree_with_oracle(inst):
    expected = mckp_xp_classes(inst).feasible
    for name, decide in SOLVERS.items():
        d = decide(inst)
        assert d.feasible == expected, name
        if d.feasible:
            assert inst.is_solution(d.witness), name


@given(mckp_instances())
def test_monotone(inst):
    if mckp_dp_budget(inst).feasible:
        assert mckp_dp_budget(inst.with_budget(inst.budget + 1)).feasible
        assert mckp_dp_budget(inst.with_target(max(0, inst.target - 1))).feasible


@given(mckp_instances())
def test_preprocess_preserves_answer(inst):
    reduced, kept = mckp_preprocess(inst)
    assert mckp_xp_classes(reduced).feasible == mckp_xp_classes(inst).feasible
    for k, (cl, idx) in enumerate(zip(reduced.classes, kept)):
        assert cl == tuple(inst.classes[k][j] for j in idx)
