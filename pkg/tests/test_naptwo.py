from dataclasses import replace
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given

from gnapkit.core import GnapInstance, PhyloTree, PreconditionError, project_list
from gnapkit.gnap import gnap_bruteforce
from gnapkit.naptwo import (GREEDY_FLAG, TwoProjectInstance, nap01_diversity_tables, nap01_dp_budget,
                            nap01_dp_diversity, nap01_solve, normalize_two_project, two_project_subsets,
                            unitc_greedy_ultrametric2)

from conftest import gnap_instances, n1, star, u1

NAP01 = [two_project_subsets, nap01_dp_budget, nap01_dp_diversity]
ids = lambda f: f.__name__  # noqa: E731


def test_normalize_shifts_costs():
    inst = GnapInstance(star(1), (project_list((3, F(1, 4)), (5, F(3, 4))),), 7, F(0))
    two = normalize_two_project(inst)
    assert (two.a, two.b, two.c, two.budget) == ((F(1, 4),), (F(3, 4),), (2,), 4)


def test_normalize_keeps_normalized_list():
    two = n1()
    assert normalize_two_project(two.to_gnap()) == two


def test_normalize_overdrawn_budget_is_no():
    inst = GnapInstance(star(1, 1), (project_list((2, 0), (3, 1)), project_list((2, 0), (3, 1))), 3, F(0))
    two = normalize_two_project(inst)
    assert two.budget < 0
    for decide in NAP01:
        assert not decide(two).feasible


def test_normalize_requires_two_projects():
    with pytest.raises(PreconditionError):
        normalize_two_project(GnapInstance(star(1), (project_list((0, 0)),), 0, F(0)))


@pytest.mark.parametrize("decide", NAP01, ids=ids)
def test_n1(decide):
    d = decide(n1())
    assert d.feasible and d.witness == (1, 0)
    assert not decide(n1(diversity=4)).feasible
    d = decide(n1(budget=3, diversity=5))
    assert d.feasible and d.witness == (1, 1) and d.value == 5


@pytest.mark.parametrize("decide", NAP01, ids=ids)
def test_zero_budget(decide):
    assert decide(n1(budget=0, diversity=0)).feasible
    assert not decide(n1(budget=0, diversity=F(1, 2))).feasible


def test_equal_survivals_ignore_budget():
    two = TwoProjectInstance(star(3, 2), (F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)), (5, 5), 0, F(5, 2))
    assert two_project_subsets(two).feasible
    assert not two_project_subsets(replace(two, budget=10, diversity=F(3))).feasible


def test_diversity_precheck():
    d = nap01_dp_diversity(n1(budget=10, diversity=6))
    assert not d.feasible and d.notes.get("precheck")


def test_diversity_leaf_table():
    two = TwoProjectInstance(star(4, names=["x"]), (F(0),), (F(1),), (1,), 1, F(4))
    assert nap01_diversity_tables(two, 4)["x"] == [0, 1, 1, 1, 1]


def test_diversity_root_table_n1():
    tables = nap01_diversity_tables(n1(), 5)
    assert tables["r"][3] == 2
    assert tables["r"][5] == 3


def test_diversity_needs_integer_weights():
    two = TwoProjectInstance(star(F(1, 2)), (F(0),), (F(1),), (1,), 1, F(0))
    with pytest.raises(PreconditionError):
        nap01_dp_diversity(two)
    assert nap01_dp_budget(two).feasible


def test_diversity_rounds_target_up():
    assert nap01_dp_diversity(n1(diversity=F(5, 2))).feasible
    assert not nap01_dp_diversity(n1(diversity=F(7, 2))).feasible


def test_nap01_requires_01_survivals():
    with pytest.raises(PreconditionError):
        nap01_dp_budget(TwoProjectInstance(star(1), (F(0),), (F(1, 2),), (1,), 1, F(0)))


def test_greedy_u1():
    d = unitc_greedy_ultrametric2(u1(budget=1))
    assert d.witness == (0, 0, 1) and d.value == 3
    assert d.notes["flag"] == GREEDY_FLAG
    d = unitc_greedy_ultrametric2(u1(budget=2))
    assert d.witness == (1, 0, 1) and d.value == F(9, 2)
    best = max(u1().pd(s) for s in [(1, 1, 0), (1, 0, 1), (0, 1, 1)])
    assert best == F(9, 2)


def test_greedy_zero_budget():
    d = unitc_greedy_ultrametric2(u1(budget=0, diversity=0))
    assert d.feasible and d.value == 0
    assert not unitc_greedy_ultrametric2(u1(budget=0, diversity=1)).feasible


def test_greedy_rejects_non_ultrametric():
    tree = PhyloTree.from_edges("r", [("r", "x1", 1), ("r", "x2", 2)])
    with pytest.raises(PreconditionError):
        unitc_greedy_ultrametric2(TwoProjectInstance(tree, (F(0),) * 2, (F(1),) * 2, (1, 1), 1, F(0)))


@given(gnap_instances(taxa=6, nap01=True, max_lambda=6, max_budget=8, max_cost=4))
def test_nap01_deciders_agree(inst):
    two = normalize_two_project(inst)
    expected = two_project_subsets(two).feasible
    assert gnap_bruteforce(inst).feasible == expected
    for decide in (nap01_dp_budget, nap01_dp_diversity):
        d = decide(two)
        assert d.feasible == expected, decide.__name__
        if d.feasible:
            assert inst.is_solution(d.witness)
    d = nap01_solve(inst)
    assert d.feasible == expected


@given(gnap_instances(max_len=2, max_cost=4))
def test_normalize_preserves_answer(inst):
    if all(len(p) == 2 for p in inst.lists):
        assert two_project_subsets(normalize_two_project(inst)).feasible == gnap_bruteforce(inst).feasible


@given(gnap_instances(taxa=6, heights=(1, 2), ultrametric=True, unit_cost=True, max_budget=4))
def test_greedy_is_sound(inst):
    # optimality is studied separately; here the greedy must never overclaim
    two = normalize_two_project(inst)
    d = unitc_greedy_ultrametric2(replace(two, diversity=F(0)))
    assert sum(d.witness) <= two.budget
    best = max(two.pd(s) for s in product((0, 1), repeat=two.n_taxa) if sum(s) <= two.budget)
    assert d.value <= best
    if unitc_greedy_ultrametric2(two).feasible:
        assert two_project_subsets(two).feasible
