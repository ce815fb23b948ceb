from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gnapkit.core import GnapInstance, PhyloTree, PreconditionError, Project, WorkCapExceeded, project_list
from gnapkit.gnap import (SOLVERS, choose_solver, count_tables, gnap_auto, gnap_bruteforce,
                          gnap_dp_budget_counts, gnap_dp_counts, gnap_enumerate_budget, gnap_height1,
                          height1_to_mckp)
from gnapkit.mckp import mckp_dp_budget, mckp_xp_classes

from conftest import g1, gnap_instances, star

DECIDERS = [gnap_bruteforce, gnap_enumerate_budget, gnap_dp_counts, gnap_dp_budget_counts, gnap_height1,
            gnap_auto]
ids = lambda f: f.__name__  # noqa: E731


@pytest.mark.parametrize("decide", DECIDERS, ids=ids)
def test_g1_yes(decide):
    d = decide(g1())
    assert d.feasible
    assert d.witness == (1, 1)
    assert (d.value, d.cost) == (4, 3)


@pytest.mark.parametrize("decide", DECIDERS, ids=ids)
def test_g1_budget_two_is_no(decide):
    assert not decide(g1(budget=2)).feasible
    assert not decide(g1(budget=2, diversity=F(7, 2))).feasible
    assert decide(g1(budget=2, diversity=3)).feasible


@pytest.mark.parametrize("decide", DECIDERS, ids=ids)
def test_zero_target_with_free_projects(decide):
    assert decide(g1(budget=0, diversity=0)).feasible


@pytest.mark.parametrize("decide", DECIDERS, ids=ids)
def test_single_taxon(decide):
    inst = GnapInstance(star(5), (project_list((0, 0), (1, 1)),), 1, F(5))
    d = decide(inst)
    assert d.feasible and d.witness == (1,)
    assert not decide(inst.with_budget(0)).feasible


def test_bruteforce_lexicographic_witness():
    d = gnap_bruteforce(g1(budget=3, diversity=1))
    assert d.witness == (0, 1)


def test_bruteforce_work_cap():
    inst = GnapInstance(star(*[1] * 8), tuple(project_list((0, 0), (1, 1), (2, 1)[:2]) for _ in range(8)), 3,
                        F(1))
    with pytest.raises(WorkCapExceeded):
        gnap_bruteforce(inst, work_cap=10)


def test_enumerate_budget_falls_back_without_free_project():
    inst = GnapInstance(star(3, 2), (project_list((1, 0), (2, 1)), project_list((0, 0), (1, F(1, 2)))),
                        3, F(3))
    d = gnap_enumerate_budget(inst)
    assert d.feasible == gnap_bruteforce(inst).feasible
    assert d.notes.get("fallback_from") == "gnap_enumerate_budget"


def test_height1_mapping():
    mckp, scale = height1_to_mckp(g1())
    assert scale == 2
    assert mckp.classes == (((0, 0), (2, 6)), ((0, 0), (1, 2)))
    assert (mckp.budget, mckp.target) == (3, 8)
    assert mckp_dp_budget(mckp).feasible and mckp_xp_classes(mckp).feasible


def test_height1_all_survivals_zero():
    inst = GnapInstance(star(3, 2), (project_list((0, 0)), project_list((0, 0))), 3, F(0))
    mckp, _ = height1_to_mckp(inst)
    assert mckp.values() == [0]
    assert gnap_height1(inst).feasible
    assert not gnap_height1(inst.with_diversity(F(1, 3))).feasible


def test_height1_rejects_deeper_tree():
    tree = PhyloTree.from_edges("r", [("r", "v", 1), ("v", "x", 1)])
    with pytest.raises(PreconditionError):
        gnap_height1(GnapInstance(tree, (project_list((0, 1)),), 0, F(0)))


def _caterpillar01(n=4):
    edges, spine = [], "r"
    for i in range(n - 1):
        edges.append((spine, f"x{i + 1}", i + 1))
        edges.append((spine, f"s{i + 1}", 1))
        spine = f"s{i + 1}"
    edges.append((spine, f"x{n}", 2))
    lists = tuple(project_list((0, 0), (1 + i % 2, 1)) for i in range(n))
    return GnapInstance(PhyloTree.from_edges("r", edges), lists, 2, F(4))


def _unitc_height2(n=12):
    edges = [("r", "v1", 1), ("r", "v2", 2)]
    edges += [(f"v{1 + i % 2}", f"x{i + 1}", 1 + i % 3) for i in range(n)]
    lists = tuple(project_list((0, 0), (1, F(1, 2))) for _ in range(n))
    return GnapInstance(PhyloTree.from_edges("r", edges), lists, 3, F(5))


def test_routing():
    assert choose_solver(g1()) == "gnap_height1"
    assert gnap_auto(g1()).solver == "gnap_height1"
    cat = _caterpillar01()
    assert choose_solver(cat) == "nap01_dp_budget"
    assert gnap_auto(cat).solver == "nap01_dp_budget"
    uc = _unitc_height2()
    assert choose_solver(uc) == "gnap_dp_budget_counts"
    d = gnap_auto(uc)
    assert d.solver == "gnap_dp_budget_counts"
    assert d.feasible == gnap_bruteforce(uc).feasible


def test_auto_settles_slack_budget():
    assert gnap_auto(g1(budget=10)).solver == "preprocess"


def test_auto_rejects_invalid_instance():
    inst = GnapInstance(star(1), ((Project(0, F(2)),),), 0, F(0))
    with pytest.raises(PreconditionError):
        gnap_auto(inst)


@given(gnap_instances())
def test_deciders_agree_with_oracle(inst):
    expected = gnap_bruteforce(inst).feasible
    for name, decide in {**SOLVERS, "gnap_auto": gnap_auto}.items():
        d = decide(inst)
        assert d.feasible == expected, name
        if d.feasible:
            assert inst.is_solution(d.witness), name


@given(gnap_instances(heights=(1,)))
def test_height1_agrees_with_oracle(inst):
    d = gnap_height1(inst)
    assert d.feasible == gnap_bruteforce(inst).feasible
    if d.feasible:
        assert inst.is_solution(d.witness)


@given(gnap_instances(), st.integers(0, 2))
def test_monotone_in_budget_and_target(inst, step):
    if gnap_dp_budget_counts(inst).feasible:
        assert gnap_dp_budget_counts(inst.with_budget(inst.budget + step)).feasible
        assert gnap_dp_counts(inst.with_diversity(max(F(0), inst.diversity - F(step, 2)))).feasible
    else:
        assert not gnap_dp_counts(inst.with_diversity(inst.diversity + step)).feasible


def _reverse_children(inst: GnapInstance) -> GnapInstance:
    """Same tree with every child order reversed; lists follow their leaves."""
    tree = inst.tree
    new = PhyloTree(tree.root, tuple(reversed(tree.edges)))
    by_name = dict(zip(tree.leaves, inst.lists))
    return GnapInstance(new, tuple(by_name[x] for x in new.leaves), inst.budget, inst.diversity)


@given(gnap_instances())
def test_child_order_does_not_change_answer(inst):
    flipped = _reverse_children(inst)
    for decide in (gnap_dp_counts, gnap_dp_budget_counts):
        assert decide(flipped).feasible == decide(inst).feasible


@given(gnap_instances(nap01=True))
def test_fast01_tables_match_general_tables(inst):
    _, _, fast = count_tables(inst, fast01=True)
    _, _, general = count_tables(inst, fast01=False)
    assert fast == general
    assert gnap_dp_counts(inst).notes["fast01"]
