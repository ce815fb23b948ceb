from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gnapkit.core import WorkCapExceeded
from gnapkit.generate import random_psum
from gnapkit.penaltysum import psum_bruteforce, psum_instance, validate_psum

from conftest import seeds

HALVES = [(2, F(1, 2)), (1, F(1, 2))]


def test_two_tuples_yes():
    d = psum_bruteforce(psum_instance(HALVES, 2, 4, 2))
    assert d.feasible and d.witness == (0, 1) and d.value == 2


def test_two_tuples_no():
    d = psum_bruteforce(psum_instance(HALVES, 2, 4, F(5, 2)))
    assert not d.feasible and d.value == 2


def test_empty_selection_uses_empty_product():
    assert psum_instance(HALVES, 0, 4, 0).objective(()) == -4
    assert psum_bruteforce(psum_instance(HALVES, 0, 4, -4)).feasible
    assert not psum_bruteforce(psum_instance(HALVES, 0, 4, -3)).feasible


def test_k_larger_than_n_is_no():
    assert not psum_bruteforce(psum_instance(HALVES, 3, 0, -100)).feasible


def test_work_cap():
    inst = psum_instance([(1, F(1, 2))] * 20, 10, 1, 0)
    with pytest.raises(WorkCapExceeded):
        psum_bruteforce(inst, work_cap=1000)


def test_validate():
    assert validate_psum(psum_instance(HALVES, 2, 4, 2)) == []
    assert len(validate_psum(psum_instance([(-1, F(1))], -1, 0, 0))) == 3
    strict = psum_instance(HALVES, 2, F(1, 2), 0, strict=True)
    assert len(validate_psum(strict)) == 2


def test_is_solution_requires_exact_size():
    inst = psum_instance(HALVES, 2, 4, 2)
    assert inst.is_solution((0, 1))
    assert not inst.is_solution((0,))
    assert not inst.is_solution((0, 0))


@given(seeds, st.data())
def test_dominating_tuple_can_be_swapped_in(seed, data):
    # a_i >= a_j and b_i <= b_j: replacing j by i never lowers the objective
    inst = random_psum(seed)
    if inst.k == 0 or inst.k == inst.n:
        return
    subset = sorted(data.draw(st.permutations(range(inst.n)))[:inst.k])
    outside = [i for i in range(inst.n) if i not in subset]
    for j in subset:
        for i in outside:
            (ai, bi), (aj, bj) = inst.tuples[i], inst.tuples[j]
            if ai >= aj and bi <= bj:
                swapped = [i if x == j else x for x in subset]
                assert inst.objective(swapped) >= inst.objective(subset)


@given(seeds)
def test_bruteforce_returns_the_maximum(seed):
    inst = random_psum(seed)
    d = psum_bruteforce(inst)
    if d.feasible:
        assert inst.is_solution(d.witness)
    else:
        assert d.value is None or d.value < inst.D
