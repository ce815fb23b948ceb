from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gnapkit.core import GnapInstance, PhyloTree, project_list
from gnapkit.generate import GenConfig, random_gnap
from gnapkit.mckp import MckpInstance
from gnapkit.naptwo import TwoProjectInstance

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def star(*weights, names=None) -> PhyloTree:
    names = names or [f"x{i + 1}" for i in range(len(weights))]
    return PhyloTree.from_edges("r", [("r", x, w) for x, w in zip(names, weights)])


def g1(budget=3, diversity=4) -> GnapInstance:
    """Star with leaves x1 (3), x2 (2); P1={(0,0),(2,1)}, P2={(0,0),(1,1/2)}."""
    lists = (project_list((0, 0), (2, 1)), project_list((0, 0), (1, F(1, 2))))
    return GnapInstance(star(3, 2), lists, budget, F(diversity))


def m1(budget=3, target=4) -> MckpInstance:
    return MckpInstance((((1, 2), (2, 3)), ((1, 1), (3, 4))), budget, target)


def n1(budget=2, diversity=3) -> TwoProjectInstance:
    return TwoProjectInstance(star(3, 2), (F(0), F(0)), (F(1), F(1)), (2, 1), budget, F(diversity))


def u1(budget=1, diversity=0) -> TwoProjectInstance:
    tree = PhyloTree.from_edges("r", [("r", "v1", 1), ("v1", "x1", 2), ("v1", "x2", 2),
                                      ("r", "v2", 2), ("v2", "x3", 1)])
    return TwoProjectInstance(tree, (F(0),) * 3, (F(1, 2), F(1, 2), F(1)), (1, 1, 1), budget, F(diversity))


def five_taxon(survival=F(1, 2), budget=2, diversity=0) -> GnapInstance:
    """Height-2 unit-cost tree: r -> v (1), v -> x1..x5 with weights 6,6,4,2,1."""
    edges = [("r", "v", 1)] + [("v", f"x{i + 1}", w) for i, w in enumerate((6, 6, 4, 2, 1))]
    lists = tuple(project_list((0, 0), (1, survival)) for _ in range(5))
    return GnapInstance(PhyloTree.from_edges("r", edges), lists, budget, F(diversity))


@pytest.fixture
def G1():
    return g1()


@pytest.fixture
def M1():
    return m1()


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def gnap_instances(draw, taxa=5, heights=(1, 2, 3), **knobs):
    height = draw(st.sampled_from(heights))
    return random_gnap(draw(seeds), GenConfig(taxa=taxa, height=height, **knobs))


@st.composite
def mckp_instances(draw, max_classes=5, max_len=3, max_cost=8, max_value=8):
    item = st.tuples(st.integers(0, max_cost), st.integers(0, max_value))
    classes = draw(st.lists(st.lists(item, min_size=1, max_size=max_len).map(tuple),
                            min_size=1, max_size=max_classes).map(tuple))
    budget = draw(st.integers(0, max_cost * len(classes)))
    target = draw(st.integers(0, max_value * len(classes)))
    return MckpInstance(classes, budget, target)


rationals01 = st.builds(lambda p, q: F(min(p, q), q), st.integers(0, 6), st.integers(1, 6))
