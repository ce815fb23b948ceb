from fractions import Fraction as F

import pytest
from hypothesis import given

from gnapkit.penaltysum import psum_instance
from gnapkit.textformat import FormatError, parse_instance, parse_tree, render_instance, render_tree

from conftest import g1, gnap_instances, m1, mckp_instances

G1_TEXT = """\
gnap v1
budget 3
diversity 4
tree (x1:3,x2:2)r;
projects x1 0:0 2:1
projects x2 0:0 1:1/2
"""


def test_minimal_gnap():
    inst = parse_instance("gnap v1\nbudget 0\ndiversity 0\ntree (x:1)r;\nprojects x 0:1\n")
    assert inst.n_taxa == 1
    assert inst.lists[0][0].survival == 1


def test_g1_text_round_trip():
    assert parse_instance(G1_TEXT) == g1()
    assert render_instance(parse_instance(G1_TEXT)) == G1_TEXT


def test_comments_and_blank_lines_are_ignored():
    text = "# header\n\n" + G1_TEXT.replace("budget 3", "budget 3   # spend at most 3")
    assert parse_instance(text) == g1()


def test_malformed_branch_length_has_position():
    bad = G1_TEXT.replace("x1:3", "x1:")
    with pytest.raises(FormatError) as exc:
        parse_instance(bad)
    assert (exc.value.line, exc.value.column) == (4, 10)
    assert "line 4, column 10" in str(exc.value)


def test_unknown_header():
    with pytest.raises(FormatError) as exc:
        parse_instance("nope v1\n")
    assert exc.value.line == 1


def test_projects_for_unknown_leaf():
    with pytest.raises(FormatError):
        parse_instance(G1_TEXT.replace("projects x2", "projects x9"))


def test_bad_integer():
    with pytest.raises(FormatError) as exc:
        parse_instance(G1_TEXT.replace("budget 3", "budget x"))
    assert exc.value.line == 2


def test_semantic_errors_are_deferred():
    # decreasing costs parse fine; validate reports them
    inst = parse_instance(G1_TEXT.replace("0:0 2:1", "2:0 0:1"))
    assert inst.lists[0][0].cost == 2


def test_unnamed_internal_vertices_get_names():
    tree = parse_tree("((a:1,b:2):3,c:4)r;")
    assert tree.leaves == ("a", "b", "c")
    assert render_tree(parse_tree(render_tree(tree))) == render_tree(tree)


def test_duplicate_names_rejected():
    with pytest.raises(FormatError):
        parse_tree("(a:1,a:2)r;")


def test_mckp_round_trip():
    assert parse_instance(render_instance(m1())) == m1()


def test_psum_round_trip():
    inst = psum_instance([(2, F(1, 2)), (1, F(1, 2))], 2, 4, 2)
    assert parse_instance(render_instance(inst)) == inst


@given(gnap_instances(ultrametric=True) | gnap_instances())
def test_gnap_round_trip(inst):
    assert parse_instance(render_instance(inst)) == inst


@given(mckp_instances())
def test_mckp_round_trip_random(inst):
    assert parse_instance(render_instance(inst)) == inst
