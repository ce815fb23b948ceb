from fractions import Fraction as F

from gnapkit import crosscheck, naptwo
from gnapkit.core import Decision, GnapInstance, PhyloTree, project_list
from gnapkit.crosscheck import greedy_finding, instance_seed, run_one, verify_finding


def _two_clades():
    tree = PhyloTree.from_edges("r", [("r", "u", 3), ("u", "x1", 1), ("u", "x2", 1), ("r", "x3", 4)])
    lists = tuple(project_list((0, 0), (1, F(1, 2))) for _ in range(3))
    return GnapInstance(tree, lists, 2, F(0))


def _first_taxa(two):
    """Buys the lowest-index taxa regardless of gain."""
    sel = [1 if i < two.budget else 0 for i in range(two.n_taxa)]
    return two.decision(sel, "first_taxa") if two.pd(sel) >= two.diversity else \
        Decision(False, value=two.pd(sel), solver="first_taxa")


def test_instance_seed_is_stable_and_distinct():
    assert instance_seed(0, "gnap", 3) == instance_seed(0, "gnap", 3)
    assert len({instance_seed(0, f, i) for f in ("gnap", "mckp") for i in range(50)}) == 100


def test_replay_reproduces_instance():
    a, b = run_one("gnap", 5, 17), run_one("gnap", 5, 17)
    assert a.instance == b.instance and a.seed == b.seed


def test_greedy_exact_on_small_example():
    inst = _two_clades()
    assert greedy_finding(inst) is None
    assert greedy_finding(inst.with_diversity(F(100))) is None


def test_finding_from_weak_heuristic_verifies(monkeypatch):
    monkeypatch.setattr(naptwo, "unitc_greedy_ultrametric2", _first_taxa)
    finding = greedy_finding(_two_clades())
    assert finding is not None and finding["kind"] == "greedy_counterexample"
    # picking the cherry (x1, x2) is worse than one cherry leaf plus the long branch
    assert F(finding["greedy"]["pd"]) < F(finding["oracle"]["pd"])
    assert finding["oracle"]["selection"] in ([1, 0, 1], [0, 1, 1])
    assert verify_finding(finding)
    tampered = {**finding, "oracle": {**finding["oracle"], "pd": "0"}}
    assert not verify_finding(tampered)


def test_greedy_family_records_findings(monkeypatch):
    monkeypatch.setattr(naptwo, "unitc_greedy_ultrametric2", _first_taxa)
    outs = crosscheck.crosscheck(("greedy",), count=30)
    assert any(o.findings for o in outs)
    assert not any(o.disagreements for o in outs)
