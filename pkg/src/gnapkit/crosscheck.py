"""Randomized agreement runs: every applicable decider against its oracle and
every reduction through :func:`~gnapkit.reductions.check_reduction`.

Instance ``i`` of a family is generated from a seed derived from the run
seed, the family name and ``i``, so any disagreement can be replayed alone.
"""

from __future__ import annotations

import zlib
from fractions import Fraction
from itertools import product
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import gnap, ilpfeas, mckp, naptwo, reductions
from .core import Decision, WorkCapExceeded, is_star
from .mckp import MckpInstance
from .generate import (GenConfig, random_gnap, random_knapsack, random_mckp, random_mssubsum,
                       random_psum, random_unitc)
from .textformat import parse_instance, render_instance


def instance_seed(seed: int, family: str, index: int) -> int:
    ss = np.random.SeedSequence([seed, zlib.crc32(family.encode()), index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class Outcome:
    family: str
    index: int
    seed: int
    checks: int = 0
    disagreements: list[str] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    instance: str = ""


def _mutant(inst):
    """Deliberately wrong decider used to test the harness itself."""
    return Decision(not gnap.gnap_bruteforce(inst).feasible, solver="mutant")


def _compare(out: Outcome, name: str, expected: bool, decide, inst, verify=None):
    try:
        d = decide(inst)
    except WorkCapExceeded as exc:
        out.skipped.append(f"{name}: {exc}")
        return
    out.checks += 1
    if d.feasible != expected:
        out.disagreements.append(f"{name} says {d.feasible}, oracle says {expected}")
    elif d.feasible and verify is not None and not verify(d.witness):
        out.disagreements.append(f"{name} returned an invalid witness {d.witness}")


GNAP_CFG = GenConfig(taxa=5, height=3, max_len=3, max_cost=4, max_lambda=8, denom=4, max_budget=6)
HEIGHT1_CFG = GenConfig(taxa=5, height=1, max_len=3, max_cost=4, max_lambda=8, denom=4, max_budget=6)
NAP01_CFG = GenConfig(taxa=6, height=3, max_cost=4, max_lambda=6, max_budget=8, nap01=True)
GREEDY_CFG = GenConfig(taxa=6, height=2, max_lambda=6, max_budget=4, ultrametric=True, unit_cost=True)


def _gnap_height(seed: int) -> int:
    return 1 + seed % 3


def check_gnap(out: Outcome, inst, mutant: bool = False):
    oracle = gnap.gnap_bruteforce(inst).feasible
    deciders = {
        "gnap_dp_counts": gnap.gnap_dp_counts,
        "gnap_dp_budget_counts": gnap.gnap_dp_budget_counts,
        "gnap_enumerate_budget": gnap.gnap_enumerate_budget,
        "gnap_auto": gnap.gnap_auto,
    }
    if is_star(inst.tree):
        deciders["gnap_height1"] = gnap.gnap_height1
        deciders["gnap_height1_ilpf"] = ilpfeas.gnap_height1_ilpf
        deciders["gnap_height1_ilpf_pruned"] = lambda i: ilpfeas.gnap_height1_ilpf(i, pruned=True)
    if mutant:
        deciders["mutant"] = _mutant
    for name, decide in deciders.items():
        _compare(out, name, oracle, decide, inst, inst.is_solution)


def check_mckp(out: Outcome, inst, mutant: bool = False):
    oracle = mckp.mckp_xp_classes(inst).feasible
    deciders = dict(mckp.SOLVERS)
    deciders["mckp_ilpf"] = ilpfeas.mckp_ilpf
    deciders["mckp_ilpf_pruned"] = lambda i: ilpfeas.mckp_ilpf(i, pruned=True)
    deciders["preprocessed"] = lambda i: mckp.mckp_xp_classes(mckp.mckp_preprocess(i)[0])
    if mutant:
        deciders["mutant"] = lambda i: Decision(not oracle, solver="mutant")
    for name, decide in deciders.items():
        verify = None if name == "preprocessed" else inst.is_solution
        _compare(out, name, oracle, decide, inst, verify)


def check_nap01(out: Outcome, inst, mutant: bool = False):
    two = naptwo.normalize_two_project(inst)
    oracle = naptwo.two_project_subsets(two).feasible
    _compare(out, "gnap_bruteforce", oracle, gnap.gnap_bruteforce, inst, inst.is_solution)
    for name, decide in (("nap01_dp_budget", naptwo.nap01_dp_budget),
                         ("nap01_dp_diversity", naptwo.nap01_dp_diversity)):
        _compare(out, name, oracle, decide, two, lambda w: inst.is_solution(w))
    if mutant:
        _compare(out, "mutant", oracle, _mutant, inst)


def _best_within_budget(two: naptwo.TwoProjectInstance):
    best_sel, best_pd = None, None
    for sel in product((0, 1), repeat=two.n_taxa):
        if two.cost(sel) <= two.budget:
            value = two.pd(sel)
            if best_pd is None or value > best_pd:
                best_sel, best_pd = sel, value
    return best_sel, best_pd


def greedy_finding(inst) -> dict | None:
    """Structured counterexample for the height-2 greedy, or None if it is exact here.

    Flags both a wrong yes/no at the instance's own target and a greedy value
    below the budget-constrained optimum (which is wrong for some target).
    """
    two = naptwo.normalize_two_project(inst)
    d = naptwo.unitc_greedy_ultrametric2(two)
    oracle = naptwo.two_project_subsets(two).feasible
    sel, best = _best_within_budget(two)
    greedy_value = d.value if d.value is not None else Fraction(0)
    if d.feasible == oracle and (best is None or greedy_value >= best):
        return None
    return {
        "kind": "greedy_counterexample",
        "solver": d.solver,
        "instance": render_instance(inst),
        "greedy": {"feasible": d.feasible, "pd": str(greedy_value),
                   "selection": list(d.witness) if d.witness is not None else None},
        "oracle": {"feasible": oracle, "pd": str(best), "selection": list(sel) if sel else None},
    }


def verify_finding(finding: dict) -> bool:
    """Recompute a greedy finding from its instance text alone."""
    inst = parse_instance(finding["instance"])
    again = greedy_finding(inst)
    if again is None or again != finding:
        return False
    two = naptwo.normalize_two_project(inst)
    sel = finding["oracle"]["selection"]
    return sel is not None and two.cost(sel) <= two.budget and str(two.pd(sel)) == finding["oracle"]["pd"]


def check_greedy(out: Outcome, inst, mutant: bool = False):
    finding = greedy_finding(inst)
    out.checks += 1
    if finding is not None:
        out.findings.append(f"greedy {finding['greedy']} vs subset oracle {finding['oracle']}")
    if mutant:
        _compare(out, "mutant", naptwo.two_project_subsets(naptwo.normalize_two_project(inst)).feasible,
                 _mutant, inst)


def _reduction_cases(seed: int):
    """(record builder, source) pairs for one seed, all within preconditions."""
    cases = []
    kp = random_knapsack(seed)
    cases.append((reductions.kp_to_nap01, kp))
    cases.append((lambda s: reductions.kp_to_nap01(s, variant=True), kp))
    m = random_mckp(seed)
    m = m.with_target(max(1, m.target))
    m = MckpInstance(tuple(tuple((c, min(d, m.target)) for c, d in cl) for cl in m.classes), m.budget, m.target)
    cases.append((reductions.mckp_to_gnap_star, m))
    star = reductions.mckp_to_gnap_star(m).target
    star = star.with_budget(max(star.budget, sum(p[0].cost for p in star.lists)))
    cases.append((reductions.gnap_star_to_caterpillar, star))
    cases.append((reductions.gnap_height1_to_mckp, random_gnap(seed, HEIGHT1_CFG)))
    cases.append((reductions.mssubsum_to_mckp, random_mssubsum(seed)))
    ps = random_psum(seed)
    for t in (0, 3, None):
        cases.append((lambda s, t=t: reductions.ps_to_unitc(s, t), ps))
    unitc = reductions.ps_to_unitc(random_psum(seed ^ 0x5A5A), 0).target
    cases.append((reductions.unitc_to_ps, unitc))
    cases.append((reductions.unitc_to_ultrametric3, random_unitc(seed)))
    return cases


def check_reductions(out: Outcome, seed: int, mutant: bool = False):
    for build, source in _reduction_cases(seed):
        record = build(source)
        report = reductions.check_reduction(record)
        if report.skipped:
            out.skipped.append(f"{record.name}: {report.skipped}")
            continue
        out.checks += 1
        if not report.ok:
            out.disagreements.append(f"{record.name}: {report}")
    if mutant:
        out.disagreements.append("mutant: injected failure")


FAMILIES = ("gnap", "height1", "mckp", "nap01", "greedy", "reductions")


def run_one(family: str, seed: int, index: int, mutant: bool = False) -> Outcome:
    s = instance_seed(seed, family, index)
    out = Outcome(family, index, s)
    if family == "gnap":
        inst = random_gnap(s, GenConfig(**{**asdict(GNAP_CFG), "height": _gnap_height(s)}))
        out.instance = render_instance(inst)
        check_gnap(out, inst, mutant)
    elif family == "height1":
        inst = random_gnap(s, HEIGHT1_CFG)
        out.instance = render_instance(inst)
        check_gnap(out, inst, mutant)
    elif family == "mckp":
        inst = random_mckp(s)
        out.instance = render_instance(inst)
        check_mckp(out, inst, mutant)
    elif family == "nap01":
        inst = random_gnap(s, GenConfig(**{**asdict(NAP01_CFG), "height": _gnap_height(s)}))
        out.instance = render_instance(inst)
        check_nap01(out, inst, mutant)
    elif family == "greedy":
        inst = random_gnap(s, GenConfig(**{**asdict(GREEDY_CFG), "height": 1 + s % 2}))
        out.instance = render_instance(inst)
        check_greedy(out, inst, mutant)
    elif family == "reductions":
        check_reductions(out, s, mutant)
    else:
        raise ValueError(f"unknown family {family!r}")
    return out


def _run_args(args):
    return run_one(*args)


def crosscheck(families=FAMILIES, count: int = 100, seed: int = 0, jobs: int = 1,
               mutant: bool = False, start: int = 0) -> list[Outcome]:
    """Run instances ``start .. start+count-1`` of each family, ordered by (family, index)."""
    tasks = [(f, seed, i, mutant) for f in families for i in range(start, start + count)]
    if jobs <= 1:
        return [_run_args(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_args, tasks, chunksize=8))
