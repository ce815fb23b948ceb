"""Instances with exactly two projects per taxon.

After cost normalization every taxon i has a free project with survival
``a[i]`` and a paid project of cost ``c[i]`` with survival ``b[i]``. A
selection is a 0/1 tuple per taxon, which is also the GNAP project index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Sequence

from .core import (DEFAULT_WORK_CAP, Decision, GnapInstance, PhyloTree, PreconditionError,
                   WorkCapExceeded, as_fraction, is_ultrametric, phylo_diversity, project_list)

GREEDY_FLAG = "heuristic-exact-on-ultrametric-height-2"


@dataclass(frozen=True)
class TwoProjectInstance:
    tree: PhyloTree
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    c: tuple[int, ...]
    budget: int
    diversity: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(as_fraction(x) for x in self.a))
        object.__setattr__(self, "b", tuple(as_fraction(x) for x in self.b))
        object.__setattr__(self, "diversity", as_fraction(self.diversity))

    @property
    def n_taxa(self) -> int:
        return len(self.c)

    def to_gnap(self) -> GnapInstance:
        lists = tuple(project_list((0, ai), (ci, bi)) for ai, bi, ci in zip(self.a, self.b, self.c))
        return GnapInstance(self.tree, lists, self.budget, self.diversity)

    def cost(self, selection: Sequence[int]) -> int:
        return sum(ci for ci, s in zip(self.c, selection) if s)

    def pd(self, selection: Sequence[int]) -> Fraction:
        lists = [project_list((0, ai), (0, bi)) for ai, bi in zip(self.a, self.b)]
        return phylo_diversity(self.tree, lists, selection)

    def decision(self, selection: Sequence[int], solver: str, **notes) -> Decision:
        selection = tuple(selection)
        return Decision(True, selection, self.cost(selection), self.pd(selection), solver, notes)


def normalize_two_project(inst: GnapInstance) -> TwoProjectInstance:
    """Shift each list so its cheaper project is free; the budget absorbs the shift.

    A negative resulting budget means no assignment is affordable.
    """
    bad = [i for i, p in enumerate(inst.lists) if len(p) != 2]
    if bad:
        raise PreconditionError(f"taxa {bad} do not have exactly two projects")
    base = sum(p[0].cost for p in inst.lists)
    return TwoProjectInstance(
        inst.tree,
        tuple(p[0].survival for p in inst.lists),
        tuple(p[1].survival for p in inst.lists),
        tuple(p[1].cost - p[0].cost for p in inst.lists),
        inst.budget - base,
        inst.diversity,
    )


def two_project_subsets(inst: TwoProjectInstance, work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    """Try every subset of taxa to pay for; the reference oracle."""
    name = "two_project_subsets"
    if 2 ** inst.n_taxa > work_cap:
        raise WorkCapExceeded(f"2^{inst.n_taxa} subsets > cap {work_cap}")
    if inst.budget < 0:
        return Decision(False, solver=name)
    for sel in itertools.product((0, 1), repeat=inst.n_taxa):
        if inst.cost(sel) <= inst.budget and inst.pd(sel) >= inst.diversity:
            return inst.decision(sel, name)
    return Decision(False, solver=name)


def _require_01(inst: TwoProjectInstance):
    if any(x != 0 for x in inst.a) or any(x != 1 for x in inst.b):
        raise PreconditionError("expected survival 0 for free and 1 for paid projects")


def nap01_dp_budget(inst: TwoProjectInstance) -> Decision:
    """Tree knapsack over spent budget; O(B^2 * n) with B capped at the total cost.

    ``best[v][k]`` is the largest PD inside T_v over selections of cost
    exactly ``k`` that buy at least one leaf below ``v``. The empty selection
    (cost 0, PD 0) is kept implicit.
    """
    name = "nap01_dp_budget"
    _require_01(inst)
    if inst.budget < 0:
        return Decision(False, solver=name)
    if inst.diversity <= 0:
        return inst.decision((0,) * inst.n_taxa, name)
    tree = inst.tree
    cap = min(inst.budget, sum(inst.c))
    # value: (pd, back); back is a leaf marker or a tuple of child keys (None = nothing bought)
    best: dict[str, dict[int, tuple[Fraction, object]]] = {}
    for v in reversed(tree.preorder):
        cs = tree.children[v]
        if not cs:
            c = inst.c[tree.leaf_index[v]]
            best[v] = {c: (Fraction(0), "leaf")} if c <= cap else {}
            continue
        acc: dict = {None: (Fraction(0), ())}
        for u in cs:
            lifted = {k: val + tree.weight[u] for k, (val, _) in best[u].items()}
            new: dict = {}
            for k1, (v1, back) in acc.items():
                # child u buys nothing
                if k1 not in new or v1 > new[k1][0]:
                    new[k1] = (v1, back + (None,))
                for k2, v2 in lifted.items():
                    k = (k1 or 0) + k2
                    if k > cap:
                        continue
                    if k not in new or v1 + v2 > new[k][0]:
                        new[k] = (v1 + v2, back + (k2,))
            acc = new
        del acc[None]
        best[v] = acc
    root = best[tree.root]
    feasible = [k for k in sorted(root) if root[k][0] >= inst.diversity]
    if not feasible:
        return Decision(False, solver=name)
    sel = [0] * inst.n_taxa
    stack = [(tree.root, feasible[0])]
    while stack:
        v, k = stack.pop()
        back = best[v][k][1]
        if back == "leaf":
            sel[tree.leaf_index[v]] = 1
            continue
        stack.extend((u, ku) for u, ku in zip(tree.children[v], back) if ku is not None)
    return inst.decision(sel, name)


def _integral_weights(tree: PhyloTree):
    if any(e.weight.denominator != 1 for e in tree.edges):
        raise PreconditionError("edge weights must be integers here; use nap01_dp_budget")


class _DiversityDP:
    """Min-cost tables indexed by guaranteed diversity 0..D.

    ``inside[v][d]`` is the least cost of a leaf set below ``v`` whose PD
    within T_v is at least ``d``; ``edge[u][d]`` additionally counts the
    edge entering ``u``. Costs are clamped at ``inf`` (one more than the
    total cost), which stands for "impossible".
    """

    def __init__(self, inst: TwoProjectInstance, target: int):
        self.inst = inst
        self.tree = inst.tree
        self.D = target
        self.inf = sum(inst.c) + 1
        self.inside: dict[str, list[int]] = {}
        self.edge: dict[str, list[int]] = {}
        self.splits: dict[str, list[list[int]]] = {}
        self.cheapest: dict[str, int] = {}  # leaf index of the cheapest leaf below
        self.run()

    def run(self):
        tree, D, inf = self.tree, self.D, self.inf
        for v in reversed(tree.preorder):
            cs = tree.children[v]
            if not cs:
                i = tree.leaf_index[v]
                self.cheapest[v] = i
                self.inside[v] = [0] + [inf] * D
            else:
                self.cheapest[v] = min((self.cheapest[u] for u in cs), key=lambda i: (self.inst.c[i], i))
                acc = [0] + [inf] * D
                stages = []
                for u in cs:
                    e = self.edge[u]
                    new, split = [inf] * (D + 1), [0] * (D + 1)
                    for d in range(D + 1):
                        for d2 in range(d + 1):
                            val = min(acc[d - d2] + e[d2], inf)
                            if val < new[d]:
                                new[d], split[d] = val, d2
                    acc = new
                    stages.append(split)
                self.inside[v] = acc
                self.splits[v] = stages
            if v != tree.root:
                lam = int(tree.weight[v])
                nonempty0 = self.inst.c[self.cheapest[v]]
                inner = self.inside[v]
                self.edge[v] = [0] + [nonempty0 if d <= lam else inner[d - lam] for d in range(1, D + 1)]

    def selection(self) -> list[int]:
        sel = [0] * self.inst.n_taxa
        stack = [(self.tree.root, self.D)]
        while stack:
            v, d = stack.pop()
            for u, split in reversed(list(zip(self.tree.children[v], self.splits.get(v, ())))):
                d2 = split[d]
                d -= d2
                if d2 == 0:
                    continue
                e = d2 - int(self.tree.weight[u])
                if e <= 0:
                    sel[self.cheapest[u]] = 1
                else:
                    stack.append((u, e))
        return sel


def nap01_diversity_tables(inst: TwoProjectInstance, target: int) -> dict[str, list[int]]:
    """Edge-inclusive min-cost tables per non-root vertex and the root's table."""
    dp = _DiversityDP(inst, target)
    return {**dp.edge, inst.tree.root: dp.inside[inst.tree.root]}


def nap01_dp_diversity(inst: TwoProjectInstance) -> Decision:
    """Min-cost DP over achievable diversity; O(D^2 * n). Needs integer edge weights."""
    name = "nap01_dp_diversity"
    _require_01(inst)
    _integral_weights(inst.tree)
    if inst.budget < 0:
        return Decision(False, solver=name)
    target = ceil(inst.diversity)
    if inst.tree.total_weight < target:
        return Decision(False, solver=name, notes={"precheck": True})
    if target <= 0:
        return inst.decision((0,) * inst.n_taxa, name)
    dp = _DiversityDP(inst, target)
    if dp.inside[inst.tree.root][target] > inst.budget:
        return Decision(False, solver=name)
    return inst.decision(dp.selection(), name)


def unitc_greedy_ultrametric2(inst: TwoProjectInstance) -> Decision:
    """Buy, B times, the taxon with the largest exact PD gain (ties: lowest index).

    Only claimed for ultrametric trees of height at most 2 with unit costs
    and free projects of survival 0; exactness there is unproven, so the
    decision carries a flag.
    """
    name = "unitc_greedy_ultrametric2"
    ultra, _ = is_ultrametric(inst.tree)
    if not ultra or inst.tree.height > 2:
        raise PreconditionError("tree must be ultrametric with height at most 2")
    if any(c != 1 for c in inst.c) or any(x != 0 for x in inst.a):
        raise PreconditionError("expected unit costs and survival 0 for free projects")
    sel = [0] * inst.n_taxa
    current = Fraction(0)
    for _ in range(max(inst.budget, 0)):
        best_gain, best_i = None, None
        for i in range(inst.n_taxa):
            if sel[i]:
                continue
            sel[i] = 1
            gain = inst.pd(sel) - current
            sel[i] = 0
            if best_gain is None or gain > best_gain:
                best_gain, best_i = gain, i
        if best_i is None:
            break
        sel[best_i] = 1
        current += best_gain
    notes = {"flag": GREEDY_FLAG}
    if inst.budget < 0 or current < inst.diversity:
        return Decision(False, value=current, solver=name, notes=notes)
    return inst.decision(sel, name, **notes)


def nap01_solve(inst: GnapInstance) -> Decision:
    """Normalize a two-project 0/1 GNAP instance and run the budget DP."""
    d = nap01_dp_budget(normalize_two_project(inst))
    if not d:
        return d
    return Decision(True, d.witness, inst.cost(d.witness), inst.pd(d.witness), d.solver)
