"""Exact deciders for the Generalized Noah's Ark Problem.

All deciders take a well-formed :class:`~gnapkit.core.GnapInstance` (see
:func:`~gnapkit.core.validate`) and return a :class:`~gnapkit.core.Decision`
whose witness holds one project index per taxon, in leaf order.
"""

from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from math import comb, lcm, prod

from .core import (DEFAULT_WORK_CAP, Decision, GnapInstance, PreconditionError, WorkCapExceeded,
                   distinct_costs, distinct_survivals, is_nap01, is_star, preprocess, validate)
from .mckp import MckpInstance, mckp_auto

log = logging.getLogger(__name__)


def _yes(inst: GnapInstance, witness, solver: str, **notes) -> Decision:
    witness = tuple(witness)
    return Decision(True, witness, inst.cost(witness), inst.pd(witness), solver, notes)


def gnap_bruteforce(inst: GnapInstance, work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    """Try every assignment in lexicographic order; the reference oracle."""
    name = "gnap_bruteforce"
    total = prod(len(p) for p in inst.lists)
    if total > work_cap:
        raise WorkCapExceeded(f"{total} assignments > cap {work_cap}")
    for assignment in itertools.product(*(range(len(p)) for p in inst.lists)):
        if inst.is_solution(assignment):
            return _yes(inst, assignment, name)
    return Decision(False, solver=name)


def _has_free_baseline(inst: GnapInstance) -> bool:
    return all(p and p[0].cost == 0 for p in inst.lists)


def gnap_enumerate_budget(inst: GnapInstance, work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    """Enumerate the at most B taxa that receive a paid project.

    Every list must start with a cost-0 project; otherwise the instance is
    handed to :func:`gnap_bruteforce`.
    """
    name = "gnap_enumerate_budget"
    if not _has_free_baseline(inst):
        d = gnap_bruteforce(inst, work_cap)
        return Decision(d.feasible, d.witness, d.cost, d.value, d.solver, {"fallback_from": name})
    n = inst.n_taxa
    top = min(max(inst.budget, 0), n)
    work = sum(comb(n, s) * max(len(p) - 1 for p in inst.lists) ** s for s in range(top + 1))
    if work > work_cap:
        raise WorkCapExceeded(f"{work} candidate selections > cap {work_cap}")
    base = [0] * n
    for s in range(top + 1):
        for paid in itertools.combinations(range(n), s):
            for upgrades in itertools.product(*(range(1, len(inst.lists[i])) for i in paid)):
                if sum(inst.lists[i][j].cost for i, j in zip(paid, upgrades)) > inst.budget:
                    continue
                assignment = list(base)
                for i, j in zip(paid, upgrades):
                    assignment[i] = j
                if inst.pd(assignment) >= inst.diversity:
                    return _yes(inst, assignment, name)
    return Decision(False, solver=name)


class _CountDP:
    """Bottom-up tables over count tuples shared by the two tree DPs.

    A key holds a prefix part (cost counts, or spent budget) followed by the
    survival counts for every distinct survival except the largest, whose
    count is implied by the number of leaves below the vertex. Values are
    ``(pd, back)`` where ``back`` is a project index at leaves and the tuple
    of child keys at inner vertices.
    """

    def __init__(self, inst: GnapInstance, work_cap: int, fast01: bool = False):
        self.inst = inst
        self.tree = inst.tree
        self.work_cap = work_cap
        self.work = 0
        self.survivals = distinct_survivals(inst)
        self.w_index = {w: k for k, w in enumerate(self.survivals)}
        self.dw = len(self.survivals) - 1
        self.fast01 = fast01 and self.survivals == [0, 1]
        n = inst.n_taxa
        # powers of (1 - w) for every count that can occur
        self.powers = [[(1 - w) ** k for k in range(n + 1)] for w in self.survivals]

    def unit(self, dims: int, k: int) -> tuple[int, ...]:
        return tuple(1 if j == k else 0 for j in range(dims))

    def survival_key(self, w: Fraction) -> tuple[int, ...]:
        return self.unit(self.dw, self.w_index[w])

    def aggregate(self, b: tuple[int, ...], leaves_below: int) -> Fraction:
        """Probability that some leaf survives, given the survival counts."""
        closing = leaves_below - sum(b)
        if self.fast01:
            return Fraction(1 if closing > 0 else 0)
        p = self.powers[-1][closing]
        for j, bj in enumerate(b):
            p *= self.powers[j][bj]
        return 1 - p

    def charge(self, amount: int):
        self.work += amount
        if self.work > self.work_cap:
            raise WorkCapExceeded(f"table work exceeded cap {self.work_cap}")

    def run(self, leaf_entries, combine):
        """``leaf_entries(i)`` yields ``(key, project)``; ``combine(k1, k2)``
        adds two keys or returns None to drop the pair."""
        tree = self.tree
        tables: dict[str, dict] = {}
        for v in reversed(tree.preorder):
            cs = tree.children[v]
            if not cs:
                table = {}
                for key, j in leaf_entries(tree.leaf_index[v]):
                    table.setdefault(key, (Fraction(0), j))
                tables[v] = table
                continue
            acc = None
            for u in cs:
                lam, below = tree.weight[u], len(tree.offspring[u])
                lifted = {k: val + lam * self.aggregate(k[-self.dw:] if self.dw else (), below)
                          for k, (val, _) in tables[u].items()}
                if acc is None:
                    acc = {k: (val, (k,)) for k, val in lifted.items()}
                    continue
                self.charge(len(acc) * len(lifted))
                new: dict = {}
                for k1, (v1, back) in acc.items():
                    for k2, v2 in lifted.items():
                        k = combine(k1, k2)
                        if k is None:
                            continue
                        val = v1 + v2
                        if k not in new or val > new[k][0]:
                            new[k] = (val, back + (k2,))
                acc = new
            tables[v] = acc
        return tables

    def witness(self, tables, key) -> list[int]:
        tree = self.tree
        out = [0] * self.inst.n_taxa
        stack = [(tree.root, key)]
        while stack:
            v, k = stack.pop()
            _, back = tables[v][k]
            cs = tree.children[v]
            if not cs:
                out[tree.leaf_index[v]] = back
            else:
                stack.extend(zip(cs, back))
        return out


def _add(k1, k2):
    return tuple(x + y for x, y in zip(k1, k2))


def count_tables(inst: GnapInstance, fast01: bool = False, work_cap: int = DEFAULT_WORK_CAP):
    """Per-vertex tables of the cost/survival count DP (exposed for testing)."""
    dp = _CountDP(inst, work_cap, fast01)
    costs = distinct_costs(inst)
    c_index = {c: k for k, c in enumerate(costs)}
    dc = len(costs) - 1

    def leaf_entries(i):
        for j, p in enumerate(inst.lists[i]):
            yield dp.unit(dc, c_index[p.cost]) + dp.survival_key(p.survival), j

    return dp, costs, dp.run(leaf_entries, _add)


def gnap_dp_counts(inst: GnapInstance, work_cap: int = DEFAULT_WORK_CAP, fast01: bool = True) -> Decision:
    """Tree DP over the number of taxa per distinct cost and per distinct survival.

    Polynomial for a fixed number of distinct costs and survivals. With
    survivals {0, 1} the survival aggregate is read off directly.
    """
    name = "gnap_dp_counts"
    dp, costs, tables = count_tables(inst, fast01, work_cap)
    n, dc = inst.n_taxa, len(costs) - 1
    root = tables[inst.tree.root]
    for key in sorted(root):
        a, b = key[:dc], key[dc:]
        a_last, b_last = n - sum(a), n - sum(b)
        if a_last < 0 or b_last < 0:
            continue
        spent = a_last * costs[-1] + sum(x * c for x, c in zip(a, costs))
        if spent <= inst.budget and root[key][0] >= inst.diversity:
            return _yes(inst, dp.witness(tables, key), name, fast01=dp.fast01)
    return Decision(False, solver=name, notes={"fast01": dp.fast01})


def gnap_dp_budget_counts(inst: GnapInstance, work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    """Tree DP over spent budget and the number of taxa per distinct survival."""
    name = "gnap_dp_budget_counts"
    if inst.budget < 0:
        return Decision(False, solver=name)
    dp = _CountDP(inst, work_cap)
    budget = inst.budget

    def leaf_entries(i):
        for j, p in enumerate(inst.lists[i]):
            if p.cost <= budget:
                yield (p.cost,) + dp.survival_key(p.survival), j

    def combine(k1, k2):
        return _add(k1, k2) if k1[0] + k2[0] <= budget else None

    tables = dp.run(leaf_entries, combine)
    root = tables[inst.tree.root]
    for key in sorted(root):
        if root[key][0] >= inst.diversity:
            return _yes(inst, dp.witness(tables, key), name)
    return Decision(False, solver=name)


def height1_scale(inst: GnapInstance) -> int:
    """Least positive integer turning every survival-times-weight value and D integral."""
    tree = inst.tree
    s0 = lcm(inst.diversity.denominator, *(p.survival.denominator for pl in inst.lists for p in pl))
    extra = lcm(*(Fraction(p.survival * tree.weight[x] * s0).denominator
                  for x, pl in zip(tree.leaves, inst.lists) for p in pl))
    return s0 * extra


def height1_to_mckp(inst: GnapInstance) -> tuple[MckpInstance, int]:
    """MCKP with one class per taxon and one item per project, plus the scale used.

    Item values are survival times edge weight times the scale; the item
    order equals the project order, so witnesses carry over unchanged.
    """
    if not is_star(inst.tree):
        raise PreconditionError(f"tree has height {inst.tree.height}, expected 1")
    s = height1_scale(inst)
    tree = inst.tree
    classes = tuple(tuple((p.cost, int(p.survival * tree.weight[x] * s)) for p in pl)
                    for x, pl in zip(tree.leaves, inst.lists))
    return MckpInstance(classes, inst.budget, int(inst.diversity * s)), s


def gnap_height1(inst: GnapInstance) -> Decision:
    name = "gnap_height1"
    mckp, scale = height1_to_mckp(inst)
    d = mckp_auto(mckp)
    if not d:
        return Decision(False, solver=name, notes={"mckp_solver": d.solver, "scale": scale})
    return _yes(inst, d.witness, name, mckp_solver=d.solver, scale=scale)


def predicted_work(inst: GnapInstance) -> dict[str, float]:
    """Predicted table sizes (or enumeration counts) times |X| for each general decider."""
    n = inst.n_taxa
    var_c, var_w = len(distinct_costs(inst)), len(distinct_survivals(inst))
    longest = max(len(p) for p in inst.lists)
    work = {
        "gnap_bruteforce": prod(len(p) for p in inst.lists) * n,
        "gnap_dp_counts": (n + 1) ** (var_c + var_w - 2) * n,
        "gnap_dp_budget_counts": (max(inst.budget, 0) + 1) * (n + 1) ** (var_w - 1) * n,
        "gnap_enumerate_budget": float("inf"),
    }
    if _has_free_baseline(inst):
        top = min(max(inst.budget, 0), n)
        work["gnap_enumerate_budget"] = sum(comb(n, s) * (longest - 1) ** s for s in range(top + 1)) * n
    return work


SOLVERS = {
    "gnap_bruteforce": gnap_bruteforce,
    "gnap_enumerate_budget": gnap_enumerate_budget,
    "gnap_dp_counts": gnap_dp_counts,
    "gnap_dp_budget_counts": gnap_dp_budget_counts,
}


def choose_solver(inst: GnapInstance) -> str:
    """Name of the decider :func:`gnap_auto` would run after preprocessing."""
    if is_star(inst.tree):
        return "gnap_height1"
    if is_nap01(inst):
        return "nap01_dp_budget"
    work = predicted_work(inst)
    return min(work, key=lambda k: (work[k], k))


def gnap_auto(inst: GnapInstance, work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    """Preprocess, then route by tree shape and parameters; ``solver`` names the route."""
    problems = validate(inst)
    if problems:
        raise PreconditionError("; ".join(problems))
    reduced, settled = preprocess(inst)
    if settled is not None:
        log.debug("solver %s", settled.solver)
        return settled
    name = choose_solver(reduced)
    log.debug("solver %s", name)
    if name == "gnap_height1":
        return gnap_height1(reduced)
    if name == "nap01_dp_budget":
        from .naptwo import nap01_solve
        return nap01_solve(reduced)
    return SOLVERS[name](reduced, work_cap)
