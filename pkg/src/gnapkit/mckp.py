"""Multiple-Choice Knapsack: preprocessing and every exact decider.

All deciders return a :class:`~gnapkit.core.Decision` whose witness holds one
item index per class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Sequence

from .core import DEFAULT_WORK_CAP, Decision, WorkCapExceeded

Item = tuple[int, int]  # (cost, value)


@dataclass(frozen=True)
class MckpInstance:
    classes: tuple[tuple[Item, ...], ...]
    budget: int
    target: int

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(tuple((int(c), int(d)) for c, d in cl)
                                                   for cl in self.classes))

    @property
    def m(self) -> int:
        return len(self.classes)

    @property
    def n_items(self) -> int:
        return sum(len(cl) for cl in self.classes)

    @property
    def max_cost(self) -> int:
        return max((c for cl in self.classes for c, _ in cl), default=0)

    @property
    def max_len(self) -> int:
        return max((len(cl) for cl in self.classes), default=0)

    def costs(self) -> list[int]:
        return sorted({c for cl in self.classes for c, _ in cl})

    def values(self) -> list[int]:
        return sorted({d for cl in self.classes for _, d in cl})

    def with_budget(self, budget: int) -> MckpInstance:
        return MckpInstance(self.classes, budget, self.target)

    def with_target(self, target: int) -> MckpInstance:
        return MckpInstance(self.classes, self.budget, target)

    def cost(self, choice: Sequence[int]) -> int:
        return sum(self.classes[i][j][0] for i, j in enumerate(choice))

    def value(self, choice: Sequence[int]) -> int:
        return sum(self.classes[i][j][1] for i, j in enumerate(choice))

    def is_solution(self, choice: Sequence[int] | None) -> bool:
        if choice is None or len(choice) != self.m:
            return False
        if any(not 0 <= j < len(cl) for j, cl in zip(choice, self.classes)):
            return False
        return self.cost(choice) <= self.budget and self.value(choice) >= self.target

    def decision(self, choice: Sequence[int] | None, solver: str) -> Decision:
        if choice is None:
            return Decision(False, solver=solver)
        choice = tuple(choice)
        return Decision(True, choice, self.cost(choice), self.value(choice), solver)


def mckp_preprocess(inst: MckpInstance) -> tuple[MckpInstance, tuple[tuple[int, ...], ...]]:
    """Remove dominated items from every class.

    An item is dominated when another item of its class costs no more and is
    worth no less (ties keep the lowest index). Returns the reduced instance
    and, per class, the original indices of the surviving items, which are
    sorted by cost. An empty class stays empty and makes every decider say no.
    """
    classes, kept = [], []
    for cl in inst.classes:
        order = sorted(range(len(cl)), key=lambda j: (cl[j][0], -cl[j][1], j))
        survivors: list[int] = []
        best_value = None
        for j in order:
            if best_value is None or cl[j][1] > best_value:
                survivors.append(j)
                best_value = cl[j][1]
        classes.append(tuple(cl[j] for j in survivors))
        kept.append(tuple(survivors))
    return MckpInstance(tuple(classes), inst.budget, inst.target), tuple(kept)


def _trivial(inst: MckpInstance, solver: str) -> Decision | None:
    if any(not cl for cl in inst.classes):
        return Decision(False, solver=solver)
    if inst.m == 0:
        ok = inst.budget >= 0 and inst.target <= 0
        return Decision(True, (), 0, 0, solver) if ok else Decision(False, solver=solver)
    return None


def _backtrack(choices: list[dict], key) -> list[int]:
    """Follow stored (item, previous key) pointers from the last layer."""
    out = []
    for layer in reversed(choices):
        item, key = layer[key]
        out.append(item)
    return out[::-1]


def mckp_dp_budget(inst: MckpInstance) -> Decision:
    """Max value per (class prefix, budget) table; O(B * |N|).

    The budget is first tightened to ``C * m``, which gives the O(C * |N| * m)
    bound for small maximum costs.
    """
    name = "mckp_dp_budget"
    if (t := _trivial(inst, name)) is not None:
        return t
    if inst.budget < 0:
        return Decision(False, solver=name)
    cap = min(inst.budget, inst.max_cost * inst.m)
    # best[b] = max value of a selection for the prefix with cost <= b; None = unreachable
    best: list[int | None] = [0] * (cap + 1)
    pointers: list[list[tuple[int, int] | None]] = []
    for cl in inst.classes:
        new: list[int | None] = [None] * (cap + 1)
        ptr: list[tuple[int, int] | None] = [None] * (cap + 1)
        for j, (c, d) in enumerate(cl):
            if c > cap:
                continue
            for b in range(c, cap + 1):
                prev = best[b - c]
                if prev is not None and (new[b] is None or prev + d > new[b]):
                    new[b] = prev + d
                    ptr[b] = (j, b - c)
        best = new
        pointers.append(ptr)
    if best[cap] is None or best[cap] < inst.target:
        return Decision(False, solver=name)
    choice, b = [], cap
    for ptr in reversed(pointers):
        j, b = ptr[b]
        choice.append(j)
    return inst.decision(choice[::-1], name)


def mckp_dp_value(inst: MckpInstance) -> Decision:
    """Min cost per (class prefix, clamped value) table; O(D * |N|)."""
    name = "mckp_dp_value"
    if (t := _trivial(inst, name)) is not None:
        return t
    top = max(inst.target, 0)
    # cheapest[v] = min cost of a prefix selection with value >= v (values clamped at top)
    cheapest: list[int | None] = [0] + [None] * top
    pointers = []
    for cl in inst.classes:
        new: list[int | None] = [None] * (top + 1)
        ptr: list[tuple[int, int] | None] = [None] * (top + 1)
        for j, (c, d) in enumerate(cl):
            for v in range(top + 1):
                u = max(0, v - d)
                prev = cheapest[u]
                if prev is not None and (new[v] is None or prev + c < new[v]):
                    new[v] = prev + c
                    ptr[v] = (j, u)
        cheapest = new
        pointers.append(ptr)
    if cheapest[top] is None or cheapest[top] > inst.budget:
        return Decision(False, solver=name)
    choice, v = [], top
    for ptr in reversed(pointers):
        j, v = ptr[v]
        choice.append(j)
    return inst.decision(choice[::-1], name)


def _count_dp(inst: MckpInstance, key_of, weight_of, better):
    """Shared table over count tuples for the number-of-numbers deciders.

    ``key_of(item)`` is the sorted distinct quantity the table counts (cost
    or value); the last distinct quantity is left implicit. ``weight_of``
    gives the quantity the table optimises and ``better(a, b)`` says whether
    ``a`` improves on ``b``.
    """
    levels = sorted({key_of(it) for cl in inst.classes for it in cl})
    index = {q: k for k, q in enumerate(levels)}
    dims = len(levels) - 1
    zero = (0,) * dims

    def shifted(p, k):
        if k == dims:
            return p
        q = list(p)
        q[k] += 1
        return tuple(q)

    table: dict[tuple[int, ...], int] = {zero: 0}
    layers = []
    for cl in inst.classes:
        new: dict[tuple[int, ...], int] = {}
        ptr: dict[tuple[int, ...], tuple[int, tuple[int, ...]]] = {}
        for p, val in table.items():
            for j, it in enumerate(cl):
                q = shifted(p, index[key_of(it)])
                cand = val + weight_of(it)
                if q not in new or better(cand, new[q]):
                    new[q] = cand
                    ptr[q] = (j, p)
        table = new
        layers.append(ptr)
    return levels, table, layers


def _count_total(levels: list[int], p: tuple[int, ...], m: int) -> int:
    return (m - sum(p)) * levels[-1] + sum(pi * q for pi, q in zip(p, levels))


def mckp_xp_varc(inst: MckpInstance) -> Decision:
    """Table over counts of items per non-maximal cost; O(m^(var_c-1) * |N|)."""
    name = "mckp_xp_varc"
    if (t := _trivial(inst, name)) is not None:
        return t
    levels, table, layers = _count_dp(inst, lambda it: it[0], lambda it: it[1], lambda a, b: a > b)
    for p in sorted(table):
        if _count_total(levels, p, inst.m) <= inst.budget and table[p] >= inst.target:
            return inst.decision(_backtrack(layers, p), name)
    return Decision(False, solver=name)


def mckp_xp_vard(inst: MckpInstance) -> Decision:
    """Table over counts of items per non-maximal value, storing minimum cost."""
    name = "mckp_xp_vard"
    if (t := _trivial(inst, name)) is not None:
        return t
    levels, table, layers = _count_dp(inst, lambda it: it[1], lambda it: it[0], lambda a, b: a < b)
    for p in sorted(table):
        if table[p] <= inst.budget and _count_total(levels, p, inst.m) >= inst.target:
            return inst.decision(_backtrack(layers, p), name)
    return Decision(False, solver=name)


def mckp_xp_classes(inst: MckpInstance, work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    """Exhaustive product over the classes; the reference oracle."""
    name = "mckp_xp_classes"
    if (t := _trivial(inst, name)) is not None:
        return t
    if prod(len(cl) for cl in inst.classes) > work_cap:
        raise WorkCapExceeded(f"{prod(len(cl) for cl in inst.classes)} combinations > cap {work_cap}")
    for choice in itertools.product(*(range(len(cl)) for cl in inst.classes)):
        if inst.is_solution(choice):
            return inst.decision(choice, name)
    return Decision(False, solver=name)


def mckp_optimum(inst: MckpInstance, work_cap: int = DEFAULT_WORK_CAP) -> int | None:
    """Largest value reachable within the budget, by enumeration."""
    if any(not cl for cl in inst.classes):
        return None
    if prod(len(cl) for cl in inst.classes) > work_cap:
        raise WorkCapExceeded("too many combinations")
    best = None
    for choice in itertools.product(*(range(len(cl)) for cl in inst.classes)):
        if inst.cost(choice) <= inst.budget:
            v = inst.value(choice)
            best = v if best is None else max(best, v)
    return best


def predicted_work(inst: MckpInstance) -> dict[str, int]:
    """Rough table sizes used to pick a decider."""
    n, m = inst.n_items, inst.m
    return {
        "mckp_dp_budget": (min(max(inst.budget, 0), inst.max_cost * m) + 1) * n,
        "mckp_dp_value": (max(inst.target, 0) + 1) * n,
        "mckp_xp_varc": (m + 1) ** max(len(inst.costs()) - 1, 0) * n,
        "mckp_xp_vard": (m + 1) ** max(len(inst.values()) - 1, 0) * n,
        "mckp_xp_classes": prod(len(cl) for cl in inst.classes) * max(m, 1),
    }


SOLVERS = {
    "mckp_dp_budget": mckp_dp_budget,
    "mckp_dp_value": mckp_dp_value,
    "mckp_xp_varc": mckp_xp_varc,
    "mckp_xp_vard": mckp_xp_vard,
    "mckp_xp_classes": mckp_xp_classes,
}


def mckp_auto(inst: MckpInstance) -> Decision:
    work = predicted_work(inst)
    name = min(work, key=lambda k: (work[k], k))
    return SOLVERS[name](inst)
