"""Instance transformations between GNAP, its special cases, MCKP, knapsack,
multiset subset sum and Penalty-Sum.

Each reduction function returns a :class:`ReductionRecord` carrying the
target instance and witness maps in both directions; :func:`check_reduction`
decides both sides with the exhaustive oracles and re-verifies the mapped
witnesses. Witness shapes: GNAP and MCKP use one index per taxon/class,
knapsack a 0/1 vector, Penalty-Sum a sorted index subset and multiset subset
sum a multiplicity per element of ``Z``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import Any, Callable

from .core import (DEFAULT_WORK_CAP, Decision, Edge, GnapInstance, PhyloTree, PreconditionError, Project,
                   WorkCapExceeded, as_fraction, is_star, project_list, rational_bitlen)
from .gnap import gnap_bruteforce, height1_to_mckp
from .mckp import MckpInstance, mckp_preprocess, mckp_xp_classes
from .penaltysum import PenaltySumInstance, psum_bruteforce, validate_psum


@dataclass(frozen=True)
class KnapsackInstance:
    items: tuple[tuple[int, int], ...]  # (cost, value)
    budget: int
    target: int

    def is_solution(self, chosen) -> bool:
        if chosen is None or len(chosen) != len(self.items) or any(x not in (0, 1) for x in chosen):
            return False
        cost = sum(c for (c, _), x in zip(self.items, chosen) if x)
        value = sum(d for (_, d), x in zip(self.items, chosen) if x)
        return cost <= self.budget and value >= self.target


def kp_bruteforce(inst: KnapsackInstance, work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    if 2 ** len(inst.items) > work_cap:
        raise WorkCapExceeded(f"2^{len(inst.items)} subsets > cap {work_cap}")
    for chosen in itertools.product((0, 1), repeat=len(inst.items)):
        if inst.is_solution(chosen):
            return Decision(True, chosen, solver="kp_bruteforce")
    return Decision(False, solver="kp_bruteforce")


@dataclass(frozen=True)
class MsSubsetSumInstance:
    """Pick ``k`` elements of ``Z``, repetitions allowed, summing to ``Q``."""

    Z: tuple[int, ...]
    Q: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "Z", tuple(sorted(set(self.Z))))

    def is_solution(self, mult) -> bool:
        if mult is None or len(mult) != len(self.Z) or any(q < 0 for q in mult):
            return False
        return sum(mult) == self.k and sum(q * z for q, z in zip(mult, self.Z)) == self.Q


def mssubsum_bruteforce(inst: MsSubsetSumInstance, work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    if comb(len(inst.Z) + inst.k - 1, inst.k) > work_cap:
        raise WorkCapExceeded("too many multisets")
    for pick in itertools.combinations_with_replacement(range(len(inst.Z)), inst.k):
        mult = tuple(pick.count(j) for j in range(len(inst.Z)))
        if inst.is_solution(mult):
            return Decision(True, mult, solver="mssubsum_bruteforce")
    return Decision(False, solver="mssubsum_bruteforce")


@dataclass(frozen=True)
class ReductionRecord:
    name: str
    source: Any
    target: Any
    forward: Callable  # source witness -> target witness
    backward: Callable  # target witness -> source witness
    provenance: str
    params: dict = field(default_factory=dict)


def _fresh(base: str, used: set[str]) -> str:
    name = base
    while name in used:
        name += "'"
    used.add(name)
    return name


def _star(leaf_weights, center: str = "r") -> PhyloTree:
    return PhyloTree(center, tuple(Edge(center, f"x{i + 1}", as_fraction(w)) for i, w in enumerate(leaf_weights)))


# knapsack -> NAP with 0/1 survivals on a star

def kp_to_nap01(kp: KnapsackInstance, variant: bool = False) -> ReductionRecord:
    """Star with one leaf per item, edge weight = value, paid project = item cost.

    With ``variant`` the target diversity is 1 and paid projects survive with
    probability 1/D instead of 1.
    """
    if any(c < 1 for c, _ in kp.items):
        raise PreconditionError("item costs must be positive (the free project already costs 0)")
    if any(d < 0 for _, d in kp.items):
        raise PreconditionError("item values must be nonnegative")
    if not kp.items:
        raise PreconditionError("at least one item is required")
    if variant:
        if kp.target < 1:
            raise PreconditionError("the variant needs a target value D >= 1")
        paid, target = Fraction(1, kp.target), Fraction(1)
    else:
        paid, target = Fraction(1), Fraction(kp.target)
    tree = _star([d for _, d in kp.items])
    lists = tuple(project_list((0, 0), (c, paid)) for c, _ in kp.items)
    inst = GnapInstance(tree, lists, kp.budget, target)
    name = "kp_to_nap01_variant" if variant else "kp_to_nap01"
    return ReductionRecord(name, kp, inst, tuple, tuple,
                           "knapsack as a star with 0/1 projects" + (" (survival 1/D, D'=1)" if variant else ""))


# MCKP -> GNAP on a star with unit weights

def mckp_to_gnap_star(mckp: MckpInstance) -> ReductionRecord:
    """One leaf per class; item (c, d) becomes project (c, d/D); target diversity 1.

    Dominated items are dropped first so project lists are strictly increasing.
    """
    if mckp.m == 0 or any(not cl for cl in mckp.classes):
        raise PreconditionError("every class needs an item and there must be at least one class")
    if mckp.target <= 0:
        raise PreconditionError("target value D must be positive")
    bad = [(c, d) for cl in mckp.classes for c, d in cl if not 0 <= d <= mckp.target]
    if bad:
        raise PreconditionError(f"item values must lie in [0, D]; offending items {bad[:3]}")
    if any(c < 0 for cl in mckp.classes for c, _ in cl):
        raise PreconditionError("item costs must be nonnegative")
    reduced, kept = mckp_preprocess(mckp)
    D = mckp.target
    lists = tuple(project_list(*((c, Fraction(d, D)) for c, d in cl)) for cl in reduced.classes)
    inst = GnapInstance(_star([1] * mckp.m), lists, mckp.budget, Fraction(1))

    def forward(choice):
        out = []
        for i, j in enumerate(choice):
            c = mckp.classes[i][j][0]
            # the dearest kept item not exceeding c dominates j
            out.append(max(k for k, orig in enumerate(kept[i]) if mckp.classes[i][orig][0] <= c))
        return tuple(out)

    def backward(assignment):
        return tuple(kept[i][k] for i, k in enumerate(assignment))

    return ReductionRecord("mckp_to_gnap_star", mckp, inst, forward, backward,
                           "MCKP as a unit-weight star, survival = value / D")


# star GNAP with D = 1 -> caterpillar of maximum degree 3

def gnap_star_to_caterpillar(inst: GnapInstance) -> ReductionRecord:
    """Spine v1..vn with leaf x_i hanging from v_i and an extra taxon x* at v_n.

    All weights are 1, x* gets projects (0,0),(1,1), B' = B + 1 and
    D' = |X| + 1. Lists are first shifted so their cheapest project is free
    (the budget absorbs the shift), which the exchange onto x* relies on.
    """
    tree = inst.tree
    if not is_star(tree):
        raise PreconditionError("source tree must be a star (height 1)")
    if inst.diversity != 1:
        raise PreconditionError("source diversity target must be 1")
    if any(tree.weight[x] != 1 for x in tree.leaves):
        raise PreconditionError("source edge weights must all be 1")
    n = inst.n_taxa
    shift = sum(p[0].cost for p in inst.lists)
    budget = inst.budget - shift
    if budget < 0:
        raise PreconditionError("budget is below the cost of the cheapest projects")
    lists = tuple(tuple(Project(p.cost - pl[0].cost, p.survival) for p in pl) for pl in inst.lists)
    used = set(tree.leaves)
    spine = [_fresh(f"v{i + 1}", used) for i in range(n)]
    extra = _fresh("x*", used)
    edges = []
    for i, x in enumerate(tree.leaves):
        edges.append(Edge(spine[i], x, Fraction(1)))
        if i + 1 < n:
            edges.append(Edge(spine[i], spine[i + 1], Fraction(1)))
    edges.append(Edge(spine[-1], extra, Fraction(1)))
    target = GnapInstance(PhyloTree(spine[0], tuple(edges)), lists + (project_list((0, 0), (1, 1)),),
                          budget + 1, Fraction(n + 1))

    def forward(assignment):
        return tuple(assignment) + (1,)

    def backward(assignment):
        src = list(assignment[:n])
        if assignment[n] != 1 and target.cost(assignment) + 1 > target.budget:
            # free one unit of budget for x* by downgrading a paid taxon
            for i, j in enumerate(src):
                if lists[i][j].cost > 0:
                    src[i] = 0
                    break
        return tuple(src)

    return ReductionRecord("gnap_star_to_caterpillar", inst, target, forward, backward,
                           "star with D=1 to caterpillar, max degree 3, unit weights",
                           {"shift": shift})


def gnap_height1_to_mckp(inst: GnapInstance) -> ReductionRecord:
    mckp, scale = height1_to_mckp(inst)
    return ReductionRecord("gnap_height1_to_mckp", inst, mckp, tuple, tuple,
                           "star GNAP to MCKP, value = survival * weight * scale", {"scale": scale})


# multiset subset sum -> MCKP

def mssubsum_to_mckp(inst: MsSubsetSumInstance) -> ReductionRecord:
    """k classes; item j of class i costs and is worth 2^(l*i) + z_j; B = D = Q + sum 2^(l*i)."""
    if not inst.Z:
        raise PreconditionError("Z must be nonempty")
    if min(inst.Z) < 0:
        raise PreconditionError("elements of Z must be nonnegative")
    if inst.k < 0:
        raise PreconditionError("k must be nonnegative")
    ell = 0
    while 2 ** ell <= max(inst.Z):
        ell += 1
    classes = tuple(tuple((2 ** (ell * i) + z, 2 ** (ell * i) + z) for z in inst.Z) for i in range(1, inst.k + 1))
    total = inst.Q + sum(2 ** (ell * i) for i in range(1, inst.k + 1))
    mckp = MckpInstance(classes, total, total)

    def forward(mult):
        picks = [j for j, q in enumerate(mult) for _ in range(q)]
        return tuple(picks)

    def backward(choice):
        return tuple(list(choice).count(j) for j in range(len(inst.Z)))

    return ReductionRecord("mssubsum_to_mckp", inst, mckp, forward, backward,
                           "multiset subset sum to MCKP with cost = value", {"ell": ell})


# Penalty-Sum <-> unit-cost GNAP of height 2 with root degree 1

def default_t(inst: PenaltySumInstance) -> int:
    """Largest encoding length of an a_i plus the largest of a (1 - b_i)."""
    return (max(rational_bitlen(a) for a, _ in inst.tuples)
            + max(rational_bitlen(1 - b) for _, b in inst.tuples))


def _two_level(lam_root: Fraction, leaf_weights, names=None) -> PhyloTree:
    names = names or [f"x{i + 1}" for i in range(len(leaf_weights))]
    edges = [Edge("r", "v", lam_root)]
    edges += [Edge("v", x, w) for x, w in zip(names, leaf_weights)]
    return PhyloTree("r", tuple(edges))


def ps_to_unitc(inst: PenaltySumInstance, t: int | None = None) -> ReductionRecord:
    """Root r, single child v, one leaf per tuple; lists (0,0),(1,1-b_i); B = k.

    Weights are lambda(r,v) = 2^t Q and lambda(v,x_i) = 2^t a_i / (1 - b_i);
    D' = 2^t (D + Q). Any t >= 0 preserves the answer.
    """
    problems = [p for p in validate_psum(inst) if "outside" in p or "negative" in p]
    if problems:
        raise PreconditionError("; ".join(problems))
    if inst.n == 0:
        raise PreconditionError("at least one tuple is required")
    if inst.k > inst.n:
        raise PreconditionError("k exceeds the number of tuples")
    if inst.Q < 0:
        raise PreconditionError("Q must be nonnegative")
    if t is None:
        t = default_t(inst)
    scale = Fraction(2) ** t
    tree = _two_level(scale * inst.Q, [scale * a / (1 - b) for a, b in inst.tuples])
    lists = tuple(project_list((0, 0), (1, 1 - b)) for _, b in inst.tuples)
    target = GnapInstance(tree, lists, inst.k, scale * (inst.D + inst.Q))

    def forward(subset):
        chosen = set(subset)
        return tuple(1 if i in chosen else 0 for i in range(inst.n))

    def backward(assignment):
        chosen = [i for i, j in enumerate(assignment) if j == 1]
        # pad to exactly k; the objective only grows when tuples are added
        rest = [i for i in range(inst.n) if i not in chosen]
        return tuple(sorted(chosen + rest[:max(0, inst.k - len(chosen))]))

    return ReductionRecord("ps_to_unitc", inst, target, forward, backward,
                           "Penalty-Sum to unit-cost GNAP on a height-2 tree", {"t": t})


def _unitc_shape(inst: GnapInstance):
    """Return (v, leaves, paid survivals) of a height-2, root-degree-1, unit-cost instance."""
    tree = inst.tree
    top = tree.children[tree.root]
    if len(top) != 1:
        raise PreconditionError("root must have exactly one child")
    v = top[0]
    if tree.height != 2 or any(tree.children[x] for x in tree.children[v]):
        raise PreconditionError("tree must have height 2 with every leaf below the root's child")
    for i, pl in enumerate(inst.lists):
        if len(pl) != 2 or pl[0].cost != 0 or pl[0].survival != 0 or pl[1].cost != 1:
            raise PreconditionError(f"taxon {tree.leaves[i]}: expected projects (0,0),(1,w)")
    return v, tree.leaves, [pl[1].survival for pl in inst.lists]


def unitc_to_ps(inst: GnapInstance) -> ReductionRecord:
    """Tuples (lambda(v,x_i) * w_i, 1 - w_i), k = min(B, |X|), Q = lambda(r,v), D' = D - Q."""
    v, leaves, ws = _unitc_shape(inst)
    if any(not 0 < w < 1 for w in ws):
        raise PreconditionError("paid survivals must lie strictly between 0 and 1")
    tree = inst.tree
    k = max(0, min(inst.budget, len(leaves)))
    Q = tree.weight[v]
    ps = PenaltySumInstance(tuple((tree.weight[x] * w, 1 - w) for x, w in zip(leaves, ws)),
                            k, Q, inst.diversity - Q)

    def forward(assignment):
        chosen = [i for i, j in enumerate(assignment) if j == 1]
        rest = [i for i in range(len(leaves)) if i not in chosen]
        return tuple(sorted(chosen + rest[:max(0, k - len(chosen))]))

    def backward(subset):
        chosen = set(subset)
        return tuple(1 if i in chosen else 0 for i in range(len(leaves)))

    return ReductionRecord("unitc_to_ps", inst, ps, forward, backward,
                           "unit-cost GNAP on a height-2 tree to Penalty-Sum")


def ultrametric_t(lam_max: Fraction, lam_min: Fraction, max_survival: Fraction) -> int:
    t = 0
    while not (1 - Fraction(1, 2 ** t) > max_survival and 2 ** t * lam_min > lam_max):
        t += 1
    return t


def unitc_to_ultrametric3(inst: GnapInstance, t: int | None = None) -> ReductionRecord:
    """Make a height-2 unit-cost instance ultrametric of height at most 3.

    X1 are the leaves of maximum weight; every other leaf x_i is moved below
    a new vertex u_i together with a sibling x_i* whose paid project survives
    with probability 1 - 2^-t. Returns the source unchanged when X1 = X.
    """
    v, leaves, ws = _unitc_shape(inst)
    if any(w >= 1 for w in ws):
        raise PreconditionError("paid survivals must be below 1")
    tree = inst.tree
    lam = {x: tree.weight[x] for x in leaves}
    lam1 = max(lam.values())
    x2 = [x for x in leaves if lam[x] != lam1]
    if not x2:
        ident = lambda w: tuple(w)
        return ReductionRecord("unitc_to_ultrametric3", inst, inst, ident, ident,
                               "already ultrametric", {"t": None})
    lam_min = min(lam[x] for x in x2)
    if lam_min <= 0:
        raise PreconditionError("leaves outside the maximum-weight class need positive weight")
    t_min = ultrametric_t(lam1, lam_min, max(ws))
    if t is None:
        t = t_min
    elif t < t_min:
        raise PreconditionError(f"t = {t} is too small; need at least {t_min}")
    p, n2 = 2 ** t, len(x2)
    star_survival = 1 - Fraction(1, p)
    used = set(tree.vertices)
    edges = [Edge(tree.root, v, tree.weight[v] * 2 ** (t * n2) * (p - 1))]
    lists, layout = [], []  # layout: (source index or None, position of the matching x)
    for i, x in enumerate(leaves):
        if x not in x2:
            edges.append(Edge(v, x, (p - 1) * lam1))
            lists.append(inst.lists[i])
            layout.append(i)
            continue
        u = _fresh(f"u_{x}", used)
        xs = _fresh(f"{x}*", used)
        edges.append(Edge(v, u, p * (lam1 - lam[x])))
        edges.append(Edge(u, x, p * lam[x] - lam1))
        edges.append(Edge(u, xs, p * lam[x] - lam1))
        lists += [inst.lists[i], project_list((0, 0), (1, star_survival))]
        layout += [i, ("star", i)]
    new_tree = PhyloTree(tree.root, tuple(edges))
    D = (p - 1) * (inst.diversity + n2 * star_survival * lam1 + (2 ** (t * n2) - 1) * tree.weight[v])
    target = GnapInstance(new_tree, tuple(lists), inst.budget + n2, D)
    pos = {key: k for k, key in enumerate(layout)}

    def forward(assignment):
        out = [0] * len(layout)
        for k, key in enumerate(layout):
            out[k] = 1 if isinstance(key, tuple) else assignment[key]
        return tuple(out)

    def backward(assignment):
        sel = list(assignment)
        src = [pos[i] for i in range(len(leaves))]
        stars = [pos[("star", i)] for i in range(len(leaves)) if ("star", i) in pos]
        for s in stars:
            if sel[s]:
                continue
            i = layout[s][1]
            if sel[pos[i]]:
                sel[pos[i]], sel[s] = 0, 1
                continue
            bought = [k for k in src if sel[k]]
            if sum(sel) < target.budget:
                sel[s] = 1
            elif bought:
                sel[bought[0]], sel[s] = 0, 1
            else:
                sel[s] = 1
        return tuple(sel[k] for k in src)

    return ReductionRecord("unitc_to_ultrametric3", inst, target, forward, backward,
                           "unit-cost height-2 GNAP to an ultrametric tree of height 3",
                           {"t": t, "X2": tuple(x2)})


def integerize(inst: GnapInstance) -> tuple[GnapInstance, int]:
    """Scale edge weights and D by the lcm of their denominators."""
    s = lcm(inst.diversity.denominator, *(e.weight.denominator for e in inst.tree.edges))
    return GnapInstance(inst.tree.scaled(s), inst.lists, inst.budget, inst.diversity * s), s


REDUCTIONS: dict[str, Callable[..., ReductionRecord]] = {
    "kp_to_nap01": kp_to_nap01,
    "kp_to_nap01_variant": lambda kp: kp_to_nap01(kp, variant=True),
    "mckp_to_gnap_star": mckp_to_gnap_star,
    "gnap_star_to_caterpillar": gnap_star_to_caterpillar,
    "gnap_height1_to_mckp": gnap_height1_to_mckp,
    "mssubsum_to_mckp": mssubsum_to_mckp,
    "ps_to_unitc": ps_to_unitc,
    "unitc_to_ps": unitc_to_ps,
    "unitc_to_ultrametric3": unitc_to_ultrametric3,
}


def oracle(inst, work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    """Exhaustive decider matching the instance's problem."""
    if isinstance(inst, GnapInstance):
        return gnap_bruteforce(inst, work_cap)
    if isinstance(inst, MckpInstance):
        return mckp_xp_classes(inst, work_cap)
    if isinstance(inst, PenaltySumInstance):
        return psum_bruteforce(inst, work_cap)
    if isinstance(inst, KnapsackInstance):
        return kp_bruteforce(inst, work_cap)
    if isinstance(inst, MsSubsetSumInstance):
        return mssubsum_bruteforce(inst, work_cap)
    raise TypeError(f"no oracle for {type(inst).__name__}")


@dataclass(frozen=True)
class ReductionReport:
    name: str
    source_answer: bool | None
    target_answer: bool | None
    forward_ok: bool | None = None
    backward_ok: bool | None = None
    skipped: str = ""

    @property
    def ok(self) -> bool:
        if self.skipped:
            return True
        return (self.source_answer == self.target_answer
                and self.forward_ok is not False and self.backward_ok is not False)


def check_reduction(record: ReductionRecord, work_cap: int = DEFAULT_WORK_CAP) -> ReductionReport:
    """Decide both sides exhaustively, then map each witness across and re-verify it."""
    try:
        src = oracle(record.source, work_cap)
        tgt = oracle(record.target, work_cap)
    except WorkCapExceeded as exc:
        return ReductionReport(record.name, None, None, skipped=str(exc))
    forward_ok = backward_ok = None
    if src:
        forward_ok = record.target.is_solution(record.forward(src.witness))
    if tgt:
        backward_ok = record.source.is_solution(record.backward(tgt.witness))
    return ReductionReport(record.name, src.feasible, tgt.feasible, forward_ok, backward_ok)
