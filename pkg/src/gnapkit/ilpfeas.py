"""Integer-feasibility encodings of MCKP and height-1 GNAP, and a bounded search.

Classes (or taxa) sharing the same cost/value signature form a *type*; the
encodings only count how many members of each type take each cost. The
search enumerates, per type, the ways of distributing its members over the
costs and prunes with the two global constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (DEFAULT_WORK_CAP, Decision, GnapInstance, PreconditionError, WorkCapExceeded,
                   as_fraction, is_star)
from .mckp import MckpInstance, mckp_preprocess

RELATIONS = ("<=", ">=", "=")


@dataclass(frozen=True)
class Variable:
    name: str
    lb: int
    ub: int


@dataclass(frozen=True)
class LinearConstraint:
    terms: tuple[tuple[str, Fraction], ...]
    relation: str
    rhs: Fraction
    label: str = ""

    def holds(self, lhs: Fraction) -> bool:
        if self.relation == "<=":
            return lhs <= self.rhs
        if self.relation == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class PiecewiseEdgeSum:
    """Sum of the ``l`` largest edge weights of a type, for ``l = 0..len``."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(sorted((as_fraction(w) for w in self.weights), reverse=True))
        object.__setattr__(self, "weights", ws)

    @property
    def prefix(self) -> tuple[Fraction, ...]:
        out = [Fraction(0)]
        for w in self.weights:
            out.append(out[-1] + w)
        return tuple(out)

    def __call__(self, count: int) -> Fraction:
        return self.prefix[count]


@dataclass(frozen=True)
class Definition:
    """``target = f(sum of plus) - f(sum of minus)``."""

    target: str
    f: PiecewiseEdgeSum
    plus: tuple[str, ...]
    minus: tuple[str, ...]
    f_name: str = "f"

    def evaluate(self, values: dict[str, int]) -> Fraction:
        return self.f(sum(values[v] for v in self.plus)) - self.f(sum(values[v] for v in self.minus))


@dataclass(frozen=True)
class ClassType:
    costs: tuple[int, ...]
    values: tuple[Fraction, ...]
    members: tuple[int, ...]
    constants: tuple[Fraction, ...]  # one per global cost; the penalty where the cost is absent
    edge_sum: PiecewiseEdgeSum | None = None

    @property
    def multiplicity(self) -> int:
        return len(self.members)


@dataclass
class IlpFeasibility:
    variables: list[Variable] = field(default_factory=list)
    constraints: list[LinearConstraint] = field(default_factory=list)
    definitions: list[Definition] = field(default_factory=list)
    # equality blocks: (variable names, total); every name lies in at most one block
    blocks: list[tuple[tuple[str, ...], int]] = field(default_factory=list)
    types: list[ClassType] = field(default_factory=list)
    global_costs: tuple[int, ...] = ()
    meta: dict = field(default_factory=dict)

    def add_variable(self, name: str, lb: int, ub: int) -> str:
        self.variables.append(Variable(name, lb, ub))
        return name

    def add_block(self, names: Sequence[str], total: int, label: str):
        self.blocks.append((tuple(names), total))
        self.constraints.append(LinearConstraint(tuple((n, Fraction(1)) for n in names), "=",
                                                 Fraction(total), label))

    def check(self):
        declared = {v.name for v in self.variables} | {d.target for d in self.definitions}
        for con in self.constraints:
            if con.relation not in RELATIONS:
                raise ValueError(f"unknown relation {con.relation!r}")
            missing = [n for n, _ in con.terms if n not in declared]
            if missing:
                raise ValueError(f"constraint {con.label!r} uses undeclared {missing}")

    def is_satisfied(self, values: dict[str, int]) -> bool:
        if any(not v.lb <= values[v.name] <= v.ub for v in self.variables):
            return False
        # definitions are only meaningful once the block totals hold
        if any(sum(values[n] for n in names) != total for names, total in self.blocks):
            return False
        full = dict(values)
        for d in self.definitions:
            full[d.target] = d.evaluate(full)
        return all(c.holds(sum(k * full[n] for n, k in c.terms)) for c in self.constraints)


def _type_constants(costs: tuple[int, ...], values: tuple[Fraction, ...], global_costs, penalty):
    lookup = dict(zip(costs, values))
    return tuple(lookup.get(c, penalty) for c in global_costs)


def _mckp_penalty(inst: MckpInstance) -> Fraction:
    # any selection using a penalised variable stays strictly below the target
    top = sum(max(0, max(d for _, d in cl)) for cl in inst.classes)
    return Fraction(-top - max(0, 1 - inst.target))


def build_mckp_ilpf(inst: MckpInstance, pruned: bool = False) -> IlpFeasibility:
    """Encoding with one count variable per (type, cost).

    ``inst`` should be preprocessed (no dominated items). With ``pruned`` the
    variables for costs absent from a type are omitted instead of penalised.
    """
    sys = IlpFeasibility()
    global_costs = tuple(inst.costs())
    sys.global_costs = global_costs
    penalty = _mckp_penalty(inst)
    groups: dict[tuple, list[int]] = {}
    for k, cl in enumerate(inst.classes):
        items = tuple(sorted(cl))
        groups.setdefault(items, []).append(k)
    cost_terms, value_terms = [], []
    for t, items in enumerate(sorted(groups)):
        costs = tuple(c for c, _ in items)
        values = tuple(Fraction(d) for _, d in items)
        ctype = ClassType(costs, values, tuple(groups[items]),
                          _type_constants(costs, values, global_costs, penalty))
        sys.types.append(ctype)
        names = []
        for c, d in zip(global_costs, ctype.constants):
            if pruned and c not in costs:
                continue
            name = sys.add_variable(f"x[T{t},c={c}]", 0, ctype.multiplicity)
            names.append(name)
            cost_terms.append((name, Fraction(c)))
            value_terms.append((name, d))
        sys.add_block(names, ctype.multiplicity, f"pick[T{t}]")
    sys.constraints.append(LinearConstraint(tuple(cost_terms), "<=", Fraction(inst.budget), "budget"))
    sys.constraints.append(LinearConstraint(tuple(value_terms), ">=", Fraction(inst.target), "value"))
    sys.meta = {"kind": "mckp", "pruned": pruned, "penalty": penalty}
    sys.check()
    return sys


def _count_of(values: dict, t: int, c: int) -> int:
    return values.get(f"x[T{t},c={c}]", values.get(f"y[T{t},c={c}]", 0))


def mckp_ilpf_choice(sys: IlpFeasibility, values: dict[str, int]) -> tuple[int, ...]:
    """Turn type counts back into one item per class (indices into the encoded instance)."""
    m = sum(t.multiplicity for t in sys.types)
    choice = [0] * m
    for t, ctype in enumerate(sys.types):
        members = iter(ctype.members)
        for c in sys.global_costs:
            for _ in range(_count_of(values, t, c)):
                choice[next(members)] = ctype.costs.index(c)
    return tuple(choice)


def build_height1_gnap_ilpf(inst: GnapInstance, pruned: bool = False) -> IlpFeasibility:
    """Encoding for star trees: counts per (type, cost) plus derived edge sums.

    Within a type the dearest projects go to the heaviest edges, so the
    weight covered by the taxa of cost ``c_i`` is a difference of prefix
    sums. Taxa with a zero-weight edge never contribute and are fixed to
    their cheapest project beforehand.
    """
    tree = inst.tree
    if not is_star(tree):
        raise PreconditionError(f"tree has height {tree.height}, expected 1")
    weights = [tree.weight[x] for x in tree.leaves]
    fixed = [i for i, w in enumerate(weights) if w == 0]
    active = [i for i, w in enumerate(weights) if w != 0]
    budget = inst.budget - sum(inst.lists[i][0].cost for i in fixed)
    sys = IlpFeasibility()
    global_costs = tuple(sorted({p.cost for i in active for p in inst.lists[i]}))
    sys.global_costs = global_costs
    total = sum((weights[i] for i in active), Fraction(0))
    lightest = min((weights[i] for i in active), default=Fraction(1))
    # a penalised cost covering any positive weight pushes the value below D
    penalty = -(total + max(0, 1 - inst.diversity)) / lightest
    groups: dict[tuple, list[int]] = {}
    for i in active:
        sig = tuple((p.cost, p.survival) for p in inst.lists[i])
        groups.setdefault(sig, []).append(i)
    cost_terms, value_terms = [], []
    for t, sig in enumerate(sorted(groups)):
        members = tuple(sorted(groups[sig], key=lambda i: (-weights[i], i)))
        costs = tuple(c for c, _ in sig)
        survivals = tuple(w for _, w in sig)
        f = PiecewiseEdgeSum(tuple(weights[i] for i in members))
        ctype = ClassType(costs, survivals, members,
                          _type_constants(costs, survivals, global_costs, penalty), f)
        sys.types.append(ctype)
        ys, ws = [], []
        for c, w in zip(global_costs, ctype.constants):
            if pruned and c not in costs:
                continue
            ys.append(sys.add_variable(f"y[T{t},c={c}]", 0, ctype.multiplicity))
            ws.append((c, w))
        for k, (name, (c, w)) in enumerate(zip(ys, ws)):
            g = f"g[T{t},c={c}]"
            sys.definitions.append(Definition(g, f, tuple(ys[k:]), tuple(ys[k + 1:]), f"f[T{t}]"))
            cost_terms.append((name, Fraction(c)))
            value_terms.append((g, w))
        sys.add_block(ys, ctype.multiplicity, f"pick[T{t}]")
    sys.constraints.append(LinearConstraint(tuple(cost_terms), "<=", Fraction(budget), "budget"))
    sys.constraints.append(LinearConstraint(tuple(value_terms), ">=", inst.diversity, "diversity"))
    sys.meta = {"kind": "gnap_height1", "pruned": pruned, "penalty": penalty, "fixed": tuple(fixed)}
    sys.check()
    return sys


def height1_ilpf_assignment(sys: IlpFeasibility, n_taxa: int, values: dict[str, int]) -> tuple[int, ...]:
    """Project index per taxon: within a type, dearer projects go to heavier edges."""
    out = [0] * n_taxa
    for t, ctype in enumerate(sys.types):
        members = iter(ctype.members)
        for c in reversed(sys.global_costs):
            for _ in range(_count_of(values, t, c)):
                out[next(members)] = ctype.costs.index(c)
    return tuple(out)


def _compositions(total: int, bounds: Sequence[tuple[int, int]]):
    """All vectors within ``bounds`` summing to ``total``."""
    if not bounds:
        if total == 0:
            yield ()
        return
    (lo, hi), rest = bounds[0], bounds[1:]
    rest_lo = sum(b[0] for b in rest)
    rest_hi = sum(b[1] for b in rest)
    for x in range(max(lo, total - rest_hi), min(hi, total - rest_lo) + 1):
        for tail in _compositions(total - x, rest):
            yield (x,) + tail


def _pareto(options, relations):
    """Drop options beaten on every inequality and equal on every equality coordinate."""
    def dominates(p, q):
        for x, y, r in zip(p[0], q[0], relations):
            if (r == "=" and x != y) or (r == "<=" and x > y) or (r == ">=" and x < y):
                return False
        return True

    kept = []
    for opt in sorted(options, key=lambda o: o[0]):
        if any(dominates(k, opt) for k in kept):
            continue
        kept = [k for k in kept if not dominates(opt, k)] + [opt]
    return kept


def solve_feasibility(sys: IlpFeasibility, work_cap: int = DEFAULT_WORK_CAP) -> dict[str, int] | None:
    """A satisfying integer assignment, or None when the system is infeasible.

    Variables outside any equality block are treated as one-variable blocks
    ranging over their bounds. Every definition must read variables of a
    single block.
    """
    by_name = {v.name: v for v in sys.variables}
    if any(v.lb > v.ub for v in sys.variables):
        return None
    in_block = {n for names, _ in sys.blocks for n in names}
    blocks = list(sys.blocks)
    blocks += [((v.name,), None) for v in sys.variables if v.name not in in_block]
    block_of = {n: k for k, (names, _) in enumerate(blocks) for n in names}
    defs_of: dict[int, list[Definition]] = {}
    for d in sys.definitions:
        owners = {block_of[n] for n in d.plus + d.minus}
        if len(owners) > 1:
            raise ValueError(f"definition {d.target} spans several blocks")
        defs_of.setdefault(owners.pop() if owners else -1, []).append(d)
    constants = {d.target: d.evaluate({}) for d in defs_of.get(-1, [])}
    relations = [c.relation for c in sys.constraints]
    work = 0

    def charge(n):
        nonlocal work
        work += n
        if work > work_cap:
            raise WorkCapExceeded(f"feasibility search exceeded cap {work_cap}")

    base = [sum(k * constants.get(n, 0) for n, k in c.terms if n in constants) for c in sys.constraints]
    options_per_block = []
    for k, (names, total) in enumerate(blocks):
        bounds = [(by_name[n].lb, by_name[n].ub) for n in names]
        if total is None:
            vectors = ((x,) for x in range(bounds[0][0], bounds[0][1] + 1))
        else:
            vectors = _compositions(total, bounds)
        opts = []
        for vec in vectors:
            charge(1)
            vals = dict(zip(names, vec))
            for d in defs_of.get(k, []):
                vals[d.target] = d.evaluate(vals)
            contrib = tuple(sum((coef * vals[n] for n, coef in c.terms if n in vals), Fraction(0))
                            for c in sys.constraints)
            opts.append((contrib, vec))
        if not opts:
            return None
        options_per_block.append(_pareto(opts, relations))
    nb, nc = len(blocks), len(sys.constraints)
    # suffix bounds of what the remaining blocks can still contribute
    lo = [[Fraction(0)] * nc for _ in range(nb + 1)]
    hi = [[Fraction(0)] * nc for _ in range(nb + 1)]
    for k in range(nb - 1, -1, -1):
        for j in range(nc):
            col = [o[0][j] for o in options_per_block[k]]
            lo[k][j] = lo[k + 1][j] + min(col)
            hi[k][j] = hi[k + 1][j] + max(col)

    def viable(k, partial):
        for j, con in enumerate(sys.constraints):
            need = con.rhs - partial[j]
            if con.relation in ("<=", "=") and lo[k][j] > need:
                return False
            if con.relation in (">=", "=") and hi[k][j] < need:
                return False
        return True

    chosen: list = []

    def dfs(k, partial):
        charge(1)
        if not viable(k, partial):
            return False
        if k == nb:
            return True
        for contrib, vec in options_per_block[k]:
            chosen.append(vec)
            if dfs(k + 1, [p + c for p, c in zip(partial, contrib)]):
                return True
            chosen.pop()
        return False

    if not dfs(0, base):
        return None
    return {n: x for (names, _), vec in zip(blocks, chosen) for n, x in zip(names, vec)}


def mckp_ilpf(inst: MckpInstance, pruned: bool = False, work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    """Decide MCKP through the type encoding; witness indices refer to ``inst``."""
    name = "mckp_ilpf"
    reduced, kept = mckp_preprocess(inst)
    if any(not cl for cl in reduced.classes):
        return Decision(False, solver=name)
    sys = build_mckp_ilpf(reduced, pruned)
    values = solve_feasibility(sys, work_cap)
    if values is None:
        return Decision(False, solver=name)
    choice = mckp_ilpf_choice(sys, values)
    return inst.decision([kept[i][j] for i, j in enumerate(choice)], name)


def gnap_height1_ilpf(inst: GnapInstance, pruned: bool = False,
                      work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    name = "gnap_height1_ilpf"
    sys = build_height1_gnap_ilpf(inst, pruned)
    values = solve_feasibility(sys, work_cap)
    if values is None:
        return Decision(False, solver=name)
    w = height1_ilpf_assignment(sys, inst.n_taxa, values)
    return Decision(True, w, inst.cost(w), inst.pd(w), name)


def _fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def export_text(sys: IlpFeasibility) -> str:
    """One line per bound, constraint and definition, in construction order."""
    lines = ["variables"]
    lines += [f"  {v.lb} <= {v.name} <= {v.ub} integer" for v in sys.variables]
    lines.append("constraints")
    for c in sys.constraints:
        lhs = " + ".join(f"{_fmt(k)} {n}" for n, k in c.terms) or "0"
        lines.append(f"  {c.label}: {lhs} {c.relation} {_fmt(c.rhs)}")
    if sys.definitions:
        lines.append("definitions")
        fs = {}
        for d in sys.definitions:
            fs.setdefault(d.f_name, d.f)
        for fname, f in fs.items():
            lines.append(f"  {fname} = prefix sums ({', '.join(_fmt(p) for p in f.prefix)})")
        for d in sys.definitions:
            minus = " + ".join(d.minus) or "0"
            lines.append(f"  def {d.target} = {d.f_name}({' + '.join(d.plus)}) - {d.f_name}({minus})")
    return "\n".join(lines) + "\n"
