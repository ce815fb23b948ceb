"""Tree and instance data model, exact phylogenetic diversity, validation,
parameter profiling and preprocessing.

Every number that enters a decision is an exact ``int`` or ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]

DEFAULT_WORK_CAP = 10**7


class WorkCapExceeded(RuntimeError):
    """Raised when an exhaustive method would exceed its work cap."""


class PreconditionError(ValueError):
    """Raised when an input violates the stated precondition of an operation."""


def as_fraction(x: Rational | str) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def rational_bitlen(x: Rational) -> int:
    """Bits of the numerator plus bits of the denominator, in lowest terms."""
    x = as_fraction(x)
    return abs(x.numerator).bit_length() + x.denominator.bit_length()


@dataclass(frozen=True)
class Edge:
    parent: str
    child: str
    weight: Fraction


@dataclass(frozen=True)
class PhyloTree:
    """Rooted edge-weighted tree.

    Child order is the order in which edges are listed; the leaf order X is
    the left-to-right (depth-first) order of the leaves.
    """

    root: str
    edges: tuple[Edge, ...]

    @classmethod
    def from_edges(cls, root: str, edges: Iterable[tuple[str, str, Rational]]) -> PhyloTree:
        return cls(root, tuple(Edge(p, c, as_fraction(w)) for p, c, w in edges))

    @cached_property
    def children(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {}
        for e in self.edges:
            out.setdefault(e.parent, []).append(e.child)
            out.setdefault(e.child, [])
        out.setdefault(self.root, [])
        return {v: tuple(cs) for v, cs in out.items()}

    @cached_property
    def parent(self) -> dict[str, str]:
        return {e.child: e.parent for e in self.edges}

    @cached_property
    def weight(self) -> dict[str, Fraction]:
        """Weight of the edge entering each non-root vertex."""
        return {e.child: e.weight for e in self.edges}

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self.children)

    @cached_property
    def preorder(self) -> tuple[str, ...]:
        order, stack, seen = [], [self.root], set()
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            order.append(v)
            stack.extend(reversed(self.children.get(v, ())))
        return tuple(order)

    @cached_property
    def leaves(self) -> tuple[str, ...]:
        return tuple(v for v in self.preorder if not self.children[v] and v != self.root)

    @cached_property
    def leaf_index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.leaves)}

    @cached_property
    def offspring(self) -> dict[str, tuple[int, ...]]:
        """Leaf indices below every vertex (the vertex itself if it is a leaf)."""
        off: dict[str, tuple[int, ...]] = {}
        for v in reversed(self.preorder):
            cs = self.children[v]
            if not cs:
                off[v] = (self.leaf_index[v],)
            else:
                off[v] = tuple(i for c in cs for i in off[c])
        return off

    @cached_property
    def depth(self) -> dict[str, int]:
        d = {self.root: 0}
        for v in self.preorder:
            for c in self.children[v]:
                d[c] = d[v] + 1
        return d

    @property
    def height(self) -> int:
        return max(self.depth.values())

    @property
    def max_degree(self) -> int:
        deg = {v: len(cs) for v, cs in self.children.items()}
        for e in self.edges:
            deg[e.child] += 1
        return max(deg.values())

    @property
    def max_weight(self) -> Fraction:
        return max((e.weight for e in self.edges), default=Fraction(0))

    @property
    def total_weight(self) -> Fraction:
        return sum((e.weight for e in self.edges), Fraction(0))

    def root_distances(self) -> dict[str, Fraction]:
        dist = {self.root: Fraction(0)}
        for v in self.preorder:
            for c in self.children[v]:
                dist[c] = dist[v] + self.weight[c]
        return dist

    def scaled(self, factor: Rational) -> PhyloTree:
        f = as_fraction(factor)
        return PhyloTree(self.root, tuple(Edge(e.parent, e.child, e.weight * f) for e in self.edges))


@dataclass(frozen=True)
class Project:
    cost: int
    survival: Fraction

    def __post_init__(self):
        object.__setattr__(self, "survival", as_fraction(self.survival))


ProjectList = tuple[Project, ...]


def project_list(*pairs: tuple[int, Rational]) -> ProjectList:
    return tuple(Project(c, as_fraction(w)) for c, w in pairs)


@dataclass(frozen=True)
class GnapInstance:
    tree: PhyloTree
    lists: tuple[ProjectList, ...]
    budget: int
    diversity: Fraction

    def __post_init__(self):
        object.__setattr__(self, "diversity", as_fraction(self.diversity))
        object.__setattr__(self, "lists", tuple(tuple(p) for p in self.lists))

    @property
    def n_taxa(self) -> int:
        return len(self.tree.leaves)

    def with_budget(self, budget: int) -> GnapInstance:
        return GnapInstance(self.tree, self.lists, budget, self.diversity)

    def with_diversity(self, diversity: Rational) -> GnapInstance:
        return GnapInstance(self.tree, self.lists, self.budget, as_fraction(diversity))

    def survivals(self, assignment: Sequence[int]) -> list[Fraction]:
        return [self.lists[i][j].survival for i, j in enumerate(assignment)]

    def cost(self, assignment: Sequence[int]) -> int:
        return sum(self.lists[i][j].cost for i, j in enumerate(assignment))

    def pd(self, assignment: Sequence[int]) -> Fraction:
        return phylo_diversity(self.tree, self.lists, assignment)

    def is_solution(self, assignment: Sequence[int] | None) -> bool:
        if assignment is None or len(assignment) != len(self.lists):
            return False
        if any(not 0 <= j < len(p) for j, p in zip(assignment, self.lists)):
            return False
        return self.cost(assignment) <= self.budget and self.pd(assignment) >= self.diversity


@dataclass(frozen=True)
class Decision:
    """Answer of a decider together with a witness when the answer is yes.

    ``witness`` holds one index per taxon/class (or the chosen subset for
    Penalty-Sum); ``value`` is the PD, the MCKP value or the Penalty-Sum
    objective of that witness.
    """

    feasible: bool
    witness: tuple[int, ...] | None = None
    cost: int | None = None
    value: Rational | None = None
    solver: str = ""
    notes: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.feasible


def phylo_diversity(tree: PhyloTree, lists: Sequence[ProjectList], assignment: Sequence[int]) -> Fraction:
    """Expected PD of the chosen projects, computed in one bottom-up pass."""
    leaves = tree.leaves
    if len(assignment) != len(leaves) or len(lists) != len(leaves):
        raise ValueError(
            f"assignment has {len(assignment)} entries and {len(lists)} lists for {len(leaves)} leaves")
    extinct: dict[str, Fraction] = {}
    total = Fraction(0)
    for v in reversed(tree.preorder):
        cs = tree.children[v]
        if not cs:
            i = tree.leaf_index[v]
            extinct[v] = 1 - lists[i][assignment[i]].survival
        else:
            extinct[v] = prod((extinct[c] for c in cs), start=Fraction(1))
        if v != tree.root:
            total += tree.weight[v] * (1 - extinct[v])
    return total


def validate(inst: GnapInstance) -> list[str]:
    """Every violated invariant of ``inst``; an empty list means well-formed."""
    problems: list[str] = []
    tree = inst.tree
    seen_children: set[str] = set()
    for e in tree.edges:
        if e.child in seen_children:
            problems.append(f"vertex {e.child!r} has more than one parent")
        seen_children.add(e.child)
        if e.child == tree.root:
            problems.append("root has a parent")
        if e.weight < 0:
            problems.append(f"edge {e.parent}->{e.child} has negative weight {e.weight}")
    reached = set(tree.preorder)
    unreached = set(tree.children) - reached
    if unreached:
        problems.append(f"vertices unreachable from the root: {sorted(unreached)}")
    if not tree.leaves:
        problems.append("tree has no taxa")
    if len(inst.lists) != len(tree.leaves):
        problems.append(f"{len(inst.lists)} project lists for {len(tree.leaves)} leaves")
    for i, plist in enumerate(inst.lists):
        name = tree.leaves[i] if i < len(tree.leaves) else f"#{i}"
        if not plist:
            problems.append(f"taxon {name}: empty project list")
            continue
        for p in plist:
            if not 0 <= p.survival <= 1:
                problems.append(f"taxon {name}: survival outside [0,1]: {p.survival}")
            if p.cost < 0 or int(p.cost) != p.cost:
                problems.append(f"taxon {name}: cost is not a nonnegative integer: {p.cost}")
        for a, b in zip(plist, plist[1:]):
            if not a.cost < b.cost:
                problems.append(f"taxon {name}: costs not strictly increasing")
                break
        for a, b in zip(plist, plist[1:]):
            if not a.survival < b.survival:
                problems.append(f"taxon {name}: survivals not strictly increasing")
                break
    if inst.budget < 0:
        problems.append(f"negative budget {inst.budget}")
    if inst.diversity < 0:
        problems.append(f"negative diversity target {inst.diversity}")
    return problems


def is_ultrametric(tree: PhyloTree) -> tuple[bool, Fraction | None]:
    dist = tree.root_distances()
    depths = {dist[x] for x in tree.leaves}
    if len(depths) == 1:
        return True, depths.pop()
    return False, None


def top_assignment(inst: GnapInstance) -> tuple[int, ...]:
    return tuple(len(p) - 1 for p in inst.lists)


def preprocess(inst: GnapInstance) -> tuple[GnapInstance, Decision | None]:
    """Drop unaffordable projects and settle instances with a slack budget.

    Returns the reduced instance and, when the answer is already determined,
    a ``Decision`` (otherwise ``None``). Dropped projects always form a suffix
    of their list, so project indices are unchanged.
    """
    lists = tuple(tuple(p for p in plist if p.cost <= inst.budget) for plist in inst.lists)
    reduced = GnapInstance(inst.tree, lists, inst.budget, inst.diversity)
    if any(not p for p in lists):
        return reduced, Decision(False, solver="preprocess")
    max_cost = max(p.cost for plist in lists for p in plist)
    if inst.budget >= max_cost * len(lists):
        top = top_assignment(reduced)
        pd = reduced.pd(top)
        if pd >= inst.diversity:
            return reduced, Decision(True, top, reduced.cost(top), pd, "preprocess")
        return reduced, Decision(False, solver="preprocess")
    return reduced, None


@dataclass(frozen=True)
class ParameterProfile:
    n_taxa: int
    max_list_len: int
    n_projects: int
    max_cost: int
    var_c: int
    var_w: int
    wcode: int
    val_lambda: Fraction
    height: int
    max_degree: int


def distinct_costs(inst: GnapInstance) -> list[int]:
    return sorted({p.cost for plist in inst.lists for p in plist})


def distinct_survivals(inst: GnapInstance) -> list[Fraction]:
    return sorted({p.survival for plist in inst.lists for p in plist})


def profile(inst: GnapInstance) -> ParameterProfile:
    projects = [p for plist in inst.lists for p in plist]
    return ParameterProfile(
        n_taxa=inst.n_taxa,
        max_list_len=max(len(p) for p in inst.lists),
        n_projects=len(projects),
        max_cost=max(p.cost for p in projects),
        var_c=len(distinct_costs(inst)),
        var_w=len(distinct_survivals(inst)),
        wcode=max(rational_bitlen(p.survival) for p in projects),
        val_lambda=inst.tree.max_weight,
        height=inst.tree.height,
        max_degree=inst.tree.max_degree,
    )


def is_star(tree: PhyloTree) -> bool:
    """Height 1: every child of the root is a leaf."""
    return bool(tree.children[tree.root]) and tree.height == 1


def is_nap01(inst: GnapInstance) -> bool:
    """Two projects per taxon, survival 0 for the cheaper and 1 for the dearer."""
    return all(len(p) == 2 and p[0].survival == 0 and p[1].survival == 1 for p in inst.lists)
