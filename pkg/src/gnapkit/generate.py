"""Seeded random instances for tests, crosschecks and experiments.

Randomness comes from numpy's PCG64 bit generator, so a (seed, config) pair
gives the same instance on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Edge, GnapInstance, PhyloTree, Project
from .mckp import MckpInstance
from .penaltysum import PenaltySumInstance
from .reductions import KnapsackInstance, MsSubsetSumInstance


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _int(rng, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi]."""
    return int(rng.integers(lo, hi + 1))


def _fractions(denom: int, lo_open=False, hi_open=False) -> list[Fraction]:
    vals = {Fraction(p, q) for q in range(1, denom + 1) for p in range(q + 1)}
    return sorted(v for v in vals if not (lo_open and v == 0) and not (hi_open and v == 1))


def _sample_sorted(rng, pool: list, k: int) -> list:
    idx = sorted(rng.choice(len(pool), size=k, replace=False).tolist())
    return [pool[i] for i in idx]


@dataclass(frozen=True)
class GenConfig:
    taxa: int = 4
    height: int = 2
    max_len: int = 3  # L
    max_cost: int = 4
    max_lambda: int = 8
    denom: int = 4  # survival denominators are at most this
    max_budget: int = 6
    ultrametric: bool = False
    unit_cost: bool = False
    nap01: bool = False
    paid_below_one: bool = False  # unit-cost only: paid survivals in (0,1)
    exact_taxa: bool = False  # otherwise the taxa count is drawn from 1..taxa

    def check(self):
        if self.taxa < 1 or self.height < 1:
            raise ValueError("need at least one taxon and height >= 1")
        if self.unit_cost and self.nap01:
            raise ValueError("unit_cost and nap01 are exclusive")
        if self.ultrametric and self.max_lambda < 1:
            raise ValueError("ultrametric trees need max_lambda >= 1")
        if not (self.unit_cost or self.nap01) and self.max_len > self.max_cost + 1:
            raise ValueError("max_len exceeds the number of distinct costs available")
        if self.nap01 and self.max_cost < 1:
            raise ValueError("nap01 needs max_cost >= 1")


def random_tree(rng, n: int, height: int) -> PhyloTree:
    """Tree with ``n`` leaves and height exactly ``height`` (unit weights)."""
    edges: list[tuple[str, str]] = []
    counter = {"v": 0, "x": 0}

    def fresh(kind):
        counter[kind] += 1
        return f"{kind}{counter[kind]}"

    def build(name: str, d: int, k: int, force: bool):
        if d == height - 1:
            parts = [1] * k
        else:
            c = _int(rng, 1, min(k, 3))
            cuts = sorted(rng.choice(range(1, k), size=c - 1, replace=False).tolist()) if c > 1 else []
            bounds = [0] + cuts + [k]
            parts = [b - a for a, b in zip(bounds, bounds[1:])]
        for i, part in enumerate(parts):
            deep = force and i == 0
            if part == 1 and (d == height - 1 or (not deep and rng.random() < 0.5)):
                child = fresh("x")
                edges.append((name, child))
            else:
                child = fresh("v")
                edges.append((name, child))
                build(child, d + 1, part, deep)

    build("r", 0, n, True)
    return PhyloTree("r", tuple(Edge(p, c, Fraction(1)) for p, c in edges))


def _weights(rng, tree: PhyloTree, cfg: GenConfig) -> PhyloTree:
    if not cfg.ultrametric:
        return PhyloTree(tree.root, tuple(Edge(e.parent, e.child, Fraction(_int(rng, 0, cfg.max_lambda)))
                                          for e in tree.edges))
    total = max(cfg.max_lambda, tree.height)
    below: dict[str, int] = {}
    for v in reversed(tree.preorder):
        below[v] = 1 + max((below[c] for c in tree.children[v]), default=-1)
    dist = {tree.root: 0}
    for v in tree.preorder:
        for c in tree.children[v]:
            if tree.children[c]:
                dist[c] = _int(rng, dist[v] + 1, total - below[c])
            else:
                dist[c] = total
    return PhyloTree(tree.root, tuple(Edge(e.parent, e.child, Fraction(dist[e.child] - dist[e.parent]))
                                      for e in tree.edges))


def _project_list(rng, cfg: GenConfig) -> tuple[Project, ...]:
    if cfg.nap01:
        c0, c1 = _sample_sorted(rng, list(range(cfg.max_cost + 1)), 2)
        if rng.random() < 0.7:
            c1, c0 = c1 - c0, 0
        return (Project(c0, Fraction(0)), Project(c1, Fraction(1)))
    if cfg.unit_cost:
        pool = _fractions(cfg.denom, lo_open=True, hi_open=cfg.paid_below_one)
        return (Project(0, Fraction(0)), Project(1, pool[_int(rng, 0, len(pool) - 1)]))
    k = _int(rng, 1, cfg.max_len)
    costs = _sample_sorted(rng, list(range(cfg.max_cost + 1)), k)
    if rng.random() < 0.6:
        costs = [c - costs[0] for c in costs]
    survivals = _sample_sorted(rng, _fractions(cfg.denom), k)
    return tuple(Project(c, w) for c, w in zip(costs, survivals))


def _target_near(rng, value: Fraction) -> Fraction:
    jitter = [Fraction(-1), Fraction(0), Fraction(0), Fraction(1, 2), Fraction(1)][_int(rng, 0, 4)]
    return max(Fraction(0), value + jitter)


def random_gnap(seed: int, cfg: GenConfig = GenConfig()) -> GnapInstance:
    cfg.check()
    rng = make_rng(seed)
    n = cfg.taxa if cfg.exact_taxa else _int(rng, 1, cfg.taxa)
    tree = _weights(rng, random_tree(rng, n, cfg.height), cfg)
    lists = tuple(_project_list(rng, cfg) for _ in tree.leaves)
    budget = _int(rng, 0, cfg.max_budget)
    guess = [_int(rng, 0, len(p) - 1) for p in lists]
    inst = GnapInstance(tree, lists, budget, Fraction(0))
    return inst.with_diversity(_target_near(rng, inst.pd(guess)))


@dataclass(frozen=True)
class MckpConfig:
    max_classes: int = 6
    max_len: int = 4
    max_cost: int = 8
    max_value: int = 8


def random_mckp(seed: int, cfg: MckpConfig = MckpConfig()) -> MckpInstance:
    rng = make_rng(seed)
    m = _int(rng, 1, cfg.max_classes)
    classes = tuple(tuple((_int(rng, 0, cfg.max_cost), _int(rng, 0, cfg.max_value))
                          for _ in range(_int(rng, 1, cfg.max_len))) for _ in range(m))
    guess = [_int(rng, 0, len(cl) - 1) for cl in classes]
    inst = MckpInstance(classes, 0, 0)
    budget = inst.cost(guess) + _int(rng, -2, 2)
    target = inst.value(guess) + _int(rng, -1, 2)
    return MckpInstance(classes, max(budget, 0), max(target, 0))


def random_unitc(seed: int, taxa: int = 4) -> GnapInstance:
    """Unit-cost instance on r -> v -> leaves with positive leaf weights and paid survivals in (0,1)."""
    cfg = GenConfig(taxa=taxa, height=2, max_lambda=6, max_budget=3, unit_cost=True, paid_below_one=True)
    inst = random_gnap(seed, cfg)
    dist = inst.tree.root_distances()
    edges = [Edge("r", "v", Fraction(seed % 4))]
    edges += [Edge("v", x, max(Fraction(1), dist[x])) for x in inst.tree.leaves]
    return GnapInstance(PhyloTree("r", tuple(edges)), inst.lists, inst.budget, inst.diversity)


def random_psum(seed: int, n_max: int = 5, a_max: int = 6, denom: int = 4, q_max: int = 6) -> PenaltySumInstance:
    rng = make_rng(seed)
    n = _int(rng, 1, n_max)
    pool = _fractions(denom, lo_open=True, hi_open=True)
    tuples = tuple((Fraction(_int(rng, 0, a_max)), pool[_int(rng, 0, len(pool) - 1)]) for _ in range(n))
    k = _int(rng, 0, n)
    Q = Fraction(_int(rng, 0, q_max))
    inst = PenaltySumInstance(tuples, k, Q, Fraction(0))
    guess = sorted(rng.choice(n, size=k, replace=False).tolist())
    return PenaltySumInstance(tuples, k, Q, _target_near(rng, inst.objective(guess)) - Q / 2)


def random_knapsack(seed: int, n_max: int = 6, c_max: int = 6, d_max: int = 8) -> KnapsackInstance:
    rng = make_rng(seed)
    n = _int(rng, 1, n_max)
    items = tuple((_int(rng, 1, c_max), _int(rng, 0, d_max)) for _ in range(n))
    budget = _int(rng, 0, sum(c for c, _ in items))
    target = _int(rng, 1, max(1, sum(d for _, d in items)))
    return KnapsackInstance(items, budget, target)


def random_mssubsum(seed: int, z_max: int = 7, size_max: int = 4, k_max: int = 3) -> MsSubsetSumInstance:
    rng = make_rng(seed)
    size = _int(rng, 1, size_max)
    Z = tuple(sorted(rng.choice(z_max + 1, size=size, replace=False).tolist()))
    k = _int(rng, 0, k_max)
    Q = _int(rng, 0, k * max(Z))
    return MsSubsetSumInstance(Z, Q, k)
