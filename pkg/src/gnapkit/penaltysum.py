"""Penalty-Sum: pick k tuples maximising sum(a) - Q * prod(b)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod
from typing import Sequence

from .core import DEFAULT_WORK_CAP, Decision, Rational, WorkCapExceeded, as_fraction


@dataclass(frozen=True)
class PenaltySumInstance:
    tuples: tuple[tuple[Fraction, Fraction], ...]
    k: int
    Q: Fraction
    D: Fraction
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tuples", tuple((as_fraction(a), as_fraction(b)) for a, b in self.tuples))
        object.__setattr__(self, "Q", as_fraction(self.Q))
        object.__setattr__(self, "D", as_fraction(self.D))

    @property
    def n(self) -> int:
        return len(self.tuples)

    def objective(self, subset: Sequence[int]) -> Fraction:
        # empty product is 1
        return (sum((self.tuples[i][0] for i in subset), Fraction(0))
                - self.Q * prod((self.tuples[i][1] for i in subset), start=Fraction(1)))

    def is_solution(self, subset: Sequence[int] | None) -> bool:
        if subset is None or len(set(subset)) != len(subset) or len(subset) != self.k:
            return False
        if any(not 0 <= i < self.n for i in subset):
            return False
        return self.objective(subset) >= self.D


def validate_psum(inst: PenaltySumInstance) -> list[str]:
    problems = []
    for i, (a, b) in enumerate(inst.tuples):
        if a < 0:
            problems.append(f"tuple {i}: a = {a} is negative")
        if not 0 < b < 1:
            problems.append(f"tuple {i}: b = {b} outside (0,1)")
    if inst.k < 0:
        problems.append(f"negative k = {inst.k}")
    if inst.strict:
        if inst.Q.denominator != 1:
            problems.append(f"Q = {inst.Q} is not an integer")
        if inst.D <= 0:
            problems.append(f"D = {inst.D} is not positive")
    return problems


def psum_bruteforce(inst: PenaltySumInstance, work_cap: int = DEFAULT_WORK_CAP) -> Decision:
    """Enumerate every k-subset and keep the best objective."""
    name = "psum_bruteforce"
    if inst.k > inst.n or inst.k < 0:
        return Decision(False, solver=name)
    if comb(inst.n, inst.k) > work_cap:
        raise WorkCapExceeded(f"C({inst.n},{inst.k}) subsets > cap {work_cap}")
    best, best_value = None, None
    for subset in itertools.combinations(range(inst.n), inst.k):
        val = inst.objective(subset)
        if best_value is None or val > best_value:
            best, best_value = subset, val
    if best_value >= inst.D:
        return Decision(True, best, inst.k, best_value, name)
    return Decision(False, value=best_value, solver=name)


def psum_instance(tuples, k: int, Q: Rational, D: Rational, strict: bool = False) -> PenaltySumInstance:
    return PenaltySumInstance(tuple(tuples), k, as_fraction(Q), as_fraction(D), strict)
