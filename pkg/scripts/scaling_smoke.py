"""Time the MCKP budget DP at a few budgets with the item set held fixed."""

import argparse
import statistics
import time

import numpy as np

from gnapkit.mckp import MckpInstance, mckp_dp_budget


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budgets", default="1024,2048,4096")
    ap.add_argument("--classes", type=int, default=40)
    ap.add_argument("--per-class", type=int, default=5)
    ap.add_argument("--max-cost", type=int, default=64)
    ap.add_argument("--runs", type=int, default=20)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    rng = np.random.Generator(np.random.PCG64(args.seed))
    classes = tuple(tuple((int(rng.integers(1, args.max_cost + 1)), int(rng.integers(0, 100)))
                          for _ in range(args.per_class)) for _ in range(args.classes))
    prev = None
    for b in (int(x) for x in args.budgets.split(",")):
        inst = MckpInstance(classes, b, 10 ** 6)
        times = []
        for _ in range(args.runs):
            start = time.perf_counter()
            mckp_dp_budget(inst)
            times.append(time.perf_counter() - start)
        med = statistics.median(times)
        note = "" if prev is None else f"  x{med / prev:.2f}"
        tight = "  (budget tightened)" if inst.max_cost * inst.m < b else ""
        print(f"B={b:6d}  |N|={inst.n_items}  median {med * 1e3:8.2f} ms{note}{tight}")
        prev = med


if __name__ == "__main__":
    main()
