"""Build the five-taxon unit-cost example and print its height-3 ultrametric image."""

import argparse
from fractions import Fraction

from gnapkit.core import GnapInstance, PhyloTree, is_ultrametric, project_list
from gnapkit.reductions import check_reduction, unitc_to_ultrametric3
from gnapkit.textformat import render_instance


def source(survival=Fraction(1, 2), budget=2, diversity=Fraction(0)) -> GnapInstance:
    weights = {"x1": 6, "x2": 6, "x3": 4, "x4": 2, "x5": 1}
    tree = PhyloTree.from_edges("r", [("r", "v", 1)] + [("v", x, w) for x, w in weights.items()])
    lists = tuple(project_list((0, 0), (1, survival)) for _ in weights)
    return GnapInstance(tree, lists, budget, diversity)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", type=int, default=3, help="scaling exponent (default 3)")
    ap.add_argument("--check", action="store_true", help="also compare oracle answers on both sides")
    args = ap.parse_args()
    rec = unitc_to_ultrametric3(source(), t=args.t)
    print(render_instance(rec.target), end="")
    ultra, depth = is_ultrametric(rec.target.tree)
    print(f"# ultrametric={ultra} depth={depth} height={rec.target.tree.height}")
    if args.check:
        print(f"# {check_reduction(rec)}")


if __name__ == "__main__":
    main()
