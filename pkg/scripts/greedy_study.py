"""Compare the height-2 unit-cost greedy with the subset oracle on random instances.

Counterexamples are written as JSON findings and re-verified from their text.
"""

import argparse
import json
from dataclasses import asdict

from gnapkit.crosscheck import GREEDY_CFG, greedy_finding, instance_seed, verify_finding
from gnapkit.generate import GenConfig, random_gnap


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--taxa", type=int, default=6)
    ap.add_argument("--denom", type=int, default=GREEDY_CFG.denom)
    ap.add_argument("--out", default="greedy_findings.json")
    args = ap.parse_args()
    findings = []
    for i in range(args.count):
        s = instance_seed(args.seed, "greedy", i)
        cfg = GenConfig(**{**asdict(GREEDY_CFG), "height": 1 + s % 2, "taxa": args.taxa, "denom": args.denom})
        f = greedy_finding(random_gnap(s, cfg))
        if f is not None:
            findings.append(f)
    print(f"{args.count} instances, {len(findings)} counterexamples")
    if findings:
        with open(args.out, "w") as fh:
            json.dump(findings, fh, indent=2)
        print(f"written to {args.out}; verified={all(verify_finding(f) for f in findings)}")


if __name__ == "__main__":
    main()
