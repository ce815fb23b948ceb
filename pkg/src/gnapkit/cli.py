"""Command line: ``gnapkit {solve,reduce,generate,crosscheck}``.

Exit codes: 0 yes/success, 1 no, 2 input or precondition error, 3 crosscheck
disagreement. Witnesses are printed as 0-based project (or item) indices.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import crosscheck as xc
from . import gnap, ilpfeas, mckp, naptwo, reductions
from .core import DEFAULT_WORK_CAP, GnapInstance, PreconditionError, WorkCapExceeded, validate
from .generate import GenConfig, MckpConfig, random_gnap, random_mckp, random_psum
from .mckp import MckpInstance
from .penaltysum import PenaltySumInstance, psum_bruteforce, validate_psum
from .textformat import FormatError, format_rational, parse_instance, render_instance


@dataclass
class RunConfig:
    command: str
    input: str = "-"
    solver: str = "auto"
    seed: int = 0
    cap_work: int = DEFAULT_WORK_CAP
    verbose: bool = False
    reduction: str = ""
    t: int | None = None
    kind: str = "gnap"
    gen: GenConfig = field(default_factory=GenConfig)
    families: tuple[str, ...] = xc.FAMILIES
    count: int = 100
    start: int = 0
    jobs: int = 1
    mutant: bool = False
    mss: tuple = ()


class CliError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _two(f):
    return lambda inst, cap: f(naptwo.normalize_two_project(inst))


GNAP_SOLVERS = {
    "auto": gnap.gnap_auto,
    "gnap_bruteforce": gnap.gnap_bruteforce,
    "gnap_enumerate_budget": gnap.gnap_enumerate_budget,
    "gnap_dp_counts": gnap.gnap_dp_counts,
    "gnap_dp_budget_counts": gnap.gnap_dp_budget_counts,
    "gnap_height1": lambda inst, cap: gnap.gnap_height1(inst),
    "gnap_height1_ilpf": lambda inst, cap: ilpfeas.gnap_height1_ilpf(inst, work_cap=cap),
    "two_project_subsets": lambda inst, cap: naptwo.two_project_subsets(naptwo.normalize_two_project(inst), cap),
    "nap01_dp_budget": _two(naptwo.nap01_dp_budget),
    "nap01_dp_diversity": _two(naptwo.nap01_dp_diversity),
    "unitc_greedy_ultrametric2": _two(naptwo.unitc_greedy_ultrametric2),
}
MCKP_SOLVERS = {
    "auto": lambda inst, cap: mckp.mckp_auto(inst),
    **{name: (lambda inst, cap, f=f: f(inst)) for name, f in mckp.SOLVERS.items()},
    "mckp_xp_classes": mckp.mckp_xp_classes,
    "mckp_ilpf": lambda inst, cap: ilpfeas.mckp_ilpf(inst, work_cap=cap),
}
PSUM_SOLVERS = {"auto": psum_bruteforce, "psum_bruteforce": psum_bruteforce}


def cmd_solve(cfg: RunConfig, out, err) -> int:
    inst = parse_instance(_read(cfg.input))
    if isinstance(inst, GnapInstance):
        problems, table = validate(inst), GNAP_SOLVERS
    elif isinstance(inst, MckpInstance):
        problems = [f"class {i} is empty" for i, cl in enumerate(inst.classes) if not cl]
        table = MCKP_SOLVERS
    else:
        problems, table = validate_psum(inst), PSUM_SOLVERS
    if problems:
        raise CliError("invalid instance: " + "; ".join(problems))
    if cfg.solver not in table:
        raise CliError(f"unknown solver {cfg.solver!r} for this instance; choose from {', '.join(table)}")
    d = table[cfg.solver](inst, cfg.cap_work)
    print("yes" if d else "no", file=out)
    if d:
        print("witness " + " ".join(map(str, d.witness)), file=out)
        if isinstance(inst, GnapInstance):
            print(f"pd {format_rational(d.value)}", file=out)
            print(f"cost {d.cost}", file=out)
        elif isinstance(inst, MckpInstance):
            print(f"value {d.value}", file=out)
            print(f"cost {d.cost}", file=out)
        else:
            print(f"objective {format_rational(d.value)}", file=out)
    if cfg.verbose:
        print(f"solver {d.solver}", file=err)
        for k, v in d.notes.items():
            print(f"note {k} {v}", file=err)
    return 0 if d else 1


def _as_knapsack(inst) -> reductions.KnapsackInstance:
    if not isinstance(inst, MckpInstance):
        raise PreconditionError("expected an mckp file whose classes are {0:0 c:d}")
    items = []
    for i, cl in enumerate(inst.classes):
        if len(cl) != 2 or cl[0] != (0, 0):
            raise PreconditionError(f"class {i} is not of the form 0:0 c:d")
        items.append(cl[1])
    return reductions.KnapsackInstance(tuple(items), inst.budget, inst.target)


SOURCE_KIND = {
    "kp_to_nap01": "kp", "kp_to_nap01_variant": "kp", "mckp_to_gnap_star": MckpInstance,
    "gnap_star_to_caterpillar": GnapInstance, "gnap_height1_to_mckp": GnapInstance,
    "ps_to_unitc": PenaltySumInstance, "unitc_to_ps": GnapInstance, "unitc_to_ultrametric3": GnapInstance,
    "mssubsum_to_mckp": "mss",
}


def cmd_reduce(cfg: RunConfig, out, err) -> int:
    name = cfg.reduction
    if name not in reductions.REDUCTIONS:
        raise CliError(f"unknown reduction {name!r}; choose from {', '.join(reductions.REDUCTIONS)}")
    kind = SOURCE_KIND[name]
    if kind == "mss":
        if not cfg.mss:
            raise CliError("mssubsum_to_mckp reads --Z, --Q and --k instead of a file")
        source = reductions.MsSubsetSumInstance(*cfg.mss)
    else:
        source = parse_instance(_read(cfg.input))
        if kind == "kp":
            source = _as_knapsack(source)
        elif not isinstance(source, kind):
            raise CliError(f"{name} expects a {kind.__name__} input")
        if isinstance(source, GnapInstance) and (problems := validate(source)):
            raise CliError("invalid instance: " + "; ".join(problems))
    if name in ("ps_to_unitc", "unitc_to_ultrametric3") and cfg.t is not None:
        record = reductions.REDUCTIONS[name](source, t=cfg.t)
    else:
        record = reductions.REDUCTIONS[name](source)
    header = [f"reduced by {record.name}: {record.provenance}"]
    header += [f"{k} = {v}" for k, v in record.params.items()]
    out.write(render_instance(record.target, tuple(header)))
    return 0


def cmd_generate(cfg: RunConfig, out, err) -> int:
    if cfg.kind == "gnap":
        try:
            cfg.gen.check()
        except ValueError as exc:
            raise CliError(f"inconsistent knobs: {exc}") from None
        inst = random_gnap(cfg.seed, cfg.gen)
    elif cfg.kind == "mckp":
        inst = random_mckp(cfg.seed, MckpConfig())
    else:
        inst = random_psum(cfg.seed)
    out.write(render_instance(inst))
    return 0


def cmd_crosscheck(cfg: RunConfig, out, err) -> int:
    unknown = [f for f in cfg.families if f not in xc.FAMILIES]
    if unknown:
        raise CliError(f"unknown families {unknown}; choose from {', '.join(xc.FAMILIES)}")
    results = xc.crosscheck(cfg.families, cfg.count, cfg.seed, cfg.jobs, cfg.mutant, cfg.start)
    failed = False
    for family in cfg.families:
        rows = [r for r in results if r.family == family]
        bad = sum(bool(r.disagreements) for r in rows)
        print(f"{family}: {len(rows)} instances, {sum(r.checks for r in rows)} checks, "
              f"{bad} disagreements, {sum(len(r.findings) for r in rows)} findings, "
              f"{sum(len(r.skipped) for r in rows)} skipped", file=out)
    for r in results:
        for kind, items in (("DISAGREEMENT", r.disagreements), ("FINDING", r.findings)):
            for msg in items:
                failed |= kind == "DISAGREEMENT"
                print(f"{kind} family={r.family} index={r.index} instance-seed={r.seed}: {msg}", file=out)
                print(f"  replay: gnapkit crosscheck --families {r.family} --seed {cfg.seed} "
                      f"--start {r.index} --count 1", file=out)
                if r.instance:
                    for line in r.instance.splitlines():
                        print(f"  | {line}", file=out)
        if cfg.verbose:
            for msg in r.skipped:
                print(f"skipped family={r.family} index={r.index}: {msg}", file=err)
    return 3 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gnapkit", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap-work", type=int, default=DEFAULT_WORK_CAP)
    common.add_argument("--verbose", action="store_true")
    common.add_argument("--format", choices=["text"], default="text")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="decide an instance")
    s.add_argument("input", nargs="?", default="-")
    s.add_argument("--solver", default="auto")

    r = sub.add_parser("reduce", parents=[common], help="apply a reduction")
    r.add_argument("reduction", choices=sorted(reductions.REDUCTIONS))
    r.add_argument("input", nargs="?", default="-")
    r.add_argument("--t", type=int, default=None, help="scaling exponent for ps_to_unitc / unitc_to_ultrametric3")
    r.add_argument("--Z", type=lambda s: tuple(int(x) for x in s.split(",")), default=None)
    r.add_argument("--Q", type=int, default=None)
    r.add_argument("--k", type=int, default=None)

    g = sub.add_parser("generate", parents=[common], help="emit a random instance")
    g.add_argument("--kind", choices=["gnap", "mckp", "psum"], default="gnap")
    g.add_argument("--taxa", type=int, default=4)
    g.add_argument("--height", type=int, default=2)
    g.add_argument("--max-len", type=int, default=3)
    g.add_argument("--max-cost", type=int, default=4)
    g.add_argument("--max-lambda", type=int, default=8)
    g.add_argument("--denom", type=int, default=4)
    g.add_argument("--max-budget", type=int, default=6)
    g.add_argument("--ultrametric", action="store_true")
    g.add_argument("--unit-cost", action="store_true")
    g.add_argument("--nap01", action="store_true")

    c = sub.add_parser("crosscheck", parents=[common], help="randomized solver/reduction agreement")
    c.add_argument("--families", type=lambda s: tuple(s.split(",")), default=xc.FAMILIES)
    c.add_argument("--count", type=int, default=100)
    c.add_argument("--start", type=int, default=0)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--mutant", action="store_true", help=argparse.SUPPRESS)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(ns.command, seed=ns.seed, cap_work=ns.cap_work, verbose=ns.verbose)
    if ns.command == "solve":
        cfg.input, cfg.solver = ns.input, ns.solver
    elif ns.command == "reduce":
        cfg.input, cfg.reduction, cfg.t = ns.input, ns.reduction, ns.t
        if ns.reduction == "mssubsum_to_mckp" and None not in (ns.Z, ns.Q, ns.k):
            cfg.mss = (ns.Z, ns.Q, ns.k)
    elif ns.command == "generate":
        cfg.kind = ns.kind
        cfg.gen = GenConfig(taxa=ns.taxa, height=ns.height, max_len=ns.max_len, max_cost=ns.max_cost,
                            max_lambda=ns.max_lambda, denom=ns.denom, max_budget=ns.max_budget,
                            ultrametric=ns.ultrametric, unit_cost=ns.unit_cost, nap01=ns.nap01,
                            exact_taxa=True)
    else:
        cfg.families, cfg.count, cfg.start = ns.families, ns.count, ns.start
        cfg.jobs, cfg.mutant = ns.jobs, ns.mutant
    return cfg


COMMANDS = {"solve": cmd_solve, "reduce": cmd_reduce, "generate": cmd_generate, "crosscheck": cmd_crosscheck}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = config_from_args(ns)
    try:
        return COMMANDS[cfg.command](cfg, out, err)
    except FormatError as exc:
        print(f"error: {exc}", file=err)
    except PreconditionError as exc:
        print(f"error: precondition violated: {exc}", file=err)
    except WorkCapExceeded as exc:
        print(f"error: work cap exceeded: {exc}", file=err)
    except CliError as exc:
        print(f"error: {exc}", file=err)
    return 2


if __name__ == "__main__":
    sys.exit(main())
