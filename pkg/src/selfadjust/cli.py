"""Command line entry point: ``python -m selfadjust``."""

from __future__ import annotations

import argparse
import sys

from .harness.counterexamples import FAMILIES, gen_counterexample
from .harness.experiments import experiment_pathbalance_scaling, run_greedy, sequential_cost
from .harness.report import dumps, emit, to_csv, to_json
from .harness.runner import AuditFailure, run
from .harness.workloads import KINDS, Workload
from .transformers import TRANSFORMERS


def _workload(args) -> Workload:
    return Workload(args.workload, args.n, args.m, args.alpha, args.seed)


def cmd_run(args) -> int:
    try:
        rep = run(args.algo, _workload(args), args.weights, args.audit, initial=args.initial)
    except AuditFailure as e:
        print(f"audit failure ({e.audit}): {e.record}", file=sys.stderr)
        return 2
    if args.out:
        emit(rep, args.format, args.out)
    else:
        sys.stdout.write(to_csv(rep) if args.format == "csv" else to_json(rep) + "\n")
    for err in rep.errors:
        print("precondition:", err, file=sys.stderr)
    return 0


def cmd_scaling(args) -> int:
    ns = [1 << k for k in range(args.nmin.bit_length() - 1, args.nmax.bit_length())]
    res = experiment_pathbalance_scaling(ns, seed=args.seed)
    print(dumps(res.to_dict()))
    return 0


def cmd_sequential(args) -> int:
    cost = sequential_cost(args.algo, args.n)
    n = args.n
    print(dumps({"algorithm": args.algo, "n": n, "total_cost": cost, "per_key": cost / n}))
    return 0


def cmd_counterexample(args) -> int:
    path, after, rep = gen_counterexample(args.family, args.n)
    out = rep.to_dict()
    if args.show:
        out["path"] = list(path.keys)
        out["after"] = after.sketch()
    print(dumps(out))
    return 0 if rep.ok else 1


def cmd_greedy(args) -> int:
    g = run_greedy(Workload(args.workload, args.n, args.m, args.alpha, args.seed), args.weights, not args.no_audit)
    d = g.to_dict()
    if not args.costs:
        d.pop("costs")
    print(dumps(d))
    return 0


def _add_workload_args(p: argparse.ArgumentParser, default: str = "uniform") -> None:
    p.add_argument("--workload", choices=KINDS, default=default)
    p.add_argument("--n", type=int, default=511)
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=1.0, help="zipf exponent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", choices=("uniform", "random"), default="uniform")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="selfadjust", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", help="audited run of one algorithm on one workload")
    p.add_argument("--algo", choices=sorted(TRANSFORMERS), required=True)
    _add_workload_args(p)
    p.add_argument("--audit", default="all", help="all, none or a comma list of lemma1,lemma2,zigzag,theorem,halving")
    p.add_argument("--initial", choices=("random", "left-path", "balanced"), default=None)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("experiment", help="canned experiments")
    esub = p.add_subparsers(dest="experiment", required=True)
    e = esub.add_parser("pathbalance-scaling")
    e.add_argument("--nmin", type=int, default=1 << 10)
    e.add_argument("--nmax", type=int, default=1 << 14)
    e.add_argument("--seed", type=int, default=0)
    e.set_defaults(func=cmd_scaling)
    e = esub.add_parser("sequential")
    e.add_argument("--algo", choices=sorted(TRANSFORMERS) + ["greedy"], required=True)
    e.add_argument("--n", type=int, default=1024)
    e.set_defaults(func=cmd_sequential)

    p = sub.add_parser("counterexample", help="block constructions with property reports")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--show", action="store_true", help="include the path and after-tree")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("geometry", help="geometric view")
    gsub = p.add_subparsers(dest="geometry", required=True)
    g = gsub.add_parser("greedy")
    _add_workload_args(g, default="sequential")
    g.add_argument("--no-audit", action="store_true")
    g.add_argument("--costs", action="store_true", help="list per-access costs")
    g.set_defaults(func=cmd_greedy)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
