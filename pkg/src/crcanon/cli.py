"""Command-line entry point; every graph input and output uses the edge-list format."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .canon import canon
from .decompose import kernel, two_core
from .errors import CrCanonError
from .experiment import load_config, run_experiment
from .graph import Graph, read_edgelist, write_edgelist
from .identify import graph_identifiable
from .models import ContiguousParams, gnp, sample_contiguous
from .refine import cr_stable
from .symmetry import detect_symmetries, tree_types


def _read(path: str | None) -> Graph:
    if path in (None, "-"):
        return read_edgelist(sys.stdin)
    with open(path) as fh:
        return read_edgelist(fh)


def _cmd_cr(args) -> int:
    c = cr_stable(_read(args.input))
    hist = c.size_histogram()
    print("# class sizes: " + " ".join(f"{size}x{count}" for size, count in sorted(hist.items())))
    for v, cls in enumerate(c.class_of):
        print(v, cls)
    return 0


def _cmd_core(args) -> int:
    write_edgelist(two_core(_read(args.input)).core, sys.stdout)
    return 0


def _cmd_kernel(args) -> int:
    k = kernel(two_core(_read(args.input)).core)
    print(k.n, len(k.edges))
    for e in k.edges:
        print(e.u, e.v, e.length)
    return 0


def _cmd_identifiable(args) -> int:
    print(json.dumps(graph_identifiable(_read(args.input)).as_dict()))
    return 0


def _cmd_symmetries(args) -> int:
    g = _read(args.input)
    dec = two_core(g)
    types = None if args.bare else tree_types(dec)
    report = detect_symmetries(dec.core, types)
    out = report.as_dict()
    # core-local ids back to input ids
    back = dec.core_vertices

    def remap(x):
        if isinstance(x, list):
            return [remap(y) for y in x]
        return back[x]

    for fam in ("a1", "a2", "a3"):
        for item in out[fam]:
            for key in ("anchor", "cycle", "pairs", "s", "t", "path1", "path2", "x", "y"):
                if key in item:
                    item[key] = remap(item[key])
    out["interchangeable_pairs"] = remap(out["interchangeable_pairs"])
    out["duplex_classes"] = remap(out["duplex_classes"])
    print(json.dumps(out))
    return 0


def _cmd_canon(args) -> int:
    g = _read(args.input)
    form = canon(g, fallback_bound=args.fallback_bound,
                 complement="auto" if args.complement else "never")
    print(f"# status {form.status} route {form.route}", file=sys.stderr)
    if args.emit == "cert":
        print(form.certificate)
    elif args.emit == "edges":
        print(g.n, g.m)
        for u, v in form.canonical_edges:
            print(u, v)
    else:
        for v, lab in enumerate(form.labeling):
            print(v, lab)
    return 0 if form.status != "not_canonizable" else 3


def _cmd_sample(args) -> int:
    if args.model == "gnp":
        if args.p is None and args.lam is None:
            raise SystemExit("gnp needs --p or --lambda")
        p = args.p if args.p is not None else min(1.0, args.lam / args.n)
        g = gnp(args.n, p, args.seed)
    else:
        if args.lam is None:
            raise SystemExit("contiguous needs --lambda")
        g = sample_contiguous(ContiguousParams(args.n, args.lam, args.near_critical), args.seed).graph
    write_edgelist(g, sys.stdout)
    return 0


def _cmd_experiment(args) -> int:
    result = run_experiment(load_config(args.config), args.out, args.workers)
    for run in result["runs"]:
        print(run["name"], json.dumps(run["summary"]))
    for th in result["thresholds"]:
        print(("PASS" if th["ok"] else "FAIL"), th["run"], th["metric"], th["op"], th["value"],
              "actual", th["actual"])
    return 0 if result["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crcanon", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def with_input(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", "-i", default=None, help="edge-list file (default stdin)")
        return p

    with_input("cr", "stable coloring: class-size histogram and class per vertex").set_defaults(fn=_cmd_cr)
    with_input("core", "edge list of the 2-core").set_defaults(fn=_cmd_core)
    with_input("kernel", "kernel multigraph as 'u v length' lines").set_defaults(fn=_cmd_kernel)
    with_input("identifiable", "CR-identifiability verdict as JSON").set_defaults(fn=_cmd_identifiable)
    p = with_input("symmetries", "A1/A2/A3 report of the core as JSON")
    p.add_argument("--bare", action="store_true", help="ignore attached trees")
    p.set_defaults(fn=_cmd_symmetries)
    p = with_input("canon", "canonical labeling")
    p.add_argument("--complement", action="store_true",
                   help="canonize dense inputs through the complement and retry unresolved ones on it")
    p.add_argument("--fallback-bound", type=int, default=64)
    p.add_argument("--emit", choices=("labeling", "edges", "cert"), default="labeling")
    p.set_defaults(fn=_cmd_canon)

    p = sub.add_parser("sample", help="sample a random graph")
    p.add_argument("--model", choices=("gnp", "contiguous"), default="gnp")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--near-critical", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_sample)

    p = sub.add_parser("experiment", help="run a trial configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=".", help="directory for stats.json and stats.csv")
    p.add_argument("--workers", type=int, default=1, help="worker processes for trials")
    p.set_defaults(fn=_cmd_experiment)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CrCanonError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
