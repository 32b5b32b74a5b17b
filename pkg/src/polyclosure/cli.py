"""``polyclosure`` command line.

Exit codes: 0 = yes / success, 1 = no, 2 = error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from .bench import measure
from .clones import CloneSpec, parse_clone, resolve
from .core import DomainError, parse_family, parse_vector, render_family, render_vector
from .enumeration import enumerate_closure
from .formats import (
    dnf_to_family,
    hitting_set_family,
    parse_dnf,
    parse_hypergraph,
    parse_truth_tables,
    random_family,
    random_hypergraph,
)
from .oracle import DEFAULT_BUDGET, SaturationOverflow, saturate_stream

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(out, text: str) -> None:
    out.write(text + "\n")
    out.flush()


def _spec(args) -> CloneSpec:
    if getattr(args, "ops", None):
        ops = parse_truth_tables(_read(args.ops))
        if not ops:
            raise UsageError("operation file defines no operations")
        return CloneSpec.explicit(ops)
    if not args.clone:
        raise UsageError("give --clone or --ops")
    return parse_clone(args.clone)


def cmd_decide(args, out) -> int:
    spec = _spec(args)
    family = parse_family(_read(args.instance))
    vec = parse_vector(args.vector, family.d)
    if len(vec) != family.n:
        raise DomainError(f"vector has length {len(vec)}, instance has n={family.n}")
    verdict = resolve(spec, family).decide(vec)
    _emit(out, "yes" if verdict else "no")
    return EXIT_YES if verdict else EXIT_NO


def cmd_enum(args, out) -> int:
    spec = _spec(args)
    family = parse_family(_read(args.instance))
    problem = resolve(spec, family)
    if problem.algorithm == "ASSOC":
        print("warning: associative traversal keeps every emitted vector in memory", file=sys.stderr)
    stream = enumerate_closure(problem, fast=not args.generic)
    if args.count_only:
        _emit(out, str(sum(1 for _ in stream)))
    elif args.sorted:
        for v in sorted(stream):
            out.write(render_vector(v) + "\n")
        out.flush()
    else:
        for v in stream:
            _emit(out, render_vector(v))
    return EXIT_YES


def cmd_saturate(args, out) -> int:
    ops = parse_truth_tables(_read(args.ops))
    family = parse_family(_read(args.instance))
    print("warning: saturation has no polynomial delay guarantee and stores the whole closure",
          file=sys.stderr)
    try:
        for v in saturate_stream(ops, family, args.budget):
            _emit(out, render_vector(v))
    except SaturationOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_YES


def cmd_bench(args, out) -> int:
    spec = parse_clone(args.clone)
    for rep in range(args.repetitions):
        if args.instance:
            family = parse_family(_read(args.instance))
        else:
            m = args.m if args.m is not None else max(1, args.n // 2)
            family = random_family(args.n, m, args.seed + rep, args.density)
        report = measure(spec, family, args.limit)
        for line in report.lines():
            _emit(out, line)
        _emit(out, json.dumps(report.as_dict(), sort_keys=True))
    return EXIT_YES


def cmd_convert(args, out) -> int:
    try:
        clauses, n_vars = parse_dnf(_read(args.dnf))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.vars:
        if args.vars < n_vars:
            raise UsageError(f"--vars {args.vars} is smaller than the largest variable {n_vars}")
        n_vars = args.vars
    out.write(render_family(dnf_to_family(clauses, n_vars)))
    out.flush()
    return EXIT_YES


def cmd_gen(args, out) -> int:
    if args.kind == "random":
        if args.n < 1 or args.m < 0 or not 0.0 <= args.density <= 1.0:
            raise UsageError("need n >= 1, m >= 0 and density in [0, 1]")
        family = random_family(args.n, args.m, args.seed, args.density, args.domain)
    else:
        if args.hypergraph:
            edges = parse_hypergraph(_read(args.hypergraph))
            vertices = args.vertices or max((max(e) for e in edges if e), default=1)
        else:
            vertices = args.vertices or args.n
            edges = random_hypergraph(vertices, args.m, args.seed, args.density)
        family = hitting_set_family(edges, vertices)
        out.write("# 1 is in the S10^k closure iff the hypergraph has no hitting set of size k\n")
    out.write(render_family(family))
    out.flush()
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyclosure", description="Closure of vector sets under clones.")
    sub = parser.add_subparsers(dest="command", required=True)

    def clone_args(p, ops=True):
        p.add_argument("--clone", help='clone name, e.g. "E2 dual", "S10^3", "M2 +neg +0"')
        if ops:
            p.add_argument("--ops", help="truth-table file with explicit operations (replaces --clone)")
        p.add_argument("instance", nargs="?", help="instance file (default: standard input)")

    p = sub.add_parser("decide", help="membership of one vector")
    clone_args(p)
    p.add_argument("--vector", required=True)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("enum", help="stream the closure")
    clone_args(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--fast", action="store_true", help="specialised enumerator (default)")
    mode.add_argument("--generic", action="store_true", help="backtrack search with the decider")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--sorted", action="store_true")
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("saturate", help="fixpoint computation for arbitrary tables")
    p.add_argument("--ops", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("instance", nargs="?")
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("bench", help="work counters per emission")
    p.add_argument("--clone", required=True)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--limit", type=int, default=5000, help="stop after this many emissions")
    p.add_argument("--repetitions", type=int, default=1)
    p.add_argument("--instance")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("convert", help="monotone DNF to a union-closure instance")
    p.add_argument("dnf", nargs="?")
    p.add_argument("--vars", type=int, help="number of variables (default: largest index used)")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("gen", help="instance generators")
    p.add_argument("kind", choices=("random", "hittingset"))
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--domain", type=int, default=2)
    p.add_argument("--hypergraph", help="hypergraph file, one edge of 1-based vertices per line")
    p.add_argument("--vertices", type=int)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, *a, **k: print(f"warning: {msg}", file=sys.stderr)
            return args.func(args, out)
    except (UsageError, ValueError, OSError, SaturationOverflow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
