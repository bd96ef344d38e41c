"""Command-line front end.

Exit status: 0 success, 1 a reproduced claim did not hold, 2 usage or
input error (including exhausted budgets). Output is JSON unless ``--dot``
or ``--text`` is given.

Budgets come from the environment: ``WLHIER_KFWL_BUDGET`` (k-FWL tuple
slots), ``WLHIER_RUN_CAP`` (marking runs), ``WLHIER_SIZE_LIMIT``
(certificate size), read when the package is imported.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from wlhier.analysis import CountQuery, Pattern, can_count, distinguish, distinguish_graph_level, incident_count
from wlhier.canonical import SizeLimitExceeded
from wlhier.constructions import (
    Family,
    InvalidParam,
    PairSpec,
    connected_graphs,
    gen_base_3regular,
    gen_pair,
    gen_rook44,
    gen_shrikhande,
    random_graphs,
)
from wlhier.extensions import CombinatorialBudgetExceeded, ExtensionSpec, SpecViolation
from wlhier.graph import Graph, GraphError, RootedGraph, graphs_from_text, graphs_to_text
from wlhier.refinement import BudgetExceeded
from wlhier.theorems import report_ok, run_many, theorem_ids

SINGLE = {
    "rook44": gen_rook44,
    "shrikhande": gen_shrikhande,
}

SPEC_HELP = (
    "extension spec KIND:k:d=D[:mode]; KIND in WL1, KFWL, S, N, M, R "
    "(R = M with node removal); d defaults to 2 (stable for KFWL); "
    "examples: N:1:d=2, S:4:d=2, M:2:d=2:remove, KFWL:2, WL1:d=stable"
)


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _graph_json(g: Graph, root: int | None = None) -> dict:
    out = {"nodes": g.node_count, "edges": [list(e) for e in g.sorted_edges()]}
    if any(g.node_colors):
        out["colors"] = list(g.node_colors)
    if root is not None:
        out["root"] = root
    return out


def _family_params(args) -> dict:
    keys = ("l", "k", "n0", "l1", "l2")
    p = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    if getattr(args, "apex", False):
        p["apex"] = True
    return p


def _add_family_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--l", type=int, help="cycle length for cll (default 5)")
    p.add_argument("--k", type=int, help="k for the cycle and swl pairs")
    p.add_argument("--n0", type=int, help="base size for cfi (multiple of 4, default 8)")
    p.add_argument("--l1", type=int, help="copy pair cycle length 1 (default 6)")
    p.add_argument("--l2", type=int, help="copy pair cycle length 2 (default 7)")
    p.add_argument("--apex", action="store_true", help="cfi: add an apex root")


def _pair(name: str, params: dict) -> tuple[RootedGraph, RootedGraph]:
    try:
        fam = Family(name)
    except ValueError:
        raise UsageError(f"unknown pair family {name!r}; choose from {', '.join(f.value for f in Family)}")
    return gen_pair(PairSpec(fam, params))


def _parse_kv(text: str) -> tuple[str, dict]:
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"expected key=value in {text!r}")
        params[key.strip()] = int(val) if val.strip().lstrip("-").isdigit() else val.strip()
    return name.strip(), params


def _corpus_item(text: str) -> list[Graph]:
    name, params = _parse_kv(text)
    if name == "connected":
        return connected_graphs(int(params.get("max_n", 5)), int(params.get("min_n", 1)))
    if name == "random":
        return random_graphs(int(params.get("count", 20)), int(params.get("n", 12)), int(params.get("seed", 0)))
    if name in SINGLE:
        return [SINGLE[name]()]
    a, b = _pair(name, params)
    return [a.graph, b.graph]


# ---------------------------------------------------------------------------
# verbs

def cmd_gen(args) -> int:
    params = _family_params(args)
    if args.family in SINGLE:
        graphs = [(SINGLE[args.family](), None)]
    elif args.family == "base3":
        graphs = [(gen_base_3regular(params.get("n0", 8)), None)]
    else:
        a, b = _pair(args.family, params)
        graphs = [(a.graph, a.root), (b.graph, b.root)]
        if args.which in ("1", "2"):
            graphs = [graphs[int(args.which) - 1]]
    if args.dot:
        print("\n".join(g.to_dot(f"G{i + 1}", root) for i, (g, root) in enumerate(graphs)), end="")
    elif args.text:
        print(graphs_to_text([g for g, _ in graphs]), end="")
    else:
        print(_dump({"family": args.family, "params": params, "graphs": [_graph_json(g, r) for g, r in graphs]}))
    return 0


def _read_graph_file(path: str) -> list[Graph]:
    try:
        with open(path) as fh:
            return graphs_from_text(fh.read())
    except OSError as exc:
        raise UsageError(str(exc))


def cmd_distinguish(args) -> int:
    spec = ExtensionSpec.parse(args.spec)
    if args.mode:
        spec = spec.with_mode(args.mode)
    if args.pair:
        a, b = _pair(args.pair, _family_params(args))
    elif args.g1 and args.g2:
        g1, g2 = _read_graph_file(args.g1)[0], _read_graph_file(args.g2)[0]
        a, b = RootedGraph(g1, args.root1), RootedGraph(g2, args.root2)
    else:
        raise UsageError("give --pair FAMILY or both --g1 FILE and --g2 FILE")
    if args.graph_level:
        rep = distinguish_graph_level(spec, a.graph, b.graph)
    else:
        rep = distinguish(spec, a, b)
    print(_dump(rep.to_dict()))
    return 0


def cmd_count(args) -> int:
    q = CountQuery(Pattern(args.pattern.upper()), args.size)
    graphs = _corpus_item(args.graph) if not args.file else _read_graph_file(args.file)
    out = []
    for gi, g in enumerate(graphs):
        nodes = [args.node] if args.node is not None else range(g.node_count)
        out.append({"graph": gi, "counts": {str(v): incident_count(g, v, q) for v in nodes}})
    print(_dump({"query": str(q), "results": out}))
    return 0


def cmd_can_count(args) -> int:
    spec = ExtensionSpec.parse(args.spec)
    corpus: list[Graph] = []
    for item in args.corpus or []:
        corpus += _corpus_item(item)
    for path in args.file or []:
        corpus += _read_graph_file(path)
    if not corpus:
        raise UsageError("empty corpus; use --corpus or --file")
    q = CountQuery(Pattern(args.pattern.upper()), args.size)
    res = can_count(spec, corpus, q)
    print(_dump({"spec": str(spec), "query": str(q), "graphs": len(corpus), **res.to_dict()}))
    return 0


def cmd_reproduce(args) -> int:
    if args.all:
        ids = theorem_ids()
    elif args.theorem:
        ids = [t.lower() for t in args.theorem]
        unknown = [t for t in ids if t not in theorem_ids()]
        if unknown:
            raise UsageError(f"unknown theorem(s) {unknown}; known: {', '.join(theorem_ids())}")
    else:
        raise UsageError("give --theorem ID (repeatable) or --all")
    params = {k: v for k, v in (("l", args.l), ("k", args.k), ("d", args.d), ("n0", args.n0), ("max_n", args.max_n)) if v is not None}
    reports = run_many(ids, params, small=args.small, timing=args.timing, jobs=args.jobs)
    print(_dump(reports[0] if len(reports) == 1 and not args.all else reports))
    failed = [r["theorem"] for r in reports if not report_ok(r)]
    if failed:
        print(f"claim failures in: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def cmd_corpus(args) -> int:
    if args.kind == "connected":
        graphs = connected_graphs(args.max_n, args.min_n)
        meta = {"kind": "connected", "max_n": args.max_n, "min_n": args.min_n}
    else:
        graphs = random_graphs(args.count, args.max_n, args.seed, args.min_n)
        meta = {"kind": "random", "count": args.count, "max_n": args.max_n, "min_n": args.min_n, "seed": args.seed}
    if args.text:
        print(graphs_to_text(graphs), end="")
    else:
        print(_dump({**meta, "graphs": [_graph_json(g) for g in graphs]}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wlhier", description="Expressiveness hierarchies of GNN extensions")
    sub = ap.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("gen", help="generate a construction")
    g.add_argument("family", help="rook44, shrikhande, base3, or a pair family: " + ", ".join(f.value for f in Family))
    _add_family_params(g)
    g.add_argument("--which", choices=("1", "2", "both"), default="both", help="which graph of a pair")
    fmt = g.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    fmt.add_argument("--text", action="store_true", help="emit the plain edge-list format")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("distinguish", help="compare two rooted graphs under an extension")
    d.add_argument("--spec", required=True, help=SPEC_HELP)
    d.add_argument("--pair", help="pair family (" + ", ".join(f.value for f in Family) + ")")
    _add_family_params(d)
    d.add_argument("--mode", choices=("mark", "remove"), help="run mode for M specs")
    d.add_argument("--g1", help="first graph file (edge-list format)")
    d.add_argument("--g2", help="second graph file")
    d.add_argument("--root1", type=int, default=0)
    d.add_argument("--root2", type=int, default=0)
    d.add_argument("--graph-level", action="store_true", help="compare whole graphs instead of roots")
    d.set_defaults(func=cmd_distinguish)

    c = sub.add_parser("count", help="incident l-cliques / induced l-cycles per node (brute force)")
    c.add_argument("--graph", default="rook44", help="corpus item, e.g. rook44, cycle:k=2, connected:max_n=4")
    c.add_argument("--file", help="graph file instead of --graph")
    c.add_argument("--pattern", required=True, choices=("clique", "induced_cycle", "CLIQUE", "INDUCED_CYCLE"))
    c.add_argument("--size", type=int, required=True)
    c.add_argument("--node", type=int)
    c.set_defaults(func=cmd_count)

    cc = sub.add_parser("can-count", help="does the final color determine an incident count?")
    cc.add_argument("--spec", required=True, help=SPEC_HELP)
    cc.add_argument("--corpus", action="append", help="repeatable: pair family with params (cycle:k=1), rook44, connected:max_n=5, random:count=20,n=12,seed=0")
    cc.add_argument("--file", action="append", help="repeatable graph file(s)")
    cc.add_argument("--pattern", required=True, choices=("clique", "induced_cycle", "CLIQUE", "INDUCED_CYCLE"))
    cc.add_argument("--size", type=int, required=True)
    cc.set_defaults(func=cmd_can_count)

    r = sub.add_parser("reproduce", help="re-run theorem constructions and check the claimed verdicts")
    r.add_argument("--theorem", action="append", help="theorem id (repeatable): " + ", ".join(theorem_ids()))
    r.add_argument("--all", action="store_true", help="every theorem, ordered by id")
    r.add_argument("--small", action="store_true", help="smaller exhaustive corpora")
    r.add_argument("--jobs", type=int, default=1, help="worker processes")
    r.add_argument("--timing", action="store_true", help="fill runtime_ms (otherwise null, keeping output byte-stable)")
    r.add_argument("--l", type=int)
    r.add_argument("--k", type=int)
    r.add_argument("--d", type=int)
    r.add_argument("--n0", type=int)
    r.add_argument("--max-n", dest="max_n", type=int)
    r.set_defaults(func=cmd_reproduce)

    co = sub.add_parser("corpus", help="emit a test corpus")
    co.add_argument("--kind", choices=("connected", "random"), default="connected")
    co.add_argument("--max-n", dest="max_n", type=int, default=5)
    co.add_argument("--min-n", dest="min_n", type=int, default=1)
    co.add_argument("--count", type=int, default=20)
    co.add_argument("--seed", type=int, default=0)
    co.add_argument("--text", action="store_true")
    co.set_defaults(func=cmd_corpus)
    return ap


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (BudgetExceeded, CombinatorialBudgetExceeded, SizeLimitExceeded) as exc:
        print(f"wlhier {args.verb}: budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (UsageError, SpecViolation, InvalidParam, GraphError, ValueError, KeyError) as exc:
        print(f"wlhier {args.verb}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
