"""Command-line front end.

Exit codes: 0 success, 1 a check or hypothesis failed, 2 usage or input
error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from . import bounds, counting, covering, degree_search, verify
from .field import field_of_order, make_field, prime_power
from .graphs import GraphFormatError, parse_edge_list, parse_graph6, read_graph, tree_from_edges, spanning_forest
from .labelings import format_perm, parse_labeling, parse_perm, perm_set

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- output ---------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit(records: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    records = [_jsonable(r) for r in records]
    if fmt == "json":
        for r in records:
            out.write(json.dumps(r, sort_keys=True) + "\n")
    elif fmt == "csv":
        keys = sorted({k for r in records for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
        out.write(buf.getvalue())
    else:
        for r in records:
            width = max((len(k) for k in r), default=0)
            for k in sorted(r):
                v = r[k]
                out.write(f"{k.ljust(width)}  {json.dumps(v) if isinstance(v, (dict, list)) else v}\n")
            out.write("\n")


# -- argument helpers -----------------------------------------------------------------

def _graph(args, required: bool = True):
    sources = [s for s in (args.graph, args.g6, args.edges) if s is not None]
    if len(sources) > 1:
        raise UsageError("give exactly one of --graph, --g6, --edges")
    if not sources:
        if required:
            raise UsageError("a graph is required (--graph FILE, --g6 STRING or --edges STRING)")
        return None
    if args.graph is not None:
        with open(args.graph) as fh:
            return read_graph(fh.read())
    if args.g6 is not None:
        return parse_graph6(args.g6)
    return parse_edge_list(args.edges.replace(";", "\n"))


def _tree_edges(text: str | None):
    if not text:
        return None
    pairs = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        u, v = tok.replace(":", "-").split("-")
        pairs.append((int(u), int(v)))
    return pairs


def _need(args, name: str):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return v


def _add_graph_args(p):
    p.add_argument("--graph", help="file with a graph6 string or an edge list")
    p.add_argument("--g6", help="graph6 string")
    p.add_argument("--edges", help="edge list, pairs separated by ';' e.g. '0 1;1 2'")


def _add_common(p):
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int, default=counting.DEFAULT_BUDGET,
                   help="step limit (labelings x colorings); 0 disables it")


# -- subcommands ------------------------------------------------------------------------

def cmd_count(args) -> int:
    g = _graph(args)
    k = _need(args, "k")
    dedup = args.dedup == "on"
    if args.labeling:
        text = open(args.labeling).read() if not (":" in args.labeling) else args.labeling.replace(";", "\n")
        L = parse_labeling(text, g)
        emit([{"mode": "labeling", "k": L.k, "value": counting.count_colorings(L)}], args.format)
        return EXIT_OK
    if args.mode == "classical":
        rec = {"mode": "classical", "k": k, "value": counting.chromatic_value(g, k),
               "deletion_contraction": counting.chromatic_by_deletion_contraction(g, k)}
        emit([rec], args.format)
        return EXIT_OK
    if args.mode == "signed":
        rep = counting.signed_color_function(g, k)
    else:
        rep = counting.minimize_over_labelings(
            g, args.mode, k, dedup=dedup, budget=args.budget, jobs=args.jobs,
            tree_edges=_tree_edges(args.tree_edges), mode=args.mode,
        )
    emit([rep.to_dict()], args.format)
    return EXIT_BUDGET if rep.partial else EXIT_OK


def cmd_colorable(args) -> int:
    g = _graph(args)
    k = _need(args, "k")
    if args.mode == "signed":
        ok = counting.signed_colorable(g, k)
    elif args.mode == "classical":
        ok = counting.chromatic_value(g, k) > 0
    else:
        ok = counting.s_colorable(g, args.mode, k, dedup=args.dedup == "on", budget=args.budget, jobs=args.jobs)
    emit([{"mode": args.mode, "k": k, "colorable": ok}], args.format)
    return EXIT_OK


def cmd_bound(args) -> int:
    g = _graph(args, required=False)
    th = args.theorem
    n, m, k = args.n, args.m, args.k
    if g is None and th != "af-weak" and (n is None or m is None):
        raise UsageError("give --n and --m, or a graph")
    kw = {"graph": g} if g is not None else {}
    if th == "main-ii":
        b = bounds.bound_main_ii(n, m, _need(args, "k"), budget=args.budget, **kw)
    elif th == "main-i":
        tree = None
        if g is not None and args.tree_edges:
            tree = tree_from_edges(g, _tree_edges(args.tree_edges))
        b = bounds.bound_main_i(n, m, _need(args, "k"), tree=tree, budget=args.budget, **kw)
    elif th == "linear":
        b = bounds.bound_linear(n, m, _need(args, "k"), budget=args.budget, **kw)
    elif th == "list":
        b = bounds.bound_list(n, m, _need(args, "k"), **kw)
    elif th in ("signed", "signed-single"):
        b = bounds.bound_signed(n, m, _need(args, "k"), per_signature=th == "signed-single", **kw)
    elif th == "general-c":
        b = bounds.bound_general_c(n, m, _need(args, "c"), _need(args, "k"), budget=args.budget, **kw)
    else:  # af-weak
        b = bounds.alon_furedi_weak(_need(args, "n"), _need(args, "S"), _need(args, "t"), _need(args, "d"))
    emit([b.to_dict()], args.format)
    return EXIT_OK if b.applicable else EXIT_FAIL


def cmd_family(args) -> int:
    params = {}
    if args.g is not None:
        params["g"] = args.g
    if args.c is not None:
        params["c"] = Fraction(args.c)
    if args.m is not None:
        params["m"] = args.m
    b = bounds.family_bound(args.family, _need(args, "n"), _need(args, "k"), **params)
    emit([b.to_dict()], args.format)
    return EXIT_OK if b.applicable else EXIT_FAIL


def _field(args):
    if args.p is not None:
        return make_field(args.p, args.r or 1)
    return field_of_order(_need(args, "k"))


def cmd_search_degree(args) -> int:
    F = _field(args)
    anchor = None
    if args.anchor:
        a, b = (int(x) for x in args.anchor.split(","))
        anchor = (a, b)
    if args.perm:
        pi = parse_perm(args.perm)
        if args.product_l:
            res = degree_search.min_cover_degree_product_of_L(F, pi, anchor)
        elif anchor is not None:
            res = degree_search.min_cover_degree_anchored(F, pi, *anchor)
        else:
            res = degree_search.min_cover_degree(F, pi)
        emit([{"k": F.k, **res.to_dict(), "witness_ok": degree_search.check_witness(F, res)}], args.format)
        return EXIT_OK
    reps = degree_search.affine_orbit_reps(F)
    records = []
    worst = -1
    for pi in reps:
        if args.anchored:
            best = None
            for a in range(F.k):
                for b in range(F.k):
                    if pi[a] == b:
                        continue
                    if args.product_l:
                        r = degree_search.min_cover_degree_product_of_L(F, pi, (a, b))
                    else:
                        r = degree_search.min_cover_degree_anchored(F, pi, a, b)
                    if best is None or r.degree > best.degree:
                        best = r
            res = best
        elif args.product_l:
            res = degree_search.min_cover_degree_product_of_L(F, pi)
        else:
            res = degree_search.min_cover_degree(F, pi)
        worst = max(worst, res.degree)
        records.append({"k": F.k, "class_rep": format_perm(pi), **res.to_dict()})
    records.append({"k": F.k, "summary": True, "anchored": bool(args.anchored),
                    "product_of_L": bool(args.product_l), "worst_case_degree": worst, "classes": len(reps)})
    emit(records, args.format)
    return EXIT_OK


def cmd_cover(args) -> int:
    g = _graph(args)
    if not args.labeling:
        raise UsageError("--labeling is required")
    text = open(args.labeling).read() if ":" not in args.labeling else args.labeling.replace(";", "\n")
    L = parse_labeling(text, g)
    if prime_power(L.k) is None:
        raise UsageError("cover polynomials need a prime-power color count")
    tree = tree_from_edges(g, _tree_edges(args.tree_edges)) if args.tree_edges else spanning_forest(g)
    kappa = [int(x) for x in args.kappa.split(",")] if args.kappa else None
    mode = "anchored" if args.anchored else "halfk"
    f = covering.graph_cover_polynomial(L, mode, kappa, tree)
    nz = covering.count_nonzeros(f, budget=args.budget)
    exact, weak = covering.cover_bound_chain(f)
    rec = {
        "mode": mode, "k": L.k, "degree": f.degree,
        "expected_degree": covering.expected_cover_degree(g.n, g.m, L.k, mode, len(g.components)),
        "nonzeros": nz, "proper_colorings": counting.count_colorings(L),
        "alon_furedi_exact": exact, "alon_furedi_weak": weak.to_dict(),
    }
    emit([rec], args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    graphs = None
    if args.sample:
        pool = verify.connected_graphs(args.n_max)
        rng = random.Random(args.seed)
        graphs = rng.sample(pool, min(args.sample, len(pool)))
    ks = tuple(int(x) for x in args.k_list.split(",")) if args.k_list else ((args.k,) if args.k else (3,))
    if args.sweep == "degrees":
        report = verify.replicate_degree_searches(extended=args.extended, jobs=args.jobs)
    else:
        spec = verify.SweepSpec(
            n_max=args.n_max, k_values=ks, max_cycle_rank=args.cycle_rank_cap,
            budget=args.budget, graphs=graphs, jobs=args.jobs, c=args.c, output=args.output,
        )
        if args.sweep == "conjecture":
            report = verify.verify_linear_dp_conjecture(spec)
        else:
            report = verify.verify_theorem_soundness(spec, _need(args, "theorem"))
    records = report.records + [{"skipped": True, **s} for s in report.skipped]
    records.append({"summary": True, "sweep": report.name, "ok": report.ok,
                    "records": len(report.records), "skipped": len(report.skipped),
                    "failures": len(report.failures)})
    emit(records, args.format)
    return EXIT_OK if report.ok else EXIT_FAIL


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dpcolor", description="Exact coloring counts of labeled graphs and their lower bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="minimum number of colorings over labelings")
    _add_graph_args(p)
    _add_common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--mode", choices=("dp", "linear", "signed", "classical"), default="dp")
    p.add_argument("--dedup", choices=("on", "off"), default="on")
    p.add_argument("--tree-edges", help="spanning tree as '0-1,1-2,...'")
    p.add_argument("--labeling", help="count one labeling: file or literal 'u v : perm;...'")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("colorable", help="is every labeling colorable")
    _add_graph_args(p)
    _add_common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--mode", choices=("dp", "linear", "signed", "classical"), default="dp")
    p.add_argument("--dedup", choices=("on", "off"), default="on")
    p.set_defaults(func=cmd_colorable)

    p = sub.add_parser("bound", help="evaluate a lower bound")
    _add_graph_args(p)
    _add_common(p)
    p.add_argument("--theorem", choices=bounds.THEOREMS, required=True)
    for name in ("n", "m", "k", "c", "S", "t", "d"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--tree-edges")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("family", help="bound for a sparse planar family")
    _add_common(p)
    p.add_argument("--family", choices=bounds.FAMILIES, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--g", type=int, help="Euler genus")
    p.add_argument("--c", help="edge slack constant, e.g. 1/2")
    p.add_argument("--m", type=int)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("search-degree", help="minimal cover degrees over GF(k)")
    _add_common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--perm", help="single permutation in one-line notation")
    p.add_argument("--anchor", help="a,b")
    p.add_argument("--anchored", action="store_true")
    p.add_argument("--product-l", action="store_true")
    p.set_defaults(func=cmd_search_degree)

    p = sub.add_parser("cover", help="build a cover polynomial for a labeling")
    _add_graph_args(p)
    _add_common(p)
    p.add_argument("--labeling")
    p.add_argument("--anchored", action="store_true")
    p.add_argument("--kappa", help="anchor coloring as 'c0,c1,...'")
    p.add_argument("--tree-edges")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("verify", help="batch sweeps")
    _add_common(p)
    p.add_argument("--sweep", choices=("conjecture", "soundness", "degrees"), required=True)
    p.add_argument("--theorem", choices=("main-i", "main-ii", "linear", "signed", "general-c"))
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--k", type=int)
    p.add_argument("--k-list", help="comma separated k values")
    p.add_argument("--c", type=int)
    p.add_argument("--cycle-rank-cap", type=int)
    p.add_argument("--sample", type=int, help="random sample of graphs on exactly --n-max vertices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--extended", action="store_true", help="degree sweep up to p = 53")
    p.add_argument("--output", help="also write the JSON-lines report here")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.budget <= 0:
        args.budget = None
    try:
        return args.func(args)
    except counting.BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, GraphFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


run = main

if __name__ == "__main__":
    sys.exit(main())
