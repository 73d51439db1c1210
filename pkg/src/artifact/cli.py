"""Command-line front end; every report is one JSON document on stdout."""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .arith import FactorizationBudget, IncompleteFactorization, as_rational
from .classify import classify_image
from .families import curve_catalog, scan_specializations
from .graphlab import build_graph, components, d_gamma, special_family
from .grouplab import build_Vi, check_all, lcs_oracle, ma_subgroup, omega
from .orbit import QuadraticPolynomial, adjusted_orbit
from .treegroup import index_vector

EXIT_OK, EXIT_USAGE, EXIT_INCOMPLETE, EXIT_INTERNAL = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _rational(s: str) -> Fraction:
    try:
        return as_rational(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {s!r}")


def _t_values(s: str) -> list:
    """Comma list "2,4,6" or inclusive integer range "a..b" or "a..b:step"."""
    if ".." in s:
        lo, rest = s.split("..", 1)
        hi, _, step = rest.partition(":")
        return list(range(int(lo), int(hi) + 1, int(step or 1)))
    return [_rational(x) for x in s.split(",") if x]


GLOBAL_DEFAULTS = {"trial_bound": 10**6, "rho_cap": 10**7, "seed": 0,
                   "strict": False, "timings": False}


def _global_flags() -> argparse.ArgumentParser:
    """Budget flags, accepted before or after the subcommand."""
    g = argparse.ArgumentParser(add_help=False, allow_abbrev=False,
                                argument_default=argparse.SUPPRESS)
    g.add_argument("--trial-bound", type=int)
    g.add_argument("--rho-cap", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--strict", action="store_true",
                   help="fail with exit 3 instead of keeping unsplit cofactors as opaque labels")
    g.add_argument("--timings", action="store_true",
                   help="add wall time to meta (makes output nondeterministic)")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    p = _Parser(prog="artifact", description=__doc__, parents=[common], allow_abbrev=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def leaf(subs, name):
        return subs.add_parser(name, parents=[common], allow_abbrev=False)

    for name in ("classify", "orbit"):
        c = leaf(sub, name)
        c.add_argument("--gamma", type=_rational, required=True)
        c.add_argument("--delta", type=_rational, required=True)
        c.add_argument("--depth", type=int, required=True)
        c.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")

    s = leaf(sub, "scan")
    s.add_argument("--family", required=True)
    s.add_argument("--t", dest="t", type=_t_values, required=True)
    s.add_argument("--depth", type=int, required=True)

    g = _add("group")
    gs = g.add_subparsers(dest="group_command", required=True, parser_class=_Parser)
    v = leaf(gs, "vspace")
    v.add_argument("--level", type=int, required=True)
    v.add_argument("--index", type=int, required=True)
    l = leaf(gs, "lcs")
    l.add_argument("--level", type=int, required=True)
    l.add_argument("--vector", default=None)
    ca = leaf(gs, "check-all")
    ca.add_argument("--level", type=int, required=True)

    gr = _add("graph")
    grs = gr.add_subparsers(dest="graph_command", required=True, parser_class=_Parser)
    sp = leaf(grs, "special")
    sp.add_argument("--trunc", type=int, required=True)
    sp.add_argument("--copies", type=int, default=2)

    cu = leaf(sub, "curves")
    cu.add_argument("--max-index", type=int, required=True)
    return p


def _classify(args, budget):
    f = QuadraticPolynomial(args.gamma, args.delta)
    return {"classify_image": classify_image(f, args.depth, budget, args.strict).to_dict()}


def _orbit(args, budget):
    f = QuadraticPolynomial(args.gamma, args.delta)
    o = adjusted_orbit(f, args.depth, budget, args.strict)
    return {"adjusted_orbit": [
        {"k": k, "value": str(v), "square_class": [str(l) for l in c.labels()]}
        for k, (v, c) in enumerate(zip(o.values, o.classes))]}


def _scan(args, budget):
    rep = scan_specializations(args.family, args.t, args.depth, budget, args.strict)
    return {"scan_specializations": {
        "verdicts": {k: v.to_dict() for k, v in rep.verdicts.items()},
        "counts": rep.counts()}}, rep.errors


def _group(args, budget):
    if args.group_command == "vspace":
        V = build_Vi(args.level, args.index)
        return {"build_Vi": {"dim": V.dim, "basis": [format(b, f"0{1 << args.level}b")
                                                    for b in V.space.basis]}}
    if args.group_command == "lcs":
        G = omega(args.level) if args.vector is None else ma_subgroup(
            args.level, index_vector(args.vector))
        return {"lcs_oracle": {"orders": [H.order for H in lcs_oracle(G)]}}
    return {"check_all": check_all(args.level)}


def _graph(args, budget):
    S = special_family(args.trunc, args.copies)
    gamma = build_graph(args.trunc, S)
    count, _ = components(gamma)
    d = d_gamma(gamma)
    return {"special_family": {"vertices": len(S), "edges": gamma.graph.number_of_edges(),
                               "components": count, "d_gamma": "inf" if d == float("inf") else d}}


def _curves(args, budget):
    rows = [{"index_set": list(c.index_set), "rhs": str(c.rhs),
             "squarefree_part": str(c.squarefree_part), "genus_bound": c.genus_bound}
            for c in curve_catalog(args.max_index)]
    return {"curve_catalog": {"curves": rows,
                              "genus_at_most_one": [r["index_set"] for r in rows
                                                    if r["genus_bound"] <= 1]}}


HANDLERS = {"classify": _classify, "orbit": _orbit, "scan": _scan, "group": _group,
            "graph": _graph, "curves": _curves}


def dispatch(argv) -> tuple:
    """Run one command; returns (exit code, report dict)."""
    args = build_parser().parse_args(argv)
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    budget = FactorizationBudget(trial_division_bound=args.trial_bound,
                                 rho_iteration_cap=args.rho_cap, seed=args.seed)
    inputs = {k: (str(v) if isinstance(v, Fraction) else
                  [str(x) for x in v] if isinstance(v, list) else v)
              for k, v in sorted(vars(args).items())}
    report = {"meta": {"version": __version__, "command": list(argv)},
              "inputs": inputs, "results": {}, "errors": {}}
    code = EXIT_OK
    t0 = time.perf_counter()
    try:
        out = HANDLERS[args.command](args, budget)
        if isinstance(out, tuple):
            out, errs = out
            report["errors"].update(errs)
        report["results"] = out
    except IncompleteFactorization as e:
        report["errors"]["IncompleteFactorization"] = {
            "cofactor": str(e.cofactor), "depth": getattr(e, "depth", None)}
        code = EXIT_INCOMPLETE
    except AssertionError as e:
        report["errors"]["AssertionError"] = str(e)
        code = EXIT_INTERNAL
    except ValueError as e:
        report["errors"][type(e).__name__] = str(e)
        code = EXIT_USAGE
    report["meta"]["budget"] = {"trial_division_bound": budget.trial_division_bound,
                                "rho_iteration_cap": budget.rho_iteration_cap,
                                "seed": budget.seed}
    if args.timings:
        report["meta"]["elapsed_s"] = round(time.perf_counter() - t0, 3)
    return code, report


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, report = dispatch(argv)
    except SystemExit as e:
        return int(e.code or 0)
    print(json.dumps(report, sort_keys=True, indent=2))
    return code
