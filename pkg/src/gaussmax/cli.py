"""Command-line front end.

Every subcommand prints one JSON document (or CSV where noted) carrying a
``meta`` block. Exit status: 0 success, 1 failed verification or scan,
2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .functions import default_corpus, parse_function
from .geometry import ConeSpec, Variant, as_point
from .kernel import Form, mehler_log
from .maximal import SearchParams, hl_maximal, nt_maximal
from .quadrature import MAX_ORDER, hermite_rule
from .semigroup import DEFAULT_ORDER, DEFAULT_TOL, Method, ou_apply
from .verify import LemmaId, cone_constant, ratio_scan, verify_lemma

WORKERS_ENV = "GAUSSMAX_WORKERS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def parse_grid(text, dim):
    """``lo:hi:step`` (tensor grid in every axis) or ``p1;p2;...`` with
    comma-separated coordinates."""
    text = text.strip()
    if ":" in text and ";" not in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid must be lo:hi:step, got {text!r}")
        lo, hi, step = (float(p) for p in parts)
        if not step > 0 or hi < lo:
            raise UsageError("grid needs step > 0 and hi >= lo")
        n = int(math.floor((hi - lo) / step + 1e-9)) + 1
        axis = np.round(lo + step * np.arange(n), 12)
        mesh = np.meshgrid(*([axis] * dim), indexing="ij")
        return [np.array(p) for p in np.stack([m.ravel() for m in mesh], axis=-1)]
    out = []
    for chunk in text.split(";"):
        if chunk.strip():
            out.append(as_point([float(v) for v in chunk.split(",")], dim))
    if not out:
        raise UsageError("no points given")
    return out


def parse_point(text, dim):
    try:
        return as_point([float(v) for v in text.split(",")], dim)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_cone(text):
    if text.strip().lower() == "reduced":
        return ConeSpec.reduced()
    try:
        A, a = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"cone must be 'A,a' or 'reduced', got {text!r}") from None
    return ConeSpec(A, a, Variant.FULL)


def _search(args):
    return SearchParams(args.coarse_grid, args.refine_rounds, args.shrink, args.t_floor)


def _workers(args):
    w = args.workers
    if w is None:
        env = os.environ.get(WORKERS_ENV, "").strip()
        w = int(env) if env else 1
    if w == 0:
        w = os.cpu_count() or 1
    if w < 0:
        raise UsageError("workers must be nonnegative")
    return w


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to null."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _meta(args, **params):
    return {"version": __version__, "subcommand": args.command, "seed": args.seed,
            "parameters": params}


def _add_common(p):
    p.add_argument("--dim", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None,
                   help=f"worker processes, 0 = all cores (default: ${WORKERS_ENV} or 1)")
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _add_search(p):
    d = SearchParams()
    p.add_argument("--coarse-grid", type=int, default=d.coarse_grid)
    p.add_argument("--refine-rounds", type=int, default=d.refine_rounds)
    p.add_argument("--shrink", type=float, default=d.shrink)
    p.add_argument("--t-floor", type=float, default=d.t_floor)


def build_parser():
    parser = _Parser(prog="gaussmax", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kernel", help="log Mehler kernel")
    _add_common(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--form", choices=[f.value for f in Form], default=Form.SYMMETRIC.value)

    p = sub.add_parser("rule", help="Gauss-Hermite rule against gamma")
    _add_common(p)
    p.add_argument("--order", type=int, required=True)

    p = sub.add_parser("apply", help="evaluate e^{sL}u(y)")
    _add_common(p)
    p.add_argument("--fn", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--method", choices=[m.value for m in Method], default="substitution")
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("maximal", help="one maximal function value")
    _add_common(p)
    _add_search(p)
    p.add_argument("--op", choices=("hl", "nt"), required=True)
    p.add_argument("--fn", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--cone", default="1,1", help="'A,a' or 'reduced'")
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)

    p = sub.add_parser("verify", help="sampled lemma suites")
    _add_common(p)
    p.add_argument("--lemma", required=True, choices=[m.value for m in LemmaId] + ["all"])
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)

    p = sub.add_parser("scan", help="ratio scan of nt / hl over points and a corpus")
    _add_common(p)
    _add_search(p)
    p.add_argument("--cone", default="1,1", help="'A,a' or 'reduced'")
    p.add_argument("--xs", required=True, help="lo:hi:step or p1;p2;...")
    p.add_argument("--corpus", default="default",
                   help="'default' or function specs separated by ';'")
    return parser


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_kernel(args):
    x = parse_point(args.x, args.dim)
    y = parse_point(args.y, args.dim)
    lv = mehler_log(args.t, x, y, args.form)
    report = {"meta": _meta(args, t=args.t, x=x, y=y, form=args.form),
              "t": args.t, "x": x, "y": y, "form": args.form, "log_value": lv,
              "value": math.exp(lv) if lv < 709.0 else None}
    return report, 0


def cmd_rule(args):
    if not 1 <= args.order <= MAX_ORDER:
        raise UsageError(f"order must lie in [1, {MAX_ORDER}]")
    rule = hermite_rule(args.order, args.dim)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{i}" for i in range(args.dim)] + ["weight"])
        for node, wt in zip(rule.nodes, rule.weights):
            w.writerow([repr(float(v)) for v in node] + [repr(float(wt))])
        return buf.getvalue(), 0
    report = {"meta": _meta(args, order=args.order, dim=args.dim), "order": rule.order,
              "dim": rule.dim, "nodes": rule.nodes, "weights": rule.weights}
    return report, 0


def cmd_apply(args):
    u = parse_function(args.fn, args.dim)
    y = parse_point(args.y, args.dim)
    ev = ou_apply(u, args.s, y, args.method, order=args.order, tol=args.tol)
    report = {"meta": _meta(args, fn=args.fn, s=args.s, y=y, method=args.method,
                            order=args.order, tol=args.tol)}
    report.update(ev.to_dict())
    return report, 0


def cmd_maximal(args):
    u = parse_function(args.fn, args.dim)
    x = parse_point(args.x, args.dim)
    search = _search(args)
    params = {"op": args.op, "fn": args.fn, "x": x, "search": search.to_dict()}
    if args.op == "hl":
        res = hl_maximal(u, x, search)
    else:
        cone = parse_cone(args.cone)
        params.update(cone=cone.to_dict(), order=args.order)
        res = nt_maximal(u, x, cone, search, args.order)
    report = {"meta": _meta(args, **params)}
    report.update(res.to_dict())
    return report, 0


def cmd_verify(args):
    params = {"A": args.A, "a": args.a, "alpha": args.alpha, "d": args.dim}
    lemmas = list(LemmaId) if args.lemma == "all" else [LemmaId(args.lemma)]
    workers = _workers(args)
    reps = [verify_lemma(lem, args.samples, args.seed, params, workers) for lem in lemmas]
    meta = _meta(args, lemma=args.lemma, samples=args.samples, **params)
    total = sum(r.violations for r in reps)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lemma_id", "samples", "violations", "worst_margin", "seed"])
        for r in reps:
            d = r.to_dict()
            w.writerow([d["lemma_id"], d["samples"], d["violations"], repr(d["worst_margin"]),
                        d["seed"]])
        return buf.getvalue(), int(total > 0)
    if len(reps) == 1:
        report = {"meta": meta, **reps[0].to_dict()}
    else:
        report = {"meta": meta, "reports": [r.to_dict() for r in reps], "violations": total}
    return report, int(total > 0)


def _corpus(text, dim):
    if text.strip().lower() == "default":
        return default_corpus(dim)
    return [parse_function(s, dim) for s in text.split(";") if s.strip()]


def cmd_scan(args):
    cone = parse_cone(args.cone)
    xs = parse_grid(args.xs, args.dim)
    corpus = _corpus(args.corpus, args.dim)
    search = _search(args)
    for u in corpus:
        if not math.isfinite(u.support_radius):
            raise UsageError(f"{u} is not compactly supported")
    workers = _workers(args)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            reports = ratio_scan(corpus, xs, cone, search, executor=pool)
    else:
        reports = ratio_scan(corpus, xs, cone, search)
    pc = cone_constant(cone, args.dim)
    passed = all(r.passed for r in reports)
    max_ratio = max(r.max_ratio for r in reports)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{i}" for i in range(args.dim)] + ["nt", "hl", "ratio", "function"])
        for r in reports:
            for p in r.points:
                w.writerow([repr(v) for v in p["x"]]
                           + [repr(p["nt_value"]), repr(p["hl_value"]), repr(p["ratio"]),
                              r.function_id])
        return buf.getvalue(), int(not passed)
    report = {
        "meta": _meta(args, cone=cone.to_dict(), xs=args.xs, corpus=[str(u) for u in corpus],
                      search=search.to_dict(), dim=args.dim),
        "reports": [r.to_dict() for r in reports],
        "max_ratio": max_ratio,
        "proof_constant": pc.C_total,
        "log_proof_constant": pc.log_C_total,
        "passed": passed,
    }
    return report, int(not passed)


COMMANDS = {"kernel": cmd_kernel, "rule": cmd_rule, "apply": cmd_apply,
            "maximal": cmd_maximal, "verify": cmd_verify, "scan": cmd_scan}


def _glue_negatives(argv):
    # argparse reads "-3:3:0.5" or "-1,2" as a flag; bind such values with '='
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if (tok.startswith("--") and "=" not in tok and len(nxt) > 1 and nxt[0] == "-"
                and (nxt[1].isdigit() or nxt[1] == ".")):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv=None):
    """Parse ``argv``, execute, write the report; returns the exit status."""
    parser = build_parser()
    argv = _glue_negatives(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
        if args.seed < 0:
            raise UsageError("seed must be nonnegative")
        report, status = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"gaussmax: error: {msg}", file=sys.stderr)
        return 2
    text = report if isinstance(report, str) else json.dumps(_clean(report), indent=2,
                                                            allow_nan=False) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv=None):
    return run(argv)
