"""Command line front end: core, build, verify, test, grid."""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import builder, core, oracle, tester
from .constraint import Constraint, FunctionTable
from .errors import RMOrbitError
from .gf import field_create, field_from_order
from .poly import MultiPoly, evaluate_grid


def _field(args):
    if args.q is not None:
        F = field_from_order(args.q)
        if args.p is not None and args.p != F.p:
            raise RMOrbitError(f"--p {args.p} disagrees with --q {args.q}")
        return F
    if args.p is not None:
        return field_create(args.p, args.s or 1)
    raise RMOrbitError("give --q, or --p with optional --s")


def _emit(args, report):
    fmt = args.format
    if fmt == "json":
        text = json.dumps(report, sort_keys=True, indent=2)
    elif fmt == "csv":
        text = _csv(report.get("rows", [report]))
    else:
        text = _table(report)
    print(text)


def _table(report, prefix=""):
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict):
            lines.append(_table(val, prefix + key + "."))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            for i, item in enumerate(val):
                lines.append(_table(item, f"{prefix}{key}[{i}]."))
        else:
            lines.append(f"{prefix + key:<32} {val}")
    return "\n".join(lines)


def _csv(rows):
    flat = [{k: v for k, v in row.items() if not isinstance(v, (list, dict))} for row in rows]
    buf = io.StringIO()
    keys = sorted({k for row in flat for k in row})
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    w.writerows(flat)
    return buf.getvalue().rstrip("\n")


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_constraint(path):
    with open(path) as fh:
        data = json.load(fh)
    prov = data.get("provenance", {})
    return Constraint.from_dict(data.get("constraint", data)), prov


# -- function generators --------------------------------------------------------

def make_function(spec, field, n, d, rng):
    """Parse a function spec: a generator name (with optional ':arg') or a JSON file path."""
    name, _, arg = spec.partition(":")
    q = field.q
    if name == "random-codeword":
        return oracle.random_codeword(field, n, _need_d(d, name), rng)
    if name == "codeword-plus-noise":
        rate = float(arg or 0.1)
        base = oracle.random_codeword(field, n, _need_d(d, name), rng)
        flip = rng.random(q ** n) < rate
        noise = rng.integers(1, q, size=q ** n) if q > 1 else 0
        return FunctionTable(field, n, np.where(flip, field.vadd(base.values, noise), base.values))
    if name == "random-function":
        return FunctionTable(field, n, rng.integers(0, q, size=q ** n))
    if name == "monomial":
        exps = tuple(int(x) for x in arg.split(","))
        return FunctionTable(field, n, evaluate_grid(MultiPoly.monomial(field, exps)))
    if name == "table":
        return FunctionTable(field, n, [int(x) for x in arg.split(",")])
    if os.path.exists(spec):
        with open(spec) as fh:
            data = json.load(fh)
        if isinstance(data, list):
            return FunctionTable(field, n, data)
        return FunctionTable.from_dict(data)
    raise RMOrbitError(f"unknown function spec {spec!r}")


def _need_d(d, name):
    if d is None:
        raise RMOrbitError(f"{name} needs --d (or a constraint file with provenance)")
    return d


# -- commands -----------------------------------------------------------------------

def cmd_core(args):
    F = _field(args)
    report = core.verify_core(F, budget=args.budget or core.EVAL_BUDGET)
    report["seed"] = args.seed
    _emit(args, report)
    return 0 if report["pass"] else 1


def cmd_build(args):
    F = _field(args)
    C = builder.rm_constraint(args.n, args.d, F, project=args.project)
    prov = builder.provenance(args.n, args.d, F, C)
    prov["projected"] = args.n < prov["arity_required"]
    if args.out:
        _write_json(args.out, {"constraint": C.to_dict(), "provenance": prov})
    report = {key: prov[key] for key in ("n", "d", "q", "k", "bound", "bound_simple", "bound_satisfied",
                                         "arity_required", "b_values", "projected")}
    report["out"] = args.out
    report["seed"] = args.seed
    _emit(args, report)
    return 0 if prov["bound_satisfied"] else 1


def cmd_verify(args):
    C, prov = load_constraint(args.constraint)
    d = args.d if args.d is not None else prov.get("d")
    d = _need_d(d, "verify")
    n, q = C.n, C.field.q
    if (args.n is not None and args.n != n) or (args.q is not None and args.q != q):
        raise RMOrbitError(f"constraint lives on F_{q}^{n}")
    budget = args.budget or oracle.TRANSFORM_BUDGET
    report = {"q": q, "n": n, "d": d, "k": C.k, "seed": args.seed}
    ok = True
    if args.mode in ("border", "both"):
        border = oracle.verify_deg_border(C, n, d, q, transform_budget=budget, seed=args.seed)
        report["border"] = border
        ok &= border["pass"]
    if args.mode in ("rank", "both"):
        cert = oracle.orbit_span_rank(C, n, d, q, transform_budget=budget, seed=args.seed).to_dict()
        cert["weight_within_bound"] = builder.rm_bound_ok(cert["max_row_weight"], d, q, C.field.p)
        report["rank"] = cert
        ok &= cert["pass"] and cert["weight_within_bound"]
    report["pass"] = bool(ok)
    if args.out:
        _write_json(args.out, report)
    _emit(args, report)
    return 0 if ok else 1


def cmd_test(args):
    C, prov = load_constraint(args.constraint)
    d = args.d if args.d is not None else prov.get("d")
    F, n = C.field, C.n
    rng = np.random.default_rng(args.seed)
    f = make_function(args.function, F, n, d, rng)
    if args.exact:
        rep = tester.exact_rejection(C, f, budget=args.budget or tester.EXACT_BUDGET)
    else:
        rep = tester.estimate_rejection(C, f, args.trials, seed=args.seed)
    report = rep.to_dict()
    report["seed"] = args.seed
    report["function"] = args.function
    ok = True
    if d is not None:
        member = oracle.is_codeword(f, d)
        report["is_codeword"] = member
        if member:
            ok = rep.rejections == 0
        try:
            delta = oracle.distance_to_rm(f, n, d, F.q)
            report["distance"] = str(delta)
            if delta:
                report["ratio"] = rep.estimate / float(delta)
        except RMOrbitError as exc:
            report["distance"] = f"unavailable: {exc}"
    report["pass"] = bool(ok)
    if args.out:
        _write_json(args.out, report)
    _emit(args, report)
    return 0 if ok else 1


def grid_row(q, d, verify=False, seed=0):
    F = field_from_order(q)
    n = builder.arity_required(d, q, F.p, F.s)
    row = {"q": q, "d": d, "n": n}
    try:
        C = builder.rm_constraint(n, d, F)
        prov = builder.provenance(n, d, F, C)
        row.update(k=C.k, bound=prov["bound"], bound_simple=prov["bound_simple"],
                   bound_satisfied=prov["bound_satisfied"],
                   degree_k=[x["k"] for x in prov["decompositions"]])
        if q == 2:
            row["reference_k"] = 2 ** (d + 1)
            row["within_4x"] = C.k <= 4 * 2 ** (d + 1)
        if verify:
            if q ** n <= oracle.RANK_BUDGET:
                cert = oracle.orbit_span_rank(C, n, d, q, seed=seed)
                row["verify"] = cert.status
            else:
                row["verify"] = "skipped"
    except RMOrbitError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_grid(args):
    qs = [int(x) for x in args.qs.split(",") if x.strip()] if args.qs else []
    if not qs:
        raise RMOrbitError("grid: the q list is empty")
    rows = [grid_row(q, d, args.verify, args.seed) for q in qs for d in range(args.dmax + 1)]
    ok = all("error" not in r and r["bound_satisfied"] and r.get("verify", "pass") in ("pass", "skipped")
             for r in rows)
    report = {"rows": rows, "seed": args.seed, "pass": ok}
    if args.out:
        if args.out.endswith(".csv"):
            with open(args.out, "w") as fh:
                fh.write(_csv(rows) + "\n")
        else:
            _write_json(args.out, report)
    _emit(args, report)
    return 0 if ok else 1


# -- parser ---------------------------------------------------------------------------

def _common(p):
    p.add_argument("--q", type=int, help="field order")
    p.add_argument("--p", type=int, help="characteristic (with --s instead of --q)")
    p.add_argument("--s", type=int, help="extension degree")
    p.add_argument("--n", type=int, help="number of variables")
    p.add_argument("--d", type=int, help="degree bound")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--budget", type=int, help="override the enumeration budget")
    p.add_argument("--workers", type=int, default=os.cpu_count(),
                   help="accepted for compatibility; work is vectorized in-process")
    p.add_argument("--out", help="output file")
    p.add_argument("--format", choices=["json", "table", "csv"], default="json")


def build_parser():
    parser = argparse.ArgumentParser(prog="rmorbit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("core", help="build and verify the p-variate core constraint")
    _common(p)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("build", help="build the constraint for RM[n, d, q]")
    _common(p)
    p.add_argument("--project", action="store_true",
                   help="allow n below the required arity by projecting coordinates")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="certify a constraint file")
    _common(p)
    p.add_argument("--constraint", required=True)
    p.add_argument("--mode", choices=["border", "rank", "both"], default="both")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("test", help="run the local tester on a function")
    _common(p)
    p.add_argument("--constraint", required=True)
    p.add_argument("--function", required=True,
                   help="random-codeword | codeword-plus-noise:RATE | random-function | "
                        "monomial:E1,E2,.. | table:V0,V1,.. | path to JSON")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("grid", help="arity and bound summary over (q, d)")
    _common(p)
    p.add_argument("--qs", required=True, help="comma separated field orders")
    p.add_argument("--dmax", type=int, default=7)
    p.add_argument("--verify", action="store_true", help="also run the orbit rank check where feasible")
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    for name in ("budget", "trials"):
        val = getattr(args, name)
        if val is not None and val < 1:
            print(f"error: --{name} must be positive", file=sys.stderr)
            return 2
    if args.command == "build" and (args.n is None or args.d is None):
        print("error: build needs --n and --d", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (RMOrbitError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
