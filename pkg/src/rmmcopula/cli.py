"""
Command-line front end.

Exit codes: 0 on success, 2 when a validation check fails, 1 on usage errors
(bad flags, malformed documents, I/O problems).
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import measures, sampling
from .copula import validate_copula
from .document import parse_spec, rmm_components
from .errors import ConvergenceError, DomainError, SamplingError, SpecError, ValidationError
from .multivariate import NCopula, validate_ncopula
from .transforms import rmm_iter, rmm_limit

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text, what):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse {what} {text!r}: expected comma-separated decimals") from None


def _load(args):
    if bool(args.spec) == bool(args.expr):
        raise UsageError("give exactly one of --spec FILE or --expr TEXT")
    if args.spec:
        try:
            with open(args.spec) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.spec}: {exc.strerror}") from None
    else:
        text = args.expr
    return parse_spec(text)


def _fmt(x):
    return f"{x:.10g}"


def cmd_eval(args):
    doc = _load(args)
    if not args.point:
        raise UsageError("eval needs at least one --point")
    C = doc.copula
    for text in args.point:
        pt = _floats(text, "point")
        if len(pt) != doc.dim:
            raise UsageError(f"point {text!r} has {len(pt)} coordinates, expected {doc.dim}")
        if any(not 0.0 <= x <= 1.0 for x in pt):
            raise UsageError(f"point {text!r} outside the unit cube")
        val = C(np.array(pt)) if isinstance(C, NCopula) else C(pt[0], pt[1])
        print(",".join(_fmt(x) for x in pt + [val]))
    return EXIT_OK


def cmd_validate(args):
    doc = _load(args)
    tol = args.tol if args.tol is not None else 1e-8
    if isinstance(doc.copula, NCopula):
        report = validate_ncopula(doc.copula, grid_n=args.grid or 10, tol=tol)
    else:
        report = validate_copula(doc.copula, grid_n=args.grid or 101, tol=tol)
    print(report)
    for failure in report.failures:
        print(f"  {failure}")
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_measures(args):
    doc = _load(args)
    C = doc.copula
    if isinstance(C, NCopula):
        raise UsageError("measures are defined for bivariate copulas only")
    kinds = ("rho", "tau", "tails", "quadrant") if args.kind == "all" else (args.kind,)
    for kind in kinds:
        if kind == "rho":
            print(measures.spearman_rho(C, **({"tol": args.tol} if args.tol else {})))
        elif kind == "tau":
            print(measures.kendall_tau(C, **({"tol": args.tol} if args.tol else {})))
        elif kind == "tails":
            for rep in measures.tail_coefficients(C):
                print(rep)
        else:
            print(f"quadrant = {measures.quadrant_class(C, grid_n=args.grid or 101).value}")
    return EXIT_OK


def _n_values(text):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok in ("inf", "oo"):
            out.append(math.inf)
        elif tok.isdigit():
            out.append(int(tok))
        elif tok:
            raise UsageError(f"bad iteration count {tok!r}")
    return tuple(out)


def cmd_table(args):
    try:
        config = measures.TableConfig(
            bases=tuple(b.strip() for b in args.bases.split(",") if b.strip()),
            a_values=tuple(_floats(args.a, "--a")),
            b_values=tuple(_floats(args.b, "--b")),
            n_values=_n_values(args.n_values),
            kind=args.kind,
            tol=args.tol,
            workers=args.workers,
        )
    except ValidationError as exc:
        raise UsageError(str(exc)) from None
    cells = measures.table_run(config)
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                measures.write_table_csv(cells, fh)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        measures.write_table_csv(cells, sys.stdout)
    bad = [c for c in cells if not c.ok]
    for c in bad:
        print(f"cell base={c.base} a={c.a:g} b={c.b:g} n={c.n}: {c.message}", file=sys.stderr)
    return EXIT_INVALID if bad else EXIT_OK


def cmd_sample(args):
    doc = _load(args)
    if args.n is None or args.n < 0:
        raise UsageError("sample needs --n >= 0")
    if doc.dim == 2:
        batch = sampling.sample2(doc.copula, args.n, args.seed)
    elif doc.dim == 3:
        batch = sampling.sample3(doc.copula, args.n, args.seed)
    else:
        raise UsageError(f"sampling supports dimensions 2 and 3, got {doc.dim}")
    if args.out:
        meta = {"spec": doc.source} if args.meta else None
        try:
            sampling.export_csv(batch, args.out, meta=meta)
        except OSError as exc:
            raise UsageError(str(exc)) from None
    else:
        print(",".join(f"u{i + 1}" for i in range(batch.dim)))
        for row in batch.points:
            print(",".join(f"{x:.10g}" for x in row))
    return EXIT_OK


def cmd_limit_diff(args):
    doc = _load(args)
    C_dot, f, g = rmm_components(doc)
    grid = args.grid or 21
    t = np.linspace(0.0, 1.0, grid)
    U, V = np.meshgrid(t, t, indexing="ij")
    limit = rmm_limit(C_dot, f, g).evaluate(U, V)
    print("n,sup_distance")
    for n in range(args.n_max + 1):
        dist = np.abs(rmm_iter(C_dot, f, g, n).evaluate(U, V) - limit).max()
        print(f"{n},{dist:.6e}")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="rmmcopula", description="Maxmin and reflected maxmin copulas")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_spec(p):
        p.add_argument("--spec", help="copula expression document (YAML file)")
        p.add_argument("--expr", help="copula expression given inline")

    p = sub.add_parser("eval", help="evaluate a copula at points")
    with_spec(p)
    p.add_argument("--point", action="append", help="comma-separated coordinates; repeatable")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("validate", help="check copula axioms on a grid")
    with_spec(p)
    p.add_argument("--grid", type=int, help="grid points per axis (default 101, or 10 for n-copulas)")
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("measures", help="Spearman rho, Kendall tau, tail coefficients, quadrant class")
    with_spec(p)
    p.add_argument("--kind", choices=("rho", "tau", "tails", "quadrant", "all"), default="all")
    p.add_argument("--tol", type=float)
    p.add_argument("--grid", type=int)
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("table", help="rho or tau table for power generators")
    p.add_argument("kind", choices=("rho", "tau"))
    p.add_argument("--bases", default=",".join(measures.TABLE_BASES))
    p.add_argument("--a", default="0.1,0.5,0.9")
    p.add_argument("--b", default="0.1,0.5,0.9")
    p.add_argument("--n", dest="n_values", default="0,1,2,3,4", help="iteration counts, 'inf' for the limit")
    p.add_argument("--tol", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sample", help="draw pseudo-random samples")
    with_spec(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--meta", action="store_true", help="write a .meta companion file")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("limit-diff", help="sup-distance of iterates to the limit copula")
    with_spec(p)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--grid", type=int)
    p.set_defaults(func=cmd_limit_diff)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SpecError, DomainError, ValidationError, SamplingError, ConvergenceError) as exc:
        print(f"rmmcopula: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
