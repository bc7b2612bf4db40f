"""Command-line front end: ``fibpant <subcommand> ...``.

Exit status is 0 on success, 1 on diagnostics, solver or oracle errors and
non-convergence, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .assemble import AssemblyError, MODES, assemble_system, collocation_points
from .basis import derivative_matrix, monomial_coefficients
from .expr import EvalError, ParseError, parse
from .oracle import OracleUnavailable, integrate_reference
from .problem import Diagnostic, ProblemError, load_problem, validate
from .residual import adaptive_solve, condition_violation, residual
from .solve import FibSolution, solve_least_squares, solve_problem, solve_square


def _fmt(v, digits):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    return repr(float(v)) if digits is None else f"{float(v):.{digits}g}"


def emit(columns, rows, out="table", digits=None, meta=None, stream=None):
    """Print rows as an aligned table, CSV or JSON."""
    stream = stream or sys.stdout
    if out == "json":
        data = dict(meta or {})
        data["rows"] = [
            {c: (v if isinstance(v, (str, int)) or v is None else float(v)) for c, v in zip(columns, r)} for r in rows
        ]
        if digits is not None:
            data["rows"] = [
                {c: float(_fmt(v, digits)) if isinstance(v, float) else v for c, v in r.items()} for r in data["rows"]
            ]
        json.dump(data, stream, indent=2)
        stream.write("\n")
        return
    text = [[_fmt(v, digits) for v in r] for r in rows]
    if out == "csv":
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(columns)
        w.writerows(text)
        return
    for k, v in (meta or {}).items():
        stream.write(f"# {k}: {v}\n")
    widths = [max([len(c)] + [len(r[j]) for r in text]) for j, c in enumerate(columns)]
    stream.write("  ".join(c.rjust(w) for c, w in zip(columns, widths)) + "\n")
    for r in text:
        stream.write("  ".join(v.rjust(w) for v, w in zip(r, widths)) + "\n")


def _load(path_or_name, n=None):
    p = Path(path_or_name)
    if p.exists():
        return load_problem(p.read_text(encoding="utf-8"), n=n, name=p.stem)
    stem = p.name[:-5] if p.name.endswith(".pant") else p.name
    if stem in ("example1", "example2", "example3"):
        return load_problem(bench_mod.bundled_text(f"{stem}.pant"), n=n, name=stem)
    raise FileNotFoundError(f"no such problem file: {path_or_name}")


def _grid(points, a, b):
    if points is None:
        return np.linspace(a, b, 11)
    if "," in points:
        return np.array([float(v) for v in points.split(",") if v.strip()])
    return np.linspace(a, b, int(points))


def _truncation(args, problem):
    n = args.n if args.n is not None else problem.n_default
    if n is None:
        raise ProblemError([Diagnostic("error", "no truncation given; pass --n or set N in the problem file", "N")])
    return n


def _check(problem, n):
    diags = validate(problem, n)
    errors = [d for d in diags if d.severity == "error"]
    if errors:
        raise ProblemError(errors)
    for d in diags:
        print(d, file=sys.stderr)


def cmd_solve(args):
    problem = _load(args.file)
    n = _truncation(args, problem)
    _check(problem, n)
    system = assemble_system(problem, n, args.conditions)
    res = solve_square(system) if system.square else solve_least_squares(system)
    sol = FibSolution(n, res.A, res.mode, res.cond)
    if args.dump_system:
        np.savetxt(args.dump_system, system.augmented(), delimiter=",", fmt="%.17g")
    xs = _grid(args.grid, problem.a, problem.b)
    ys = sol(xs)
    columns = ["x", "y"]
    rows = [[x, y] for x, y in zip(xs, ys)]
    if problem.exact is not None:
        columns += ["y_exact", "abs_error"]
        for r in rows:
            ye = problem.exact(r[0])
            r += [ye, abs(r[1] - ye)]
    meta = {"problem": problem.name, "N": n, "mode": sol.mode, "cond_estimate": sol.cond}
    if args.out == "json":
        meta["coefficients"] = [float(v) for v in sol.A]
    emit(columns, rows, args.out, args.digits, meta)
    return 0


def cmd_residual(args):
    problem = _load(args.file)
    n = _truncation(args, problem)
    _check(problem, n)
    sol = solve_problem(problem, n, args.conditions)
    grids = [("collocation", collocation_points(problem.a, problem.b, n))]
    if args.dense:
        grids.append(("dense", np.linspace(problem.a, problem.b, 10 * (n - 1) + 1)))
    rows = []
    summary = {"problem": problem.name, "N": n, "condition_violation": condition_violation(problem, sol)}
    for label, g in grids:
        rep = residual(problem, sol, g)
        summary[f"max_E_{label}"] = rep.max_E
        rows += [[label, x, e] for x, e in zip(rep.grid, rep.E)]
        for i, msg in rep.failed.items():
            print(f"warning: {label} point {rep.grid[i]!r}: {msg}", file=sys.stderr)
    emit(["grid", "x", "E"], rows, args.out, args.digits, summary)
    return 0


def cmd_adapt(args):
    problem = _load(args.file)
    n0 = args.n0 if args.n0 is not None else problem.m + 1
    res = adaptive_solve(problem, args.tol, n0, args.nmax, args.conditions)
    rows = [[n, e, "yes" if ok else "no"] for n, e, ok in res.history]
    meta = {
        "problem": problem.name,
        "tol": args.tol,
        "converged": res.converged,
        "N": res.solution.n,
        "max_E": res.report.max_E,
    }
    emit(["N", "max_E", "conditions_ok"], rows, args.out, args.digits, meta)
    if not res.converged:
        print(f"not converged: best max_E={res.report.max_E!r} at N={res.solution.n}", file=sys.stderr)
        return 1
    return 0


def cmd_bench(args):
    examples = [1, 2, 3] if args.example == "all" else [int(args.example)]
    tables = []
    for ex in examples:
        truncs = [args.n] if args.n is not None else None
        tables += bench_mod.bench_example(ex, truncs, args.conditions)
    if args.out == "csv":
        sys.stdout.write(bench_mod.tables_csv(tables, args.digits))
    elif args.out == "json":
        data = [
            {
                "example": t.example,
                "N": t.N,
                "n_basis": t.n_basis,
                "x": list(t.xs),
                "computed": [float(v) for v in t.errors],
                "reference": [
                    {"method": m, "source": s, "N": n, "label": bench_mod.REFERENCE_LABEL, "values": list(v)}
                    for (m, s, n), v in t.reference.items()
                ],
            }
            for t in tables
        ]
        json.dump(data, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        print("\n\n".join(bench_mod.format_table(t, args.digits) for t in tables))
    return 0


def cmd_oracle(args):
    problem = _load(args.file)
    traj = integrate_reference(problem, args.h)
    xs = _grid(args.grid, problem.a, problem.b) if args.grid else traj.breakpoints
    ys = traj(xs)
    columns = ["x", "y"]
    rows = [[x, y] for x, y in zip(xs, ys)]
    if problem.exact is not None:
        columns += ["y_exact", "abs_error"]
        for r in rows:
            ye = problem.exact(r[0])
            r += [ye, abs(r[1] - ye)]
    emit(columns, rows, args.out, args.digits, {"problem": problem.name, "h": args.h})
    return 0


def cmd_basis(args):
    n = args.n
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["# monomial coefficients of F_r, columns x^0..x^%d" % (n - 1)])
    w.writerow(["r"] + [f"x^{j}" for j in range(n)])
    for r, row in enumerate(monomial_coefficients(n), start=1):
        w.writerow([r] + row)
    w.writerow(["# operational derivative matrix D"])
    w.writerow(["i"] + [f"j={j}" for j in range(1, n + 1)])
    for i, row in enumerate(derivative_matrix(n), start=1):
        w.writerow([i] + [int(v) for v in row])
    sys.stdout.write(out.getvalue())
    return 0


def cmd_expr(args):
    e = parse(args.expression)
    v = e(args.x)
    print(_fmt(v, args.digits))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="fibpant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def common(p, out=True):
        if out:
            p.add_argument("--out", choices=("table", "csv", "json"), default="table")
        p.add_argument("--digits", type=int, default=None, help="significant digits (default: full precision)")

    def modes(p):
        p.add_argument("--conditions", choices=MODES, default="replace", help="fold conditions by row replacement or append")

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("file")
    p.add_argument("--n", type=int, help="number of basis polynomials (default: the file's N)")
    p.add_argument("--grid", help="output points: a count of uniform points or a comma list")
    p.add_argument("--dump-system", metavar="PATH", help="write [W* : G*] as CSV")
    modes(p)
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("residual", help="report the defect E(x) of a solution")
    p.add_argument("file")
    p.add_argument("--n", type=int)
    p.add_argument("--dense", action="store_true", help="also report on a 10x denser uniform grid")
    modes(p)
    common(p)
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("adapt", help="increase N until the collocation defect is below --tol")
    p.add_argument("file")
    p.add_argument("--tol", type=float, required=True)
    p.add_argument("--n0", type=int)
    p.add_argument("--nmax", type=int, default=32)
    modes(p)
    common(p)
    p.set_defaults(func=cmd_adapt)

    p = sub.add_parser("bench", help="regenerate the error tables of the bundled examples")
    p.add_argument("example", choices=("1", "2", "3", "all"))
    p.add_argument("--n", type=int, help="table truncation (polynomial degree); default: every tabulated N")
    modes(p)
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="RK4 reference trajectory for first-order problems")
    p.add_argument("file")
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("--grid", help="output points (default: the integrator's own steps)")
    common(p)
    p.set_defaults(func=cmd_oracle, out="csv")

    p = sub.add_parser("basis", help="dump Fibonacci polynomials and D as CSV")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("expr", help="expression utilities")
    esub = p.add_subparsers(dest="expr_command", metavar="action")
    esub.required = True
    pe = esub.add_parser("eval", help="evaluate an expression at x")
    pe.add_argument("expression")
    pe.add_argument("x", type=float)
    common(pe, out=False)
    pe.set_defaults(func=cmd_expr)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 1:
        parser.error("--n must be positive")
    try:
        return args.func(args)
    except ProblemError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return 1
    except (AssemblyError, EvalError, ParseError, OracleUnavailable, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
