"""Golden benchmark: error tables for the three bundled examples.

Table truncations count the polynomial degree, so a table entry for ``N``
is solved with ``N + 1`` basis polynomials (and as many collocation points).
The comparison columns of other methods are read verbatim from
``data/paper_tables.csv`` and never recomputed.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .problem import PantographProblem, load_problem
from .solve import solve_problem

__all__ = [
    "BENCH_POINTS",
    "TABLE_TRUNCATIONS",
    "REFERENCE_LABEL",
    "BenchTable",
    "basis_size",
    "bundled_text",
    "bundled_problem",
    "reference_rows",
    "bench_example",
    "format_table",
    "tables_csv",
]

BENCH_POINTS = (0.2, 0.4, 0.6, 0.8, 1.0)
TABLE_TRUNCATIONS = {1: (3,), 2: (5, 9), 3: (5, 9, 12)}
REFERENCE_LABEL = "reference values from the paper"


def basis_size(table_n: int) -> int:
    """Number of basis polynomials behind a table truncation (its degree + 1)."""
    return table_n + 1


def bundled_text(filename: str) -> str:
    return resources.files("fibpant").joinpath("data", filename).read_text(encoding="utf-8")


def bundled_problem(example: int) -> PantographProblem:
    return load_problem(bundled_text(f"example{example}.pant"), name=f"example{example}")


def reference_rows() -> list[dict]:
    text = bundled_text("paper_tables.csv")
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    rows = []
    for row in csv.DictReader(lines):
        row["table"] = int(row["table"])
        row["example"] = int(row["example"])
        row["N"] = int(row["N"])
        row["x"] = float(row["x"])
        row["value"] = float(row["value"])
        rows.append(row)
    return rows


@dataclass
class BenchTable:
    example: int
    N: int
    n_basis: int
    xs: tuple
    errors: np.ndarray
    mode: str
    # (method, source, N) -> values at xs, from the reference file
    reference: dict = field(default_factory=dict)

    @property
    def published(self):
        """Published Fibonacci errors for this example and ``N``, if tabulated."""
        for (method, _, n), vals in self.reference.items():
            if method == "present" and n == self.N:
                return vals
        return None


def bench_example(example: int, truncations=None, conditions: str = "replace") -> list[BenchTable]:
    problem = bundled_problem(example)
    if problem.exact is None:
        raise ValueError(f"example {example} has no exact solution to compare against")
    refs = [r for r in reference_rows() if r["example"] == example]
    if truncations is None:
        truncations = TABLE_TRUNCATIONS[example]
    out = []
    for N in truncations:
        sol = solve_problem(problem, basis_size(N), conditions)
        xs = np.array(BENCH_POINTS)
        exact = np.array([problem.exact(x) for x in xs])
        errors = np.abs(sol(xs) - exact)
        table = BenchTable(example, N, sol.n, BENCH_POINTS, errors, sol.mode)
        # literature columns of every table that reports this truncation
        tables = {r["table"] for r in refs if r["method"] == "present" and r["N"] == N}
        for r in refs:
            if r["table"] not in tables:
                continue
            single = len({q["N"] for q in refs if q["table"] == r["table"] and q["method"] == "present"}) == 1
            if single or r["N"] == N:
                key = (r["method"], r["source"], r["N"])
                table.reference.setdefault(key, {})[r["x"]] = r["value"]
        table.reference = {
            k: tuple(v.get(x, float("nan")) for x in BENCH_POINTS) for k, v in table.reference.items()
        }
        out.append(table)
    return out


def _fmt(v: float, digits) -> str:
    return repr(float(v)) if digits is None else f"{v:.{digits}e}"


def format_table(table: BenchTable, digits=None) -> str:
    head = [f"Example {table.example}: absolute errors, N={table.N} ({table.n_basis} basis polynomials)"]
    cols = ["x", f"computed N={table.N}"]
    ref_keys = sorted(table.reference, key=lambda k: (k[0] != "present", k[0], k[2]))
    cols += [f"{m} N={n}*" for m, _, n in ref_keys]
    rows = []
    for i, x in enumerate(table.xs):
        row = [f"{x:.1f}", _fmt(table.errors[i], digits)]
        row += [_fmt(table.reference[k][i], 4 if digits is None else digits) for k in ref_keys]
        rows.append(row)
    widths = [max(len(c), *(len(r[j]) for r in rows)) for j, c in enumerate(cols)]
    line = "  ".join(c.rjust(w) for c, w in zip(cols, widths))
    head += [line, "-" * len(line)]
    head += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in rows]
    if ref_keys:
        head.append(f"* {REFERENCE_LABEL}: " + "; ".join(f"{m} = {s}" for m, s, _ in ref_keys))
    return "\n".join(head)


def tables_csv(tables, digits=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["example", "N", "n_basis", "x", "column", "kind", "value"])
    for t in tables:
        for i, x in enumerate(t.xs):
            w.writerow([t.example, t.N, t.n_basis, x, "computed", "computed", _fmt(t.errors[i], digits)])
            for (m, s, n), vals in t.reference.items():
                w.writerow([t.example, n, "", x, f"{m} ({s})", REFERENCE_LABEL, repr(vals[i])])
    return buf.getvalue()
