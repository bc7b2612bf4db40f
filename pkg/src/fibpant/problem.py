"""Generalized pantograph problems and their JSON problem-file form.

The equation is::

    y^(m)(x) = sum_t p_t(x) y^(k_t)(alpha_t x + beta_t) + g(x),  a <= x <= b

with ``m`` mixed conditions ``sum_s c_s y^(k_s)(mu_s) = lambda_r``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .expr import BinOp, Expr, Num, ParseError, parse, to_source

__all__ = [
    "FunctionalTerm",
    "ConditionTerm",
    "Condition",
    "PantographProblem",
    "Diagnostic",
    "ProblemError",
    "validate",
    "load_problem",
    "read_problem",
    "dump_problem",
]


@dataclass(frozen=True)
class FunctionalTerm:
    """One ``p(x) y^(k)(alpha x + beta)`` summand of the right-hand side."""

    k: int
    p: Expr
    alpha: float = 1.0
    beta: float = 0.0


@dataclass(frozen=True)
class ConditionTerm:
    k: int
    c: float
    mu: float


@dataclass(frozen=True)
class Condition:
    terms: tuple[ConditionTerm, ...]
    lam: float

    @classmethod
    def initial(cls, k: int, value: float, at: float) -> "Condition":
        """The condition ``y^(k)(at) = value``."""
        return cls((ConditionTerm(k, 1.0, at),), value)


@dataclass(frozen=True)
class PantographProblem:
    m: int
    interval: tuple[float, float]
    terms: tuple[FunctionalTerm, ...]
    g: Expr
    conditions: tuple[Condition, ...]
    exact: Optional[Expr] = None
    n_default: Optional[int] = None
    name: str = field(default="", compare=False)

    @property
    def a(self) -> float:
        return self.interval[0]

    @property
    def b(self) -> float:
        return self.interval[1]

    def scaled(self, factor: float) -> "PantographProblem":
        """Copy with ``g`` and every condition right-hand side multiplied by *factor*."""
        return PantographProblem(
            self.m,
            self.interval,
            self.terms,
            BinOp("*", Num(float(factor)), self.g),
            tuple(Condition(c.terms, factor * c.lam) for c in self.conditions),
            None,
            self.n_default,
            self.name,
        )


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    message: str
    location: str = ""

    def __str__(self):
        where = f"{self.location}: " if self.location else ""
        return f"{self.severity}: {where}{self.message}"


class ProblemError(ValueError):
    """Raised when a problem file or problem fails validation."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


def _err(msg, loc=""):
    return Diagnostic("error", msg, loc)


def validate(problem: PantographProblem, n: Optional[int] = None) -> list[Diagnostic]:
    """Check *problem* for truncation *n*; never raises.

    Errors make the problem unsolvable.  A functional argument that leaves
    ``[a, b]`` is only a warning: the basis is global, but extrapolated
    evaluation can hurt conditioning.
    """
    out: list[Diagnostic] = []
    m = problem.m
    a, b = problem.interval
    if not (isinstance(m, int) and m >= 1):
        out.append(_err(f"order must be a positive integer, got {m!r}", "order"))
        return out
    if not (math.isfinite(a) and math.isfinite(b)):
        out.append(_err("interval endpoints must be finite", "interval"))
    elif a >= b:
        out.append(_err(f"interval requires a < b, got [{a}, {b}]", "interval"))
    if n is None:
        n = problem.n_default
    if n is not None and m + 1 > n:
        out.append(_err(f"m+1 <= N violated (m={m}, N={n})", "N"))
    for i, t in enumerate(problem.terms):
        loc = f"terms[{i}]"
        if not 0 <= t.k < m:
            out.append(_err(f"derivative order k={t.k} must satisfy 0 <= k <= m-1={m - 1}", loc))
        if not (math.isfinite(t.alpha) and math.isfinite(t.beta)):
            out.append(_err("alpha and beta must be finite", loc))
            continue
        if a < b:
            lo, hi = sorted((t.alpha * a + t.beta, t.alpha * b + t.beta))
            if lo < a or hi > b:
                out.append(
                    Diagnostic(
                        "warning",
                        f"functional argument leaves [a,b]: {t.alpha}*x + {t.beta} spans [{lo}, {hi}]",
                        loc,
                    )
                )
    if len(problem.conditions) != m:
        out.append(_err(f"expected exactly m={m} conditions, got {len(problem.conditions)}", "conditions"))
    for r, cond in enumerate(problem.conditions):
        loc = f"conditions[{r}]"
        if not cond.terms:
            out.append(_err("condition has no terms", loc))
        if not math.isfinite(cond.lam):
            out.append(_err("lambda must be finite", loc))
        for s, ct in enumerate(cond.terms):
            tloc = f"{loc}.terms[{s}]"
            if not 0 <= ct.k < m:
                out.append(_err(f"derivative order k={ct.k} must satisfy 0 <= k <= m-1={m - 1}", tloc))
            if not math.isfinite(ct.c):
                out.append(_err("coefficient c must be finite", tloc))
            if not (a <= ct.mu <= b):
                out.append(_err(f"evaluation point mu={ct.mu} outside [{a}, {b}]", tloc))
    return out


# ---------------------------------------------------------------------------
# Problem files

_TOP_FIELDS = {"order", "interval", "terms", "g", "conditions", "exact", "N", "name"}
_TERM_FIELDS = {"k", "p", "alpha", "beta"}
_COND_FIELDS = {"terms", "lambda"}
_CTERM_FIELDS = {"k", "c", "mu"}


class _Reader:
    def __init__(self):
        self.diags: list[Diagnostic] = []

    def fail(self, msg, loc):
        self.diags.append(_err(msg, loc))

    def obj(self, value, fields, required, loc):
        if not isinstance(value, dict):
            self.fail("expected an object", loc)
            return None
        for key in value:
            if key not in fields:
                self.fail(f"unknown field {key!r}", f"{loc}.{key}" if loc else key)
        ok = True
        for key in required:
            if key not in value:
                self.fail(f"missing required field {key!r}", loc or key)
                ok = False
        return value if ok else None

    def integer(self, value, loc):
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(f"expected an integer, got {value!r}", loc)
            return None
        return value

    def real(self, value, loc):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"expected a number, got {value!r}", loc)
            return None
        return float(value)

    def expr(self, value, loc):
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = repr(value)
        if not isinstance(value, str):
            self.fail(f"expected an expression string, got {value!r}", loc)
            return None
        try:
            return parse(value)
        except ParseError as exc:
            self.fail(f"{exc.message} (offset {exc.offset})", loc)
            return None

    def array(self, value, loc):
        if not isinstance(value, list):
            self.fail("expected an array", loc)
            return None
        return value


def load_problem(text: str, n: Optional[int] = None, name: str = "") -> PantographProblem:
    """Parse problem-file *text*; raise :class:`ProblemError` on any error.

    Validation errors from :func:`validate` are included.  Warnings are not
    raised; call :func:`validate` to see them.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError([_err(f"malformed JSON: {exc.msg}", f"line {exc.lineno} col {exc.colno}")]) from None
    rd = _Reader()
    top = rd.obj(data, _TOP_FIELDS, ("order", "interval", "terms", "g", "conditions"), "")
    if top is None:
        raise ProblemError(rd.diags)

    m = rd.integer(top["order"], "order")
    interval = None
    iv = rd.array(top["interval"], "interval")
    if iv is not None:
        if len(iv) != 2:
            rd.fail("interval must have exactly two entries", "interval")
        else:
            ends = [rd.real(v, f"interval[{i}]") for i, v in enumerate(iv)]
            if None not in ends:
                interval = (ends[0], ends[1])

    terms = []
    for i, raw in enumerate(rd.array(top["terms"], "terms") or []):
        loc = f"terms[{i}]"
        t = rd.obj(raw, _TERM_FIELDS, ("k", "p"), loc)
        if t is None:
            continue
        k = rd.integer(t["k"], f"{loc}.k")
        p = rd.expr(t["p"], f"{loc}.p")
        alpha = rd.real(t.get("alpha", 1.0), f"{loc}.alpha")
        beta = rd.real(t.get("beta", 0.0), f"{loc}.beta")
        if None not in (k, p, alpha, beta):
            terms.append(FunctionalTerm(k, p, alpha, beta))

    g = rd.expr(top["g"], "g")

    conditions = []
    for r, raw in enumerate(rd.array(top["conditions"], "conditions") or []):
        loc = f"conditions[{r}]"
        c = rd.obj(raw, _COND_FIELDS, ("terms", "lambda"), loc)
        if c is None:
            continue
        lam = rd.real(c["lambda"], f"{loc}.lambda")
        cterms = []
        for s, rawt in enumerate(rd.array(c["terms"], f"{loc}.terms") or []):
            tloc = f"{loc}.terms[{s}]"
            ct = rd.obj(rawt, _CTERM_FIELDS, ("k", "mu"), tloc)
            if ct is None:
                continue
            k = rd.integer(ct["k"], f"{tloc}.k")
            coef = rd.real(ct.get("c", 1.0), f"{tloc}.c")
            mu = rd.real(ct["mu"], f"{tloc}.mu")
            if None not in (k, coef, mu):
                cterms.append(ConditionTerm(k, coef, mu))
        if lam is not None:
            conditions.append(Condition(tuple(cterms), lam))

    exact = rd.expr(top["exact"], "exact") if "exact" in top else None
    n_default = None
    if "N" in top:
        n_default = rd.integer(top["N"], "N")
    if "name" in top and isinstance(top["name"], str):
        name = name or top["name"]

    if rd.diags:
        raise ProblemError(rd.diags)
    problem = PantographProblem(m, interval, tuple(terms), g, tuple(conditions), exact, n_default, name)
    errors = [d for d in validate(problem, n) if d.severity == "error"]
    if errors:
        raise ProblemError(errors)
    return problem


def read_problem(path, n: Optional[int] = None) -> PantographProblem:
    from pathlib import Path

    path = Path(path)
    return load_problem(path.read_text(encoding="utf-8"), n=n, name=path.stem)


def dump_problem(problem: PantographProblem) -> str:
    """Serialize *problem* to problem-file text."""
    data = {
        "order": problem.m,
        "interval": list(problem.interval),
        "terms": [
            {"k": t.k, "p": to_source(t.p), "alpha": t.alpha, "beta": t.beta}
            for t in problem.terms
        ],
        "g": to_source(problem.g),
        "conditions": [
            {"terms": [{"k": ct.k, "c": ct.c, "mu": ct.mu} for ct in c.terms], "lambda": c.lam}
            for c in problem.conditions
        ],
    }
    if problem.exact is not None:
        data["exact"] = to_source(problem.exact)
    if problem.n_default is not None:
        data["N"] = problem.n_default
    if problem.name:
        data["name"] = problem.name
    return json.dumps(data, indent=2) + "\n"
