"""Pointwise defect of a candidate solution and adaptive truncation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assemble import collocation_points
from .expr import EvalError
from .problem import PantographProblem
from .solve import FibSolution, solve_problem

__all__ = [
    "CONDITION_TOL",
    "ResidualReport",
    "AdaptiveResult",
    "residual",
    "condition_violation",
    "adaptive_solve",
]

CONDITION_TOL = 1e-9


@dataclass(frozen=True)
class ResidualReport:
    grid: np.ndarray
    E: np.ndarray  # nan where the equation could not be evaluated
    max_E: float
    n_used: int
    failed: dict = field(default_factory=dict)  # grid index -> error message


def residual(problem: PantographProblem, sol: FibSolution, grid) -> ResidualReport:
    """``E(x) = |y^(m)(x) - sum_t p_t(x) y^(k_t)(alpha_t x + beta_t) - g(x)|`` on *grid*."""
    grid = np.asarray(grid, dtype=float).reshape(-1)
    if not np.all(np.isfinite(grid)):
        raise ValueError("residual grid must be finite")
    defect = sol(grid, problem.m)
    failed = {}
    coefs = []
    for t in problem.terms:
        vals = np.empty(grid.size)
        for i, x in enumerate(grid):
            try:
                vals[i] = t.p(x)
            except EvalError as exc:
                vals[i] = np.nan
                failed.setdefault(i, str(exc))
        coefs.append(vals)
    for t, coef in zip(problem.terms, coefs):
        defect = defect - coef * sol(t.alpha * grid + t.beta, t.k)
    for i, x in enumerate(grid):
        try:
            defect[i] -= problem.g(x)
        except EvalError as exc:
            defect[i] = np.nan
            failed.setdefault(i, str(exc))
    E = np.abs(defect)
    ok = ~np.isnan(E)
    max_E = float(np.max(E[ok])) if np.any(ok) else float("nan")
    return ResidualReport(grid, E, max_E, sol.n, failed)


def condition_violation(problem: PantographProblem, sol: FibSolution) -> float:
    """Largest ``|sum c y^(k)(mu) - lambda| / (1 + |lambda|)`` over the conditions."""
    worst = 0.0
    for cond in problem.conditions:
        lhs = sum(ct.c * sol(ct.mu, ct.k) for ct in cond.terms)
        worst = max(worst, abs(lhs - cond.lam) / (1.0 + abs(cond.lam)))
    return worst


@dataclass(frozen=True)
class AdaptiveResult:
    solution: FibSolution
    report: ResidualReport
    history: list  # (n, max_E, conditions_ok) per attempted truncation
    converged: bool


def adaptive_solve(
    problem: PantographProblem,
    tol: float,
    n0: int | None = None,
    n_max: int = 32,
    conditions: str = "replace",
) -> AdaptiveResult:
    """Grow the truncation one step at a time until ``max E < tol``.

    ``E`` is measured at the collocation points of each truncation.  A
    truncation whose solution misses a condition by more than
    ``CONDITION_TOL`` does not count as converged.  When nothing converges by
    ``n_max`` the solution with the smallest ``max E`` is returned with
    ``converged=False``.
    """
    if n0 is None:
        n0 = problem.m + 1
    if n0 < problem.m + 1:
        raise ValueError(f"n0 must be at least m+1={problem.m + 1}")
    if n_max < n0:
        raise ValueError("n_max must be >= n0")
    if not tol >= 0:
        raise ValueError("tol must be non-negative")
    history = []
    best = None
    for n in range(n0, n_max + 1):
        sol = solve_problem(problem, n, conditions)
        rep = residual(problem, sol, collocation_points(problem.a, problem.b, n))
        cond_ok = condition_violation(problem, sol) <= CONDITION_TOL
        history.append((n, rep.max_E, cond_ok))
        if best is None or rep.max_E < best[1].max_E:
            best = (sol, rep)
        if cond_ok and rep.max_E < tol:
            return AdaptiveResult(sol, rep, history, True)
    return AdaptiveResult(best[0], best[1], history, False)
