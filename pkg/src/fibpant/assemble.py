"""Collocation system assembly.

Builds the square system ``W A = G`` obtained by collocating the equation at
uniformly spaced points, then folds in the ``m`` condition rows either by
overwriting the last ``m`` rows or by appending them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import basis_table, eval_basis, matrix_power
from .expr import EvalError
from .problem import PantographProblem

__all__ = [
    "AssemblyError",
    "LinearSystem",
    "collocation_points",
    "basis_matrix",
    "shifted_basis_matrix",
    "assemble_fundamental",
    "condition_rows",
    "apply_conditions",
    "assemble_system",
]

MODES = ("replace", "append")


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True)
class LinearSystem:
    W: np.ndarray
    G: np.ndarray
    replaced_rows: frozenset  # 0-based row indices overwritten by conditions
    mode: str = "replace"

    @property
    def square(self) -> bool:
        return self.W.shape[0] == self.W.shape[1]

    def augmented(self) -> np.ndarray:
        return np.column_stack([self.W, self.G])


def collocation_points(a: float, b: float, n: int) -> np.ndarray:
    """``x_i = a + (b - a)(i - 1)/(n - 1)`` for ``i = 1..n``."""
    if not a < b:
        raise ValueError(f"collocation interval requires a < b, got [{a}, {b}]")
    if n < 1:
        raise ValueError(f"need at least one collocation point, got {n}")
    if n == 1:
        return np.array([float(a)])
    i = np.arange(n)
    pts = a + (b - a) * i / (n - 1)
    pts[-1] = b
    return pts


def basis_matrix(grid, n: int) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.size != n:
        raise ValueError(f"grid has {grid.size} points, expected {n}")
    return basis_table(grid, n)


def shifted_basis_matrix(grid, alpha: float, beta: float, n: int) -> np.ndarray:
    """Basis rows evaluated at the functional arguments ``alpha x_i + beta``."""
    grid = np.asarray(grid, dtype=float)
    if grid.size != n:
        raise ValueError(f"grid has {grid.size} points, expected {n}")
    return basis_table(alpha * grid + beta, n)


def _sample(expr, grid, what):
    vals = np.empty(len(grid))
    for i, x in enumerate(grid):
        try:
            vals[i] = expr(x)
        except EvalError as exc:
            raise AssemblyError(f"{what}: {exc}") from exc
    return vals


def assemble_fundamental(problem: PantographProblem, n: int, grid=None):
    """Return ``(W, G)`` with ``W = F D^m - sum_t diag(p_t) Fbar_t D^k_t``."""
    if grid is None:
        grid = collocation_points(problem.a, problem.b, n)
    F = basis_matrix(grid, n)
    W = F @ matrix_power(n, problem.m)
    for j, t in enumerate(problem.terms):
        coef = _sample(t.p, grid, f"term {j} coefficient '{t.p}'")
        Fbar = shifted_basis_matrix(grid, t.alpha, t.beta, n)
        # diag(p) @ M is a row scaling
        W = W - coef[:, None] * (Fbar @ matrix_power(n, t.k))
    G = _sample(problem.g, grid, f"forcing '{problem.g}'")
    return W, G


def condition_rows(problem: PantographProblem, n: int):
    """Return ``(U, lambdas)``, one row per condition."""
    m = len(problem.conditions)
    U = np.zeros((m, n))
    lams = np.zeros(m)
    for r, cond in enumerate(problem.conditions):
        for ct in cond.terms:
            U[r] += ct.c * (eval_basis(ct.mu, n) @ matrix_power(n, ct.k))
        lams[r] = cond.lam
    return U, lams


def apply_conditions(W, G, U, lambdas, mode: str = "replace") -> LinearSystem:
    """Fold condition rows into ``[W : G]``.

    ``replace`` overwrites the last ``len(U)`` rows (those of the largest
    collocation points); ``append`` stacks them underneath.
    """
    W = np.array(W, dtype=float)
    G = np.array(G, dtype=float)
    U = np.asarray(U, dtype=float).reshape(-1, W.shape[1])
    lambdas = np.asarray(lambdas, dtype=float).reshape(-1)
    m = U.shape[0]
    if lambdas.size != m or G.size != W.shape[0]:
        raise ValueError("inconsistent system dimensions")
    if mode == "replace":
        if m > W.shape[0]:
            raise ValueError(f"cannot replace {m} rows of a {W.shape[0]}-row system")
        rows = range(W.shape[0] - m, W.shape[0])
        if m:
            W[-m:] = U
            G[-m:] = lambdas
        return LinearSystem(W, G, frozenset(rows), mode)
    if mode == "append":
        return LinearSystem(np.vstack([W, U]), np.concatenate([G, lambdas]), frozenset(), mode)
    raise ValueError(f"unknown condition mode {mode!r}; expected one of {MODES}")


def assemble_system(problem: PantographProblem, n: int, mode: str = "replace") -> LinearSystem:
    W, G = assemble_fundamental(problem, n)
    U, lams = condition_rows(problem, n)
    return apply_conditions(W, G, U, lams, mode)
