"""Linear solves for the Fibonacci coefficients.

Square systems go through LU with partial pivoting.  A pivot smaller than
``PIVOT_TOL * max|W*|`` is treated as a singular system and the solve falls
back to least squares (complete orthogonal factorization with column pivoting,
minimum-norm among minimizers).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .assemble import LinearSystem, assemble_system
from .basis import basis_table, matrix_power
from .problem import PantographProblem, ProblemError, validate

__all__ = [
    "PIVOT_TOL",
    "FibSolution",
    "SolveResult",
    "solve_square",
    "solve_least_squares",
    "solve_problem",
]

PIVOT_TOL = 1e-12

SQUARE_LU = "square-LU"
LEAST_SQUARES = "least-squares"


@dataclass(frozen=True)
class SolveResult:
    A: np.ndarray
    mode: str
    cond: float
    rank: int


@dataclass(frozen=True)
class FibSolution:
    """Truncated Fibonacci series ``y(x) = F(x) A``."""

    n: int
    A: np.ndarray
    mode: str = SQUARE_LU
    cond: float = 1.0

    def __call__(self, x, k: int = 0):
        """k-th derivative at *x* (scalar or array)."""
        scalar = np.ndim(x) == 0
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        if k >= self.n:
            vals = np.zeros(xs.shape)
        else:
            vals = basis_table(xs, self.n) @ (matrix_power(self.n, k) @ self.A)
        return float(vals[0]) if scalar else vals


def _lu(W, G) -> SolveResult | None:
    scale = np.max(np.abs(W)) if W.size else 0.0
    if scale == 0.0:
        return None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(W, check_finite=True)
    if np.min(np.abs(np.diag(lu))) < PIVOT_TOL * scale:
        return None
    A = sla.lu_solve((lu, piv), G)
    anorm = np.linalg.norm(W, 1)
    gecon = sla.get_lapack_funcs("gecon", (lu,))
    rcond, _ = gecon(lu, anorm, norm="1")
    cond = 1.0 / rcond if rcond > 0 else np.inf
    return SolveResult(A, SQUARE_LU, max(float(cond), 1.0), W.shape[1])


def _lstsq(W, G) -> SolveResult:
    if W.shape[0] < W.shape[1]:
        raise ValueError(f"least squares needs rows >= columns, got {W.shape}")
    if not np.any(W):
        warnings.warn("rank-0 system: returning the zero vector", RuntimeWarning, stacklevel=3)
        return SolveResult(np.zeros(W.shape[1]), LEAST_SQUARES, np.inf, 0)
    A, _, rank, _ = sla.lstsq(W, G, lapack_driver="gelsy")
    sv = np.linalg.svd(W, compute_uv=False)
    cond = sv[0] / sv[-1] if sv[-1] > 0 else np.inf
    return SolveResult(A, LEAST_SQUARES, float(cond), int(rank))


def solve_square(sys: LinearSystem | tuple) -> SolveResult:
    """LU solve of a square system, falling back to least squares when singular."""
    W, G = (sys.W, sys.G) if isinstance(sys, LinearSystem) else sys
    W = np.asarray(W, dtype=float)
    G = np.asarray(G, dtype=float)
    if W.shape[0] != W.shape[1]:
        raise ValueError(f"square solve needs a square matrix, got {W.shape}")
    return _lu(W, G) or _lstsq(W, G)


def solve_least_squares(sys: LinearSystem | tuple) -> SolveResult:
    W, G = (sys.W, sys.G) if isinstance(sys, LinearSystem) else sys
    return _lstsq(np.asarray(W, dtype=float), np.asarray(G, dtype=float))


def solve_problem(problem: PantographProblem, n: int, conditions: str = "replace") -> FibSolution:
    """Assemble and solve *problem* with ``n`` basis polynomials.

    ``conditions`` is ``"replace"`` (square system, LU) or ``"append"``
    (overdetermined, least squares).
    """
    errors = [d for d in validate(problem, n) if d.severity == "error"]
    if errors:
        raise ProblemError(errors)
    sys = assemble_system(problem, n, conditions)
    res = solve_square(sys) if sys.square else solve_least_squares(sys)
    return FibSolution(n, res.A, res.mode, res.cond)
