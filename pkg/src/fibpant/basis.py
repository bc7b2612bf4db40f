"""Fibonacci polynomial basis and its operational derivative matrix.

The basis is ``F_1 = 1``, ``F_2 = x``, ``F_{r+1} = x F_r + F_{r-1}``.  A
truncated series ``y(x) = sum_r a_r F_r(x)`` is stored as the coefficient
vector ``A`` and its k-th derivative is ``F(x) @ D^k @ A``.

Documentation counts basis polynomials from 1 like the usual notation; arrays
are 0-based, so ``row[r - 1]`` holds ``F_r``.  That shift happens here only.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "eval_basis",
    "basis_table",
    "derivative_matrix",
    "matrix_power",
    "eval_series",
    "monomial_coefficients",
]

# sin((j - i) * pi / 2) for (j - i) mod 4
_SINE_CYCLE = (0, 1, 0, -1)


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"truncation must be a positive integer, got {n!r}")
    return int(n)


def eval_basis(x: float, n: int) -> np.ndarray:
    """Return ``[F_1(x), ..., F_n(x)]`` by forward recurrence."""
    n = _check_n(n)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"basis abscissa must be finite, got {x!r}")
    row = np.empty(n)
    row[0] = 1.0
    if n > 1:
        row[1] = x
    for r in range(2, n):
        row[r] = x * row[r - 1] + row[r - 2]
    return row


def basis_table(xs, n: int) -> np.ndarray:
    """Vectorised :func:`eval_basis`: one row per abscissa in *xs*."""
    n = _check_n(n)
    xs = np.asarray(xs, dtype=float).reshape(-1)
    if not np.all(np.isfinite(xs)):
        raise ValueError("basis abscissae must be finite")
    out = np.empty((xs.size, n))
    out[:, 0] = 1.0
    if n > 1:
        out[:, 1] = xs
    for r in range(2, n):
        out[:, r] = xs * out[:, r - 1] + out[:, r - 2]
    return out


@lru_cache(maxsize=None)
def _derivative_matrix(n: int) -> np.ndarray:
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            # 1-based row index i + 1 multiplies the sine factor
            d[i, j] = (i + 1) * _SINE_CYCLE[(j - i) % 4]
    d.setflags(write=False)
    return d


def derivative_matrix(n: int) -> np.ndarray:
    """Operational matrix ``D`` with ``F'(x) = F(x) @ D``.

    Entry ``(i, j)`` (1-based) is ``i * sin((j - i) pi / 2)`` above the
    diagonal and zero elsewhere.  The sine is resolved by case on
    ``(j - i) mod 4`` so every entry is an exact integer.  The returned array
    is read-only and shared between callers.
    """
    return _derivative_matrix(_check_n(n))


@lru_cache(maxsize=None)
def _matrix_power(n: int, k: int) -> np.ndarray:
    if k == 0:
        p = np.eye(n)
    elif k >= n:
        p = np.zeros((n, n))
    else:
        p = _matrix_power(n, k - 1) @ _derivative_matrix(n)
    p.setflags(write=False)
    return p


def matrix_power(d: np.ndarray | int, k: int) -> np.ndarray:
    """``D^k`` for the operational matrix of size ``n``.

    *d* may be the matrix returned by :func:`derivative_matrix` or just its
    size.  Powers are built by repeated multiplication and memoised.
    """
    if int(k) != k or k < 0:
        raise ValueError(f"power must be a non-negative integer, got {k!r}")
    n = d if isinstance(d, (int, np.integer)) else np.shape(d)[0]
    return _matrix_power(_check_n(int(n)), int(k))


def eval_series(a, x: float, k: int = 0) -> float:
    """k-th derivative at *x* of the series with Fibonacci coefficients *a*."""
    a = np.asarray(a, dtype=float).reshape(-1)
    n = a.size
    if k >= n:
        if not math.isfinite(float(x)):
            raise ValueError(f"series abscissa must be finite, got {x!r}")
        return 0.0
    return float(eval_basis(x, n) @ (matrix_power(n, k) @ a))


def monomial_coefficients(n: int) -> list[list[int]]:
    """Integer power-basis coefficients of ``F_1 .. F_n``.

    Row ``r - 1`` lists the coefficients of ``x^0, x^1, ...`` in ``F_r``,
    padded to length ``n``.
    """
    n = _check_n(n)
    rows = [[1] + [0] * (n - 1)]
    if n > 1:
        rows.append([0, 1] + [0] * (n - 2))
    for r in range(2, n):
        shifted = [0] + rows[r - 1][:-1]
        rows.append([s + t for s, t in zip(shifted, rows[r - 2])])
    return rows
