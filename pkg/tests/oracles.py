"""Independent reference computations shared by the tests."""

import numpy as np
import sympy as sp

X = sp.Symbol("x")


def sympy_derivative_matrix(n):
    """D built from sympy's Fibonacci polynomials by exact re-expansion.

    Column j holds the basis coefficients of d/dx F_j.  Re-expansion solves
    the triangular monomial system in exact rationals.
    """
    polys = [sp.Poly(sp.fibonacci(r, X), X) for r in range(1, n + 1)]
    # M[p, r] = coefficient of x^p in F_{r+1}
    M = sp.zeros(n, n)
    for r, P in enumerate(polys):
        for (p,), c in P.terms():
            M[p, r] = c
    D = sp.zeros(n, n)
    for j, P in enumerate(polys):
        dP = sp.Poly(sp.diff(P.as_expr(), X), X)
        rhs = sp.zeros(n, 1)
        for (p,), c in dP.terms():
            rhs[p] = c
        D[:, j] = M.LUsolve(rhs)
    assert all(v.is_integer for v in D)
    return np.array(D.tolist(), dtype=np.int64)


def central_difference(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2 * h)


def fibonacci_numbers(count):
    out = [1, 1]
    while len(out) < count:
        out.append(out[-1] + out[-2])
    return out[:count]
