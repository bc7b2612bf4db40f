"""Independent reference solutions.

``exact_solution`` returns the closed forms of the three bundled examples.
``integrate_reference`` is a classical RK4 forward integrator for first-order
initial-value problems whose functional arguments never look ahead; delayed
values are read from a cubic Hermite interpolant of the trajectory built so
far.  It shares nothing with the collocation path except expression
evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .expr import Expr, parse
from .problem import PantographProblem

__all__ = [
    "EXACT_SOLUTIONS",
    "OracleUnavailable",
    "DenseTrajectory",
    "exact_solution",
    "integrate_reference",
]

EXACT_SOLUTIONS = {
    1: "x^2",
    2: "exp(x)",
    3: "exp(-x)*cos(x)",
}


class OracleUnavailable(ValueError):
    pass


def exact_solution(example: int) -> Expr:
    try:
        return parse(EXACT_SOLUTIONS[int(example)])
    except (KeyError, ValueError):
        raise KeyError(f"no exact solution for example {example!r}; known: {sorted(EXACT_SOLUTIONS)}") from None


def _hermite(t0, t1, y0, y1, f0, f1, x):
    h = t1 - t0
    s = (x - t0) / h
    s2 = s * s
    s3 = s2 * s
    return (
        (2 * s3 - 3 * s2 + 1) * y0
        + (s3 - 2 * s2 + s) * h * f0
        + (-2 * s3 + 3 * s2) * y1
        + (s3 - s2) * h * f1
    )


@dataclass(frozen=True)
class DenseTrajectory:
    """Piecewise cubic Hermite solution on ``breakpoints``."""

    breakpoints: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    m: int = 1

    @property
    def interval(self):
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        t = self.breakpoints
        span = t[-1] - t[0]
        if np.any(xs < t[0] - 1e-12 * span) or np.any(xs > t[-1] + 1e-12 * span):
            raise ValueError(f"trajectory evaluated outside [{t[0]}, {t[-1]}]")
        j = np.clip(np.searchsorted(t, xs, side="right") - 1, 0, t.size - 2)
        out = _hermite(t[j], t[j + 1], self.values[j], self.values[j + 1], self.slopes[j], self.slopes[j + 1], xs)
        return float(out[0]) if scalar else out


def _initial_value(problem: PantographProblem) -> float:
    if len(problem.conditions) != 1 or len(problem.conditions[0].terms) != 1:
        raise OracleUnavailable("oracle needs a single initial condition y(a) = value")
    cond = problem.conditions[0]
    ct = cond.terms[0]
    if ct.k != 0 or ct.mu != problem.a or ct.c == 0:
        raise OracleUnavailable("oracle needs the condition to fix y at the left endpoint")
    return cond.lam / ct.c


def integrate_reference(problem: PantographProblem, h: float = 1e-3) -> DenseTrajectory:
    """RK4 with cubic Hermite dense output for ``y' = sum p y(alpha x + beta) + g``.

    Requires ``m = 1``, an initial condition at ``a`` and
    ``a <= alpha x + beta <= x`` on ``[a, b]`` for every term.  The step is
    shrunk so that a whole number of steps covers the interval.
    """
    if problem.m != 1:
        raise OracleUnavailable(f"oracle supports first-order problems only, got m={problem.m}")
    if not h > 0:
        raise ValueError("step size must be positive")
    a, b = problem.interval
    terms = []
    for i, t in enumerate(problem.terms):
        for x in (a, b):
            arg = t.alpha * x + t.beta
            if arg > x + 1e-14 * (1 + abs(x)) or arg < a - 1e-14 * (1 + abs(a)):
                raise OracleUnavailable(
                    f"term {i}: argument {t.alpha}*x + {t.beta} looks ahead or before a at x={x}"
                )
        if t.k != 0:
            raise OracleUnavailable(f"term {i}: derivative order {t.k} in a first-order problem")
        terms.append((t.p, t.alpha, t.beta, t.alpha == 1.0 and t.beta == 0.0))

    steps = max(1, math.ceil((b - a) / h - 1e-9))
    ts = a + (b - a) * np.arange(steps + 1) / steps
    ts[-1] = b
    ys = np.empty(steps + 1)
    fs = np.empty(steps + 1)
    ys[0] = _initial_value(problem)
    g = problem.g

    def lookup(arg, n, cur):
        # completed history up to ts[n]; cur describes the step in progress
        if arg <= ts[n]:
            j = min(max(int(np.searchsorted(ts, arg, side="right")) - 1, 0), max(n - 1, 0))
            if n == 0:
                return ys[0]
            return _hermite(ts[j], ts[j + 1], ys[j], ys[j + 1], fs[j], fs[j + 1], arg)
        return _hermite(ts[n], ts[n + 1], ys[n], cur[0], fs[n], cur[1], arg)

    def rhs(x, y, n, cur):
        total = g(x)
        for p, alpha, beta, identity in terms:
            yd = y if identity else lookup(alpha * x + beta, n, cur)
            total += p(x) * yd
        return total

    fs[0] = rhs(a, ys[0], 0, (ys[0], 0.0))
    for n in range(steps):
        t0, dt = ts[n], ts[n + 1] - ts[n]
        y0 = ys[n]
        # provisional end state for delayed arguments that fall inside this step
        cur = (y0 + dt * fs[n], fs[n])
        looks_inside = any(
            not identity and alpha * ts[n + 1] + beta > t0 for _, alpha, beta, identity in terms
        )
        for _ in range(20 if looks_inside else 1):
            k1 = fs[n]
            k2 = rhs(t0 + dt / 2, y0 + dt / 2 * k1, n, cur)
            k3 = rhs(t0 + dt / 2, y0 + dt / 2 * k2, n, cur)
            k4 = rhs(t0 + dt, y0 + dt * k3, n, cur)
            y1 = y0 + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            f1 = rhs(ts[n + 1], y1, n, (y1, cur[1]))
            done = abs(y1 - cur[0]) <= 1e-16 * (1 + abs(y1)) and abs(f1 - cur[1]) <= 1e-16 * (1 + abs(f1))
            cur = (y1, f1)
            if done:
                break
        ys[n + 1], fs[n + 1] = cur
    return DenseTrajectory(ts, ys, fs, 1)
