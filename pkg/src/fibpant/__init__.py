"""Fibonacci-polynomial collocation for generalized pantograph equations."""

from .assemble import (
    LinearSystem,
    apply_conditions,
    assemble_fundamental,
    assemble_system,
    basis_matrix,
    collocation_points,
    condition_rows,
    shifted_basis_matrix,
)
from .basis import derivative_matrix, eval_basis, eval_series, matrix_power
from .expr import EvalError, ParseError, evaluate, parse, to_source
from .problem import (
    Condition,
    ConditionTerm,
    FunctionalTerm,
    PantographProblem,
    ProblemError,
    dump_problem,
    load_problem,
    read_problem,
    validate,
)
from .residual import adaptive_solve, residual
from .solve import FibSolution, solve_least_squares, solve_problem, solve_square

__version__ = "0.1.0"
