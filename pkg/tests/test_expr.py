import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from fibpant.expr import BinOp, Call, Const, EvalError, Neg, Num, ParseError, Var, evaluate, parse, to_source


def test_forcing_term_structure():
    tree = parse("-x^2 + 2")
    assert tree == BinOp("+", Neg(BinOp("^", Var(), Num(2.0))), Num(2.0))
    assert evaluate(tree, 0.0) == 2.0
    assert evaluate(tree, 0.5) == 1.75


def test_literal_zero():
    assert parse("0") == Num(0.0)


def test_half_exp_coefficient():
    assert evaluate(parse("(1/2)*exp(x/2)"), 0.0) == 0.5


@pytest.mark.parametrize(
    "src, x, expected",
    [
        ("3/4", 0.33, 0.75),
        ("exp(x)", 0.0, 1.0),
        ("2+3*4", 0.0, 14.0),
        ("2^3^2", 0.0, 512.0),
        ("(2^3)^2", 0.0, 64.0),
        ("2^-1", 0.0, 0.5),
        ("-2^2", 0.0, -4.0),
        ("--x", 3.0, 3.0),
        ("10 - 4 - 3", 0.0, 3.0),
        ("16 / 4 / 2", 0.0, 2.0),
        ("pi", 0.0, math.pi),
        ("e", 0.0, math.e),
        ("ln(e)", 0.0, 1.0),
        ("sqrt(x)", 2.25, 1.5),
        ("cos(0)+sin(0)", 0.0, 1.0),
        ("1.5e-3*x", 2.0, 3e-3),
        (".5 + x", 1.0, 1.5),
        ("(-2)^3", 0.0, -8.0),
    ],
)
def test_evaluate(src, x, expected):
    assert evaluate(parse(src), x) == pytest.approx(expected, rel=1e-15)


def test_example3_coefficient():
    # exp(-0.5) * sin(0.5) = 0.6065306597126334 * 0.479425538604203
    v = evaluate(parse("-exp(-0.5*x)*sin(0.5*x)"), 1.0)
    assert v == pytest.approx(-0.29078628821269187, rel=1e-14)
    assert v == pytest.approx(-math.exp(-0.5) * math.sin(0.5), rel=1e-15)


@pytest.mark.parametrize(
    "src, offset",
    [
        ("", 0),
        ("   ", 0),
        ("2x", 1),
        ("x +", 3),
        ("(x + 1", 0),
        ("x + 1)", 5),
        ("foo(x)", 0),
        ("y", 0),
        ("2 * * 3", 4),
        ("exp x", 4),
        ("x $ 1", 2),
        ("sin()", 4),
    ],
)
def test_parse_errors_carry_offsets(src, offset):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.offset == offset
    assert 0 <= info.value.offset <= len(src.encode())


def test_parse_error_offset_is_in_bytes():
    with pytest.raises(ParseError) as info:
        parse("x + é")
    assert info.value.offset == 4
    with pytest.raises(ParseError) as info:
        parse("éé + $")
    assert info.value.offset == 0


@pytest.mark.parametrize(
    "src, x",
    [("1/x", 0.0), ("ln(x)", -1.0), ("ln(x)", 0.0), ("sqrt(x)", -0.1), ("x^0.5", -4.0), ("0^-1", 0.0), ("exp(x)", 1000.0)],
)
def test_evaluation_domain_errors(src, x):
    tree = parse(src)
    with pytest.raises(EvalError) as info:
        evaluate(tree, x)
    assert info.value.subexpr is not None
    assert to_source(info.value.subexpr) in str(info.value)


def test_eval_error_names_inner_subexpression():
    with pytest.raises(EvalError) as info:
        evaluate(parse("x + sqrt(x - 2)"), 1.0)
    assert info.value.subexpr == parse("sqrt(x - 2)")


def test_non_finite_argument():
    with pytest.raises(EvalError):
        evaluate(parse("x"), math.nan)


# --- random trees for round-trip and totality -------------------------------

_SAFE_FUNCS = ("exp", "sin", "cos")


def _random_tree(rng, depth, safe):
    if depth == 0 or rng.random() < 0.25:
        choice = rng.randrange(3)
        if choice == 0:
            return Num(float(rng.choice([0, 1, 2, 0.5, 3.25, 1e-3, 10])))
        if choice == 1:
            return Var()
        return Const(rng.choice(["pi", "e"]))
    kind = rng.randrange(4)
    if kind == 0:
        return Neg(_random_tree(rng, depth - 1, safe))
    if kind == 1:
        funcs = _SAFE_FUNCS if safe else _SAFE_FUNCS + ("ln", "sqrt")
        return Call(rng.choice(funcs), _random_tree(rng, depth - 1, safe))
    ops = "+-*" if safe else "+-*/^"
    return BinOp(rng.choice(ops), _random_tree(rng, depth - 1, safe), _random_tree(rng, depth - 1, safe))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_print_parse_round_trip(seed):
    tree = _random_tree(random.Random(seed), 6, safe=False)
    assert parse(to_source(tree)) == tree


def test_round_trip_of_parsed_sources():
    for src in ["-x^2 + 2", "(1/2)*exp(x/2)", "-exp(-0.5*x)*sin(0.5*x)", "2^3^2", "(2^3)^2", "-(-x)", "a" * 0 + "x-(x-x)"]:
        tree = parse(src)
        assert parse(to_source(tree)) == tree


def test_total_on_safe_trees():
    rng = random.Random(20261016)
    for _ in range(1000):
        tree = _random_tree(rng, 6, safe=True)
        x = rng.random()
        try:
            v = evaluate(tree, x)
        except EvalError as exc:
            # only overflow of nested exp can leave the reals here
            assert "overflow" in str(exc) or "non-finite" in str(exc)
            continue
        assert math.isfinite(v)
