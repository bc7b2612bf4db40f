"""Single-variable real arithmetic expressions.

Grammar (whitespace ignored, no implicit multiplication)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | 'x' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than a leading minus, so
``-x^2`` is ``-(x^2)`` while ``2^-1`` is ``2^(-1)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

__all__ = [
    "Expr",
    "Num",
    "Var",
    "Const",
    "Neg",
    "BinOp",
    "Call",
    "ParseError",
    "EvalError",
    "parse",
    "evaluate",
    "to_source",
]

FUNCTIONS = ("exp", "sin", "cos", "ln", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}


class Expr:
    """Base class of expression nodes."""

    def __call__(self, x: float) -> float:
        return evaluate(self, x)

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True, repr=False)
class Num(Expr):
    value: float

    def __repr__(self):
        return f"Num({self.value!r})"


@dataclass(frozen=True, repr=False)
class Var(Expr):
    def __repr__(self):
        return "Var()"


@dataclass(frozen=True, repr=False)
class Const(Expr):
    name: str

    def __repr__(self):
        return f"Const({self.name!r})"


@dataclass(frozen=True, repr=False)
class Neg(Expr):
    operand: Expr

    def __repr__(self):
        return f"Neg({self.operand!r})"


@dataclass(frozen=True, repr=False)
class BinOp(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr

    def __repr__(self):
        return f"BinOp({self.op!r}, {self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Call(Expr):
    func: str
    arg: Expr

    def __repr__(self):
        return f"Call({self.func!r}, {self.arg!r})"


class ParseError(ValueError):
    """Syntax error at byte *offset* of the source text."""

    def __init__(self, message: str, offset: int, source: str = ""):
        self.message = message
        self.offset = offset
        self.source = source
        super().__init__(f"{message} at offset {offset}")


class EvalError(ArithmeticError):
    """Evaluation left the real domain; *subexpr* is the failing node."""

    def __init__(self, message: str, subexpr: Expr, x: float):
        self.subexpr = subexpr
        self.x = x
        super().__init__(f"{message} in '{to_source(subexpr)}' at x={x!r}")


# ---------------------------------------------------------------------------
# Tokenizer and parser

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str  # num, name, op, end
    text: str
    pos: int  # character index


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = self._tokenize(source)
        self.i = 0

    def _offset(self, pos: int) -> int:
        return len(self.source[:pos].encode("utf-8"))

    def error(self, message: str, pos: int) -> ParseError:
        return ParseError(message, self._offset(pos), self.source)

    def _tokenize(self, source: str) -> list[_Token]:
        tokens = []
        pos = 0
        while pos < len(source):
            m = _TOKEN.match(source, pos)
            if m is None:
                raise self.error(f"unexpected character {source[pos]!r}", pos)
            kind = m.lastgroup
            if kind != "ws":
                tokens.append(_Token(kind, m.group(), pos))
            pos = m.end()
        tokens.append(_Token("end", "", len(source)))
        return tokens

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            raise self.error("empty expression", 0)
        node = self.expr()
        if self.tok.kind != "end":
            if self.tok.text == ")":
                raise self.error("unbalanced ')'", self.tok.pos)
            raise self.error(f"unexpected {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            node = Num(float(t.text))
        elif t.kind == "name":
            self.advance()
            if t.text == "x":
                node = Var()
            elif t.text in CONSTANTS:
                node = Const(t.text)
            elif t.text in FUNCTIONS:
                if self.tok.text != "(":
                    raise self.error(f"expected '(' after {t.text!r}", self.tok.pos)
                self.advance()
                arg = self.expr()
                self._close(t.pos)
                node = Call(t.text, arg)
            else:
                raise self.error(f"unknown identifier {t.text!r}", t.pos)
        elif t.text == "(":
            self.advance()
            node = self.expr()
            self._close(t.pos)
        elif t.kind == "end":
            raise self.error("expected operand, found end of input", t.pos)
        else:
            raise self.error(f"expected operand, found {t.text!r}", t.pos)
        if self.tok.kind in ("num", "name") or self.tok.text == "(":
            raise self.error("implicit multiplication is not supported", self.tok.pos)
        return node

    def _close(self, open_pos: int) -> None:
        if self.tok.text != ")":
            if self.tok.kind == "end":
                raise self.error("unbalanced '('", open_pos)
            raise self.error(f"expected ')', found {self.tok.text!r}", self.tok.pos)
        self.advance()


def parse(source: str) -> Expr:
    """Parse *source* into an expression tree, raising :class:`ParseError`."""
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# Evaluation


def evaluate(node: Expr, x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise EvalError("non-finite argument", node, x)
    value = _eval(node, x)
    if not math.isfinite(value):
        raise EvalError("non-finite result", node, x)
    return value


def _eval(node: Expr, x: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_eval(node.operand, x)
    try:
        if isinstance(node, BinOp):
            a = _eval(node.left, x)
            b = _eval(node.right, x)
            if node.op == "+":
                v = a + b
            elif node.op == "-":
                v = a - b
            elif node.op == "*":
                v = a * b
            elif node.op == "/":
                if b == 0.0:
                    raise EvalError("division by zero", node, x)
                v = a / b
            else:
                if a < 0.0 and not float(b).is_integer():
                    raise EvalError("negative base with non-integer exponent", node, x)
                if a == 0.0 and b < 0.0:
                    raise EvalError("division by zero", node, x)
                v = math.pow(a, b)
        elif isinstance(node, Call):
            a = _eval(node.arg, x)
            if node.func == "ln":
                if a <= 0.0:
                    raise EvalError("logarithm of non-positive value", node, x)
                v = math.log(a)
            elif node.func == "sqrt":
                if a < 0.0:
                    raise EvalError("square root of negative value", node, x)
                v = math.sqrt(a)
            else:
                v = getattr(math, node.func)(a)
        else:
            raise TypeError(f"not an expression node: {node!r}")
    except OverflowError:
        raise EvalError("overflow", node, x) from None
    if not math.isfinite(v):
        raise EvalError("non-finite result", node, x)
    return v


# ---------------------------------------------------------------------------
# Printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_NEG, _POW, _ATOM = 3, 4, 5


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _POW if node.op == "^" else _PREC[node.op]
    if isinstance(node, Neg):
        return _NEG
    if isinstance(node, Num) and (node.value < 0 or math.copysign(1, node.value) < 0):
        return 0
    return _ATOM


def _wrap(node: Expr, minimum: int) -> str:
    s = to_source(node)
    return f"({s})" if _prec(node) < minimum else s


def to_source(node: Expr) -> str:
    """Render *node* as text that :func:`parse` maps back to the same tree."""
    if isinstance(node, Num):
        v = node.value
        if v.is_integer() and abs(v) < 1e15 and math.copysign(1, v) > 0:
            return str(int(v))
        return repr(v)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _NEG)
    if isinstance(node, BinOp):
        if node.op == "^":
            return f"{_wrap(node.left, _ATOM)}^{_wrap(node.right, _NEG)}"
        p = _PREC[node.op]
        return f"{_wrap(node.left, p)} {node.op} {_wrap(node.right, p + 1)}"
    raise TypeError(f"not an expression node: {node!r}")
