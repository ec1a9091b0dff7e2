"""Closed-form expression trees for field definitions.

Field components are given as strings in a small vocabulary: numeric
constants, the chart coordinates ``x`` and ``y``, named constants bound at
parse time, the arithmetic operators ``+ - * / **`` (``^`` is accepted as a
power spelling), unary minus, and the functions ``cos``, ``sin``, ``exp``.

Parsing goes through :mod:`ast` with a strict whitelist, so arbitrary Python
can never execute.  The resulting tree evaluates over any scalar algebra that
implements the arithmetic operators plus ``cos/sin/exp`` (floats,
:class:`~zermelonav.jets.Dual2`, :class:`~zermelonav.jets.Jet4`), which is how
exact derivatives propagate without the tree knowing about them.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from typing import Mapping

from . import jets
from .errors import ExpressionError


class Expr:
    """Base node. ``eval`` takes the values bound to ``x`` and ``y``."""

    def eval(self, x, y):
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def eval(self, x, y):
        return self.value

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var(Expr):
    name: str  # "x" or "y"

    def eval(self, x, y):
        return x if self.name == "x" else y

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Add(Expr):
    a: Expr
    b: Expr

    def eval(self, x, y):
        return self.a.eval(x, y) + self.b.eval(x, y)

    def __str__(self):
        return f"({self.a} + {self.b})"


@dataclass(frozen=True)
class Sub(Expr):
    a: Expr
    b: Expr

    def eval(self, x, y):
        return self.a.eval(x, y) - self.b.eval(x, y)

    def __str__(self):
        return f"({self.a} - {self.b})"


@dataclass(frozen=True)
class Mul(Expr):
    a: Expr
    b: Expr

    def eval(self, x, y):
        return self.a.eval(x, y) * self.b.eval(x, y)

    def __str__(self):
        return f"({self.a} * {self.b})"


@dataclass(frozen=True)
class Div(Expr):
    a: Expr
    b: Expr

    def eval(self, x, y):
        return self.a.eval(x, y) / self.b.eval(x, y)

    def __str__(self):
        return f"({self.a} / {self.b})"


@dataclass(frozen=True)
class Neg(Expr):
    a: Expr

    def eval(self, x, y):
        return -self.a.eval(x, y)

    def __str__(self):
        return f"(-{self.a})"


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: float  # constant exponents only

    def eval(self, x, y):
        return self.base.eval(x, y) ** self.exponent

    def __str__(self):
        return f"({self.base} ** {self.exponent!r})"


@dataclass(frozen=True)
class Call(Expr):
    func: str  # "cos" | "sin" | "exp"
    a: Expr

    def eval(self, x, y):
        return getattr(jets, self.func)(self.a.eval(x, y))

    def __str__(self):
        return f"{self.func}({self.a})"


_FUNCS = ("cos", "sin", "exp")

_BINOPS = {ast.Add: Add, ast.Sub: Sub, ast.Mult: Mul, ast.Div: Div}


def parse_expression(text: str, constants: Mapping[str, float] | None = None) -> Expr:
    """Parse ``text`` into an expression tree.

    ``constants`` maps names (e.g. amplitudes of a field) to numeric values;
    they are folded in as constant nodes.  Raises :class:`ExpressionError`
    for anything outside the vocabulary.
    """
    consts = dict(constants or {})
    # Normalize the power spelling; "**" and "^" are both accepted.
    source = text.replace("**", "^").replace("^", "**")
    try:
        node = ast.parse(source, mode="eval")
    except SyntaxError as e:
        raise ExpressionError(f"invalid expression {text!r}: {e.msg}") from None
    return _convert(node.body, consts, text)


def _convert(node: ast.AST, consts: Mapping[str, float], text: str) -> Expr:
    if isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ExpressionError(f"non-numeric literal in {text!r}")
        return Const(float(node.value))
    if isinstance(node, ast.Name):
        if node.id in ("x", "y"):
            return Var(node.id)
        if node.id in consts:
            return Const(float(consts[node.id]))
        raise ExpressionError(f"unknown symbol {node.id!r} in {text!r}")
    if isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            inner = _convert(node.operand, consts, text)
            if isinstance(inner, Const):
                return Const(-inner.value)
            return Neg(inner)
        if isinstance(node.op, ast.UAdd):
            return _convert(node.operand, consts, text)
        raise ExpressionError(f"unsupported unary operator in {text!r}")
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _convert(node.left, consts, text)
            expo = _convert(node.right, consts, text)
            if not isinstance(expo, Const):
                raise ExpressionError(
                    f"power exponent must be a constant in {text!r}")
            return Pow(base, expo.value)
        cls = _BINOPS.get(type(node.op))
        if cls is None:
            raise ExpressionError(f"unsupported operator in {text!r}")
        return cls(_convert(node.left, consts, text),
                   _convert(node.right, consts, text))
    if isinstance(node, ast.Call):
        if (not isinstance(node.func, ast.Name)
                or node.func.id not in _FUNCS
                or len(node.args) != 1
                or node.keywords):
            raise ExpressionError(f"unsupported function call in {text!r}")
        return Call(node.func.id, _convert(node.args[0], consts, text))
    raise ExpressionError(f"unsupported syntax in {text!r}")
