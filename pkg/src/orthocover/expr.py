"""Tiny arithmetic expression language for user-supplied surfaces and curves.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Names are the variables ``x`` and ``y``, the constants ``pi`` and ``e``, and
the functions in :data:`FUNCTIONS`.  ``**`` is accepted as a synonym for ``^``.
Compiled expressions are numpy-vectorised callables.
"""
from __future__ import annotations

import re
from typing import Callable

import numpy as np

__all__ = ["ExpressionError", "compile_expression", "FUNCTIONS"]

FUNCTIONS: dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "atan": np.arctan,
}
CONSTANTS = {"pi": np.pi, "e": np.e}
VARIABLES = ("x", "y")

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


class ExpressionError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", float(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ExpressionError(f"expected {op!r}, got {val!r}")

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            node = (lambda a, b: lambda x, y: a(x, y) + b(x, y))(node, rhs) if op == "+" else \
                (lambda a, b: lambda x, y: a(x, y) - b(x, y))(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            node = (lambda a, b: lambda x, y: a(x, y) * b(x, y))(node, rhs) if op == "*" else \
                (lambda a, b: lambda x, y: a(x, y) / b(x, y))(node, rhs)
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            inner = self.unary()
            return lambda x, y: -inner(x, y)
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exponent = self.unary()
            return lambda x, y: np.power(base(x, y), exponent(x, y))
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return lambda x, y, v=val: v
        if kind == "name":
            if self.peek() == ("op", "("):
                if val not in FUNCTIONS:
                    raise ExpressionError(f"unknown function {val!r}")
                self.take()
                arg = self.expr()
                self.expect(")")
                fn = FUNCTIONS[val]
                return lambda x, y: fn(arg(x, y))
            if val == "x":
                return lambda x, y: x
            if val == "y":
                return lambda x, y: y
            if val in CONSTANTS:
                return lambda x, y, v=CONSTANTS[val]: v
            raise ExpressionError(f"unknown name {val!r}")
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        raise ExpressionError(f"unexpected token {val!r}")


def compile_expression(text: str) -> Callable:
    """Compile ``text`` into ``f(x, y)``; the result broadcasts over numpy arrays.

    >>> float(compile_expression("2*x^2 - y")(3.0, 1.0))
    17.0
    """
    if not text or not text.strip():
        raise ExpressionError("empty expression")
    parser = _Parser(_tokenize(text))
    node = parser.expr()
    if parser.peek()[0] != "end":
        raise ExpressionError(f"trailing input after position {parser.i}")

    def f(x, y=0.0):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        with np.errstate(all="ignore"):
            return np.asarray(node(x, y), dtype=float) * np.ones(np.broadcast(x, y).shape)

    f.expression = text
    return f
