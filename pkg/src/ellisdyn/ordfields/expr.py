"""Recursive-descent parser for field-element expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' exponent)?
    exponent := ['-'] INT | '(' ['-'] INT ')'
    atom   := INT | NAME | '(' expr ')'

The parser produces a small tuple AST which :func:`evaluate` folds into any
value type supporting field arithmetic.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Callable, Mapping

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at {pos}")
        self.pos = pos


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) + 1 if m.lastindex else pos + 1
        if m.group(1) is not None:
            out.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            if m.group(3) not in "+-*/^()":
                raise ParseError(f"unexpected character {m.group(3)!r}", start)
            out.append(("op", m.group(3), start))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, pos = self.take()
        if v != value or kind != "op":
            raise ParseError(f"expected {value!r}", pos)

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = (op, node, self.unary())
        return node

    def unary(self):
        kind, v, _ = self.peek()
        if kind == "op" and v in ("+", "-"):
            self.take()
            inner = self.unary()
            return ("neg", inner) if v == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            return ("pow", base, self.exponent())
        return base

    def exponent(self) -> int:
        paren = False
        if self.peek()[1] == "(":
            self.take()
            paren = True
        sign = 1
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            sign = -1
        kind, v, pos = self.take()
        if kind != "int":
            raise ParseError("expected integer exponent", pos)
        if paren:
            self.expect(")")
        return sign * int(v)

    def atom(self):
        kind, v, pos = self.take()
        if kind == "int":
            return ("num", Fraction(int(v)))
        if kind == "name":
            return ("var", v, pos)
        if kind == "op" and v == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError("unexpected end of input" if kind == "end" else f"unexpected {v!r}", pos)


def parse_ast(text: str):
    p = _Parser(text)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", 1)
    node = p.expr()
    kind, v, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {v!r}", pos)
    return node


def evaluate(node, env: Mapping[str, Any], lift: Callable[[Fraction], Any] = lambda q: q):
    """Fold an AST; ``lift`` turns rational literals into the target type."""
    tag = node[0]
    if tag == "num":
        return lift(node[1])
    if tag == "var":
        if node[1] not in env:
            raise ParseError(f"unknown variable {node[1]!r}", node[2])
        return env[node[1]]
    if tag == "neg":
        return -evaluate(node[1], env, lift)
    if tag == "pow":
        base = evaluate(node[1], env, lift)
        return base ** node[2]
    a = evaluate(node[1], env, lift)
    b = evaluate(node[2], env, lift)
    if tag == "+":
        return a + b
    if tag == "-":
        return a - b
    if tag == "*":
        return a * b
    if isinstance(a, Fraction) and isinstance(b, Fraction) and b == 0:
        raise ZeroDivisionError("division by zero in expression")
    return a / b


def parse_rational(text: str) -> Fraction:
    return Fraction(evaluate(parse_ast(text), {}))


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_poly_terms(terms: list[tuple[Fraction, list[tuple[str, int]]]]) -> str:
    """Format ``[(coeff, [(name, exp), ...]), ...]`` in the given order."""
    if not terms:
        return "0"
    parts = []
    for idx, (c, mono) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        factors = [n if e == 1 else f"{n}^{e}" for n, e in mono if e]
        if not factors:
            body = format_rational(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = format_rational(a) + "*" + "*".join(factors)
        if idx == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)
