"""Expression language for elements of a small algebra.

Grammar (whitespace is insignificant)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" exponent)?
    exponent:= INT ("^" exponent)?
    atom    := INT | IDENT | "(" expr ")"

``^`` binds tighter than unary minus, which binds tighter than ``*``/``/``.
Multiplication must be written explicitly.
"""
from __future__ import annotations

import re
from typing import List, NamedTuple

from gmpy2 import mpq

from .errors import ExprSyntaxError, UnknownVariableError
from .poly import Poly
from .ratfunc import AlgebraDescriptor, RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class Token(NamedTuple):
    kind: str
    text: str
    pos: int


def tokenize(s: str) -> List[Token]:
    out = []
    pos = 0
    n = len(s)
    while pos < n:
        m = _TOKEN.match(s, pos)
        if m is None:
            break
        if m.group(1) is not None:
            out.append(Token("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(Token("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", m.start(3))
            out.append(Token(ch, ch, m.start(3)))
        pos = m.end()
    out.append(Token("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str, ambient: AlgebraDescriptor):
        self.toks = tokenize(text)
        self.i = 0
        self.ambient = ambient

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self, kind: str) -> Token:
        tok = self.toks[self.i]
        if tok.kind != kind:
            what = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ExprSyntaxError(f"expected {kind!r}, found {what}", tok.pos)
        self.i += 1
        return tok

    def parse(self) -> RatFunc:
        if self.peek().kind == "end":
            raise ExprSyntaxError("empty expression", 0)
        value = self.expr()
        self.take("end")
        return value

    def expr(self) -> RatFunc:
        value = self.term()
        while self.peek().kind in "+-":
            op = self.take(self.peek().kind).kind
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFunc:
        value = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.take(self.peek().kind).kind
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self) -> RatFunc:
        if self.peek().kind == "-":
            self.take("-")
            return -self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek().kind == "^":
            self.take("^")
            return base ** self.exponent()
        return base

    def exponent(self) -> int:
        tok = self.peek()
        if tok.kind != "int":
            raise ExprSyntaxError("exponent must be a nonnegative integer literal", tok.pos)
        self.take("int")
        e = int(tok.text)
        if self.peek().kind == "^":
            self.take("^")
            e = e ** self.exponent()
        return e

    def atom(self) -> RatFunc:
        tok = self.peek()
        if tok.kind == "int":
            self.take("int")
            return self.ambient.const(mpq(int(tok.text)))
        if tok.kind == "ident":
            self.take("ident")
            if tok.text not in self.ambient.variables:
                raise UnknownVariableError(
                    f"unknown variable {tok.text!r} at position {tok.pos}")
            return self.ambient.var(tok.text)
        if tok.kind == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExprSyntaxError(f"unexpected {what}", tok.pos)


def parse_expr(s: str, ambient: AlgebraDescriptor) -> RatFunc:
    """Parse an expression string into a canonical rational function."""
    return _Parser(s, ambient).parse()


# ---------------------------------------------------------------------------
# printing

def _monomial_str(m, names) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    names = p.ring.variables
    out = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        mono = _monomial_str(m, names)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if k == 0:
            out.append("-" + body if c < 0 else body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def _bare_denominator(p: Poly) -> bool:
    if len(p.terms) != 1:
        return False
    (m, c), = p.terms.items()
    return c == 1 and sum(1 for e in m if e) == 1


def format_ratfunc(f: RatFunc) -> str:
    """Canonical string; ``parse_expr(format_ratfunc(f))`` gives back ``f``."""
    if f.den.is_constant():
        return format_poly(f.num)
    num = format_poly(f.num)
    if len(f.num.terms) > 1:
        num = f"({num})"
    den = format_poly(f.den)
    if not _bare_denominator(f.den):
        den = f"({den})"
    return f"{num}/{den}"
