"""Parser for bracket expressions in the derivations eps(2i), phi0 and h(p,q,d).

Grammar::

    expr  := term (("+" | "-") term)*
    term  := "-" term | [rational ["*"]] atom
    atom  := "eps(" int ")" | "phi0" | "h(" int "," int "," int ")"
           | "[" expr "," expr "]" | "ad(" expr ")^" int "(" expr ")" | "(" expr ")"
"""
from __future__ import annotations

import re

from .derivations import Derivation, ad_der, der_bracket, make_eps, make_h, make_phi0
from .exact import Q

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(eps|phi0|h|ad)|(.))")


class ParseError(ValueError):
    pass


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected input at {pos}")
        tok = m.group(1) or m.group(2) or m.group(3)
        if m.group(3) and m.group(3) not in "[](),+-*^":
            raise ParseError(f"unexpected character {tok!r} at {pos}")
        out.append(tok)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression")
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}")
        self.i += 1
        return tok

    def integer(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise ParseError(f"expected an integer, got {tok!r}")
        return int(tok)

    def expr(self) -> Derivation:
        d = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            e = self.term()
            d = d + e if op == "+" else d - e
        return d

    def term(self) -> Derivation:
        if self.peek() == "-":
            self.take()
            return -self.term()
        tok = self.peek()
        if tok is not None and tok[0].isdigit():
            c = Q(self.take())
            if self.peek() == "*":
                self.take()
            return self.atom().scale(c)
        return self.atom()

    def atom(self) -> Derivation:
        tok = self.take()
        if tok == "eps":
            self.take("(")
            n = self.integer()
            self.take(")")
            return make_eps(n)
        if tok == "phi0":
            return make_phi0()
        if tok == "h":
            self.take("(")
            p = self.integer()
            self.take(",")
            q = self.integer()
            self.take(",")
            d = self.integer()
            self.take(")")
            return make_h(p, q, d).derivation
        if tok == "[":
            x = self.expr()
            self.take(",")
            y = self.expr()
            self.take("]")
            return der_bracket(x, y)
        if tok == "ad":
            self.take("(")
            x = self.expr()
            self.take(")")
            self.take("^")
            k = self.integer()
            self.take("(")
            y = self.expr()
            self.take(")")
            return ad_der(x, k, y)
        if tok == "(":
            x = self.expr()
            self.take(")")
            return x
        raise ParseError(f"unexpected token {tok!r}")


def parse_derivation(text: str) -> Derivation:
    p = _Parser(text)
    try:
        d = p.expr()
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if p.peek() is not None:
        raise ParseError(f"trailing input starting at {p.peek()!r}")
    return d
