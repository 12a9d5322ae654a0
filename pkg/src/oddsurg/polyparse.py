"""Parser for polynomial expressions in x, y, z.

Grammar::

    poly   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' INT)?
    atom   := NUMBER | 'x' | 'y' | 'z' | '(' poly ')'

Nothing else (no functions, no division) is accepted.
"""

from __future__ import annotations

import re

__all__ = ["PolynomialSyntaxError", "parse_polynomial", "format_polynomial"]

Poly = dict[tuple[int, int, int], float]

_TOKEN = re.compile(r"\s*(?:((?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)|([xyz])|(\*\*|[-+*^()]))")
_VARS = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}


class PolynomialSyntaxError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolynomialSyntaxError(
                f"unexpected character {text[pos:].lstrip()[:1]!r} at position {pos}"
            )
        num, var, op = m.groups()
        if num is not None:
            tokens.append(("num", num, m.start(1)))
        elif var is not None:
            tokens.append(("var", var, m.start(2)))
        else:
            tokens.append(("op", "^" if op == "**" else op, m.start(3)))
        pos = m.end()
    return tokens


def _mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
            out[e] = out.get(e, 0.0) + ca * cb
    return out


def _add(a: Poly, b: Poly, sign: float = 1.0) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0.0) + sign * c
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg):
        tok = self.peek()
        where = f"position {tok[2]}" if tok else "end of input"
        raise PolynomialSyntaxError(f"{msg} at {where} in {self.text!r}")

    def parse(self) -> Poly:
        if not self.tokens:
            raise PolynomialSyntaxError("empty polynomial expression")
        p = self.poly()
        if self.peek() is not None:
            self.fail("unexpected token")
        return p

    def poly(self) -> Poly:
        sign = 1.0
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1.0 if tok[1] == "-" else 1.0
        acc = _add({}, self.term(), sign)
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.take()
            acc = _add(acc, self.term(), -1.0 if tok[1] == "-" else 1.0)
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while (tok := self.peek()) and tok == ("op", "*", tok[2]):
            self.take()
            acc = _mul(acc, self.factor())
        return acc

    def factor(self) -> Poly:
        base = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.take()
            if exp is None or exp[0] != "num" or not exp[1].isdigit():
                self.i -= 1
                self.fail("exponent must be a nonnegative integer")
            out: Poly = {(0, 0, 0): 1.0}
            for _ in range(int(exp[1])):
                out = _mul(out, base)
            return out
        return base

    def atom(self) -> Poly:
        tok = self.take()
        if tok is None:
            self.i -= 1
            self.fail("expected a number, variable or '('")
        kind, val, _ = tok
        if kind == "num":
            return {(0, 0, 0): float(val)}
        if kind == "var":
            return {_VARS[val]: 1.0}
        if val == "(":
            inner = self.poly()
            close = self.take()
            if close is None or close[1] != ")":
                self.i -= 1
                self.fail("expected ')'")
            return inner
        self.i -= 1
        self.fail(f"unexpected {val!r}")


def parse_polynomial(text: str) -> Poly:
    """Parse ``text`` into ``{(i, j, k): coefficient}`` for ``x^i y^j z^k``."""
    return _Parser(text).parse()


def format_polynomial(monomials) -> str:
    """Inverse of :func:`parse_polynomial` for ``((i, j, k), coef)`` pairs."""
    out = ""
    for (i, j, k), c in monomials:
        sign = "-" if c < 0 else "+"
        c = abs(c)
        factors = [repr(c)] if c != 1.0 or (i, j, k) == (0, 0, 0) else []
        for name, e in zip("xyz", (i, j, k)):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        term = "*".join(factors)
        if not out:
            out = term if sign == "+" else f"-{term}"
        else:
            out += f" {sign} {term}"
    return out or "0"
