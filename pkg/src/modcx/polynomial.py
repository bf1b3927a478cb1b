"""Integer-coefficient multivariate polynomials and their text grammar.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | factor
    factor := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

A polynomial is a dict mapping exponent tuples to nonzero integers.
"""

from __future__ import annotations

import re

Poly = dict[tuple[int, ...], int]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1} in {text!r}")
        self.text = text
        self.pos = pos


def _add(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def poly_pow(a: Poly, n: int, nvars: int) -> Poly:
    out: Poly = {(0,) * nvars: 1}
    for _ in range(n):
        out = _mul(out, a)
    return out


class _Parser:
    def __init__(self, text: str, variables: list[str]):
        self.text = text
        self.index = {v: i for i, v in enumerate(variables)}
        self.n = len(variables)
        self.tokens = []
        for m in _TOKEN.finditer(text):
            if m.group(0).strip() == "":
                continue
            if m.group(1):
                self.tokens.append(("int", int(m.group(1)), m.start(1)))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), m.start(2)))
            else:
                self.tokens.append(("op", m.group(3), m.start(3)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, message: str, pos: int):
        raise PolynomialSyntaxError(message, self.text, pos)

    def parse(self) -> Poly:
        if not self.tokens:
            self.error("empty expression", 0)
        out = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            self.error(f"unexpected {val!r}", pos)
        return out

    def expr(self) -> Poly:
        out = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                out = _add(out, self.term(), 1 if val == "+" else -1)
            else:
                return out

    def term(self) -> Poly:
        out = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                out = _mul(out, self.unary())
            else:
                return out

    def unary(self) -> Poly:
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return inner if val == "+" else {e: -c for e, c in inner.items()}
        return self.factor()

    def factor(self) -> Poly:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, exp, pos = self.take()
            if kind != "int":
                self.error("exponent must be a non-negative integer", pos)
            return poly_pow(base, exp, self.n)
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "int":
            return {(0,) * self.n: val} if val else {}
        if kind == "name":
            if val not in self.index:
                self.error(f"unknown variable {val!r}", pos)
            e = [0] * self.n
            e[self.index[val]] = 1
            return {tuple(e): 1}
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val2, pos2 = self.take()
            if not (kind == "op" and val2 == ")"):
                self.error("expected ')'", pos2)
            return inner
        if kind == "end":
            self.error("unexpected end of expression", pos)
        self.error(f"unexpected {val!r}", pos)


def parse_polynomial(text: str, variables: list[str]) -> Poly:
    """Parse ``text`` into a polynomial over the given variable names."""
    return _Parser(text, list(variables)).parse()


def format_monomial(exps: tuple[int, ...], variables: list[str]) -> str:
    parts = []
    for v, e in zip(variables, exps):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


def format_polynomial(poly: Poly, variables: list[str]) -> str:
    if not poly:
        return "0"
    terms = []
    for e in sorted(poly, key=lambda e: (-sum(e), tuple(-x for x in e))):
        c = poly[e]
        mono = format_monomial(e, variables)
        if mono == "1":
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
