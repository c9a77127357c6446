"""Recursive-descent parser for polynomial expressions.

Grammar (standard precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary | '/' unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | IDENT | '(' expr ')'

Identifiers may carry an angle-bracket suffix such as ``x<1>`` or ``d<1,2>``.
Division is only allowed by nonzero rational constants.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Polynomial, VariableTable


class ExprError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}")
        self.message = message
        self.pos = pos


_ALIASES = {"−": "-", "·": "*", "⋅": "*"}


def tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = _ALIASES.get(text[i], text[i])
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j < n and text[j] == "<":
                k = text.find(">", j)
                if k < 0:
                    raise ExprError("unterminated '<' in identifier", j)
                inner = text[j + 1:k]
                if not inner or not all(c.isdigit() or c == "," for c in inner):
                    raise ExprError("bad identifier suffix", j)
                j = k + 1
            toks.append(("ident", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()":
            toks.append(("op", ch, i))
            i += 1
            continue
        raise ExprError(f"unexpected character {text[i]!r}", i)
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, table: VariableTable):
        self.toks = tokenize(text)
        self.k = 0
        self.table = table

    def peek(self):
        return self.toks[self.k]

    def take(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ExprError(f"expected {value!r}", tok[2])
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ExprError("empty expression", self.peek()[2])
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprError(f"unexpected token {tok[1]!r}", tok[2])
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            pos = self.peek()[2]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if q.variables_used() or q.is_zero():
                    raise ExprError("division only by nonzero constants", pos)
                p = p / q.coefficient((0,) * len(self.table))
        return p

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return -self.unary()
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                raise ExprError("exponent must be a non-negative integer", tok[2])
            return base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return Polynomial.constant(self.table, Fraction(int(val)))
        if kind == "ident":
            if val not in self.table:
                raise ExprError(f"unknown variable {val!r}", pos)
            return Polynomial.var(self.table, val)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect(")")
            return p
        if kind == "end":
            raise ExprError("unexpected end of expression", pos)
        raise ExprError(f"unexpected token {val!r}", pos)


def parse_poly(table: VariableTable, text: str) -> Polynomial:
    """Parse ``text`` into a polynomial over ``table``."""
    return _Parser(text, table).parse()


def P(table: VariableTable, *texts: str):
    """Shorthand: parse one or several expressions."""
    out = tuple(parse_poly(table, s) for s in texts)
    return out[0] if len(out) == 1 else out
