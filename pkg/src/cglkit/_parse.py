"""Recursive-descent parser for scalar and PBW-polynomial expressions.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*      (implicit '*' between factors)
    factor := ('-' | '+') factor | atom ('^' ['-'] INT)?
    atom   := INT | 'q' | 'x' INT | '(' expr ')' | '[' expr ']'

Products of variables are accepted only when they are already in PBW
order (every index on the left is <= every index on the right), so an
expression denotes a normal form without needing the ring's relations.
Division is allowed by scalars only.
"""

from __future__ import annotations

import re

from .qfield import ONE, ZERO, RatQ

_TOKEN = re.compile(r"\s*(?:(\d+)|(x)(\d+)|(q)|([-+*/^()\[\]]))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + bad]!r}", line, col0 + pos + bad)
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("var", int(m.group(3)), m.start(2)))
        elif m.group(4) is not None:
            toks.append(("q", None, m.start(4)))
        else:
            toks.append((m.group(5), None, m.start(5)))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, nvars: int, line: int = 1, col0: int = 1):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.n = nvars
        self.line = line
        self.col0 = col0

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        raise ParseError(msg, self.line, self.col0 + tok[2])

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            self.error(f"expected {kind!r}, found {tok[0]!r}")
        self.i += 1
        return tok

    # polynomial dict helpers ---------------------------------------------
    def const(self, c: RatQ):
        return {(0,) * self.n: c} if c else {}

    def add(self, a, b, sign=1):
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, ZERO) + (c if sign > 0 else -c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    def mul(self, a, b, tok):
        out = {}
        for ma, ca in a.items():
            hi = max((k for k, e in enumerate(ma) if e), default=-1)
            for mb, cb in b.items():
                lo = min((k for k, e in enumerate(mb) if e), default=self.n)
                if hi > lo:
                    self.error("product is not in PBW order", tok)
                m = tuple(x + y for x, y in zip(ma, mb))
                v = out.get(m, ZERO) + ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    @staticmethod
    def scalar_of(p):
        if not p:
            return ZERO
        if len(p) == 1:
            (m, c), = p.items()
            if not any(m):
                return c
        return None

    # grammar --------------------------------------------------------------
    def parse(self):
        val = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected trailing input")
        return val

    def expr(self):
        val = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            val = self.add(val, rhs, 1 if op == "+" else -1)
        return val

    def term(self):
        val = self.factor()
        while True:
            kind = self.peek()[0]
            if kind in ("*", "/"):
                tok = self.take()
                rhs = self.factor()
            elif kind in ("int", "var", "q", "(", "["):
                tok = self.peek()
                rhs = self.factor()
                kind = "*"
            else:
                return val
            if kind == "*":
                val = self.mul(val, rhs, tok)
            else:
                s = self.scalar_of(rhs)
                if s is None:
                    self.error("division by a non-scalar expression", tok)
                if not s:
                    self.error("division by zero", tok)
                inv = s.inverse()
                val = {m: c * inv for m, c in val.items()}

    def factor(self):
        kind = self.peek()[0]
        if kind in ("-", "+"):
            self.take()
            val = self.factor()
            return val if kind == "+" else {m: -c for m, c in val.items()}
        tok = self.peek()
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            neg = False
            if self.peek()[0] == "-":
                self.take()
                neg = True
            k = self.take("int")[1]
            if neg:
                s = self.scalar_of(base)
                if s is None:
                    self.error("negative power of a non-scalar expression", tok)
                if not s:
                    self.error("negative power of zero", tok)
                return self.const(s ** (-k))
            out = self.const(ONE)
            for _ in range(k):
                out = self.mul(out, base, tok)
            return out
        return base

    def atom(self):
        tok = self.take()
        kind = tok[0]
        if kind == "int":
            return self.const(RatQ.coerce(tok[1]))
        if kind == "q":
            return self.const(RatQ.qpow(1))
        if kind == "var":
            idx = tok[1]
            if not 1 <= idx <= self.n:
                self.error(f"variable x{idx} out of range 1..{self.n}", tok)
            m = [0] * self.n
            m[idx - 1] = 1
            return {tuple(m): ONE}
        if kind in ("(", "["):
            val = self.expr()
            self.take(")" if kind == "(" else "]")
            return val
        self.error(f"unexpected token {kind!r}", tok)


def parse_ratq(text: str, line: int = 1, col0: int = 1) -> RatQ:
    p = _Parser(text, 0, line, col0)
    val = p.parse()
    s = p.scalar_of(val)
    return s


def parse_poly(text: str, nvars: int, line: int = 1, col0: int = 1) -> dict:
    """Parse a PBW polynomial expression into ``{exponents: RatQ}``."""
    return _Parser(text, nvars, line, col0).parse()
