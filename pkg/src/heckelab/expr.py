"""Expression grammar shared by the CLI and fixtures.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' exponent)?
    atom   := NUMBER | 'q' | 't' | 'T[' word ']' | 'th[' ints ']' | '(' expr ')'

``q^(n/2)`` and ``t^n`` are synonyms.  ``T[e]`` is the identity, ``T[s1s0]``
a product of simple reflections, ``th[1,-1]`` the element theta_y.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Protocol

from .errors import ParseError
from .scalar import ONE, Scalar

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<T>T\[[^\]]*\])|(?P<th>th\[[^\]]*\])|(?P<name>[qt])|(?P<op>[-+*/^()]))"
)


class AlgebraContext(Protocol):
    def from_scalar(self, s: Scalar): ...

    def generator(self, word: str): ...

    def theta(self, coords: tuple[int, ...]): ...


def tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at position {pos}: {text[pos:pos + 10]!r}", witness=pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, ctx: AlgebraContext | None):
        self.toks = tokenize(text)
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'}, found {tok[1]!r}", witness=self.i)
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input {self.toks[self.i][1]!r}", witness=self.i)
        return v

    # values are either Scalar (pure) or algebra elements
    def lift(self, v):
        if isinstance(v, Scalar):
            if self.ctx is None:
                return v
            return self.ctx.from_scalar(v)
        return v

    def combine(self, a, b, op: Callable):
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return op(a, b)
        return op(self.lift(a), self.lift(b))

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            w = self.term()
            v = self.combine(v, w, (lambda x, y: x + y) if op == "+" else (lambda x, y: x - y))
        return v

    def term(self):
        v = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            w = self.unary()
            if op == "*":
                v = self.combine(v, w, lambda x, y: x * y)
            else:
                if not isinstance(w, Scalar):
                    raise ParseError("division is only allowed by scalars")
                if isinstance(v, Scalar):
                    v = v.exact_div(w)
                else:
                    if not w.is_monomial():
                        raise ParseError("an algebra element can only be divided by a monomial scalar")
                    v = v * self.lift(w ** -1)
        return v

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            v = self.unary()
            return -v
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def exponent(self) -> Fraction:
        tok = self.peek()
        if tok[1] == "(":
            self.take("(")
            e = self._rational()
            self.take(")")
            return e
        return self._rational()

    def _rational(self) -> Fraction:
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, val = self.take()
        if kind != "num":
            raise ParseError(f"expected an exponent, found {val!r}")
        e = Fraction(int(val))
        if self.peek()[1] == "/":
            self.take("/")
            kind, den = self.take()
            if kind != "num":
                raise ParseError("bad exponent denominator")
            e = e / int(den)
        return sign * e

    def power(self):
        base_tok = self.peek()
        v = self.atom()
        if self.peek()[1] == "^":
            self.take("^")
            e = self.exponent()
            if base_tok[1] in ("q", "t") and isinstance(v, Scalar):
                k = e * (2 if base_tok[1] == "q" else 1)
                if k.denominator != 1:
                    raise ParseError(f"exponent {e} leaves the half-integer lattice")
                return Scalar.mono(int(k))
            if e.denominator != 1:
                raise ParseError("fractional powers are only allowed on q and t")
            n = int(e)
            if isinstance(v, Scalar):
                return v ** n
            if n < 0:
                raise ParseError("negative powers of algebra elements are not supported")
            out = self.lift(ONE)
            for _ in range(n):
                out = out * v
            return out
        return v

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Scalar.const(int(val))
        if kind == "name":
            self.take()
            return Scalar.mono(2 if val == "q" else 1)
        if kind == "T":
            self.take()
            if self.ctx is None:
                raise ParseError("T[...] is not allowed in a scalar")
            return self.ctx.generator(val[2:-1].strip())
        if kind == "th":
            self.take()
            if self.ctx is None:
                raise ParseError("th[...] is not allowed in a scalar")
            body = val[3:-1].strip()
            try:
                coords = tuple(int(x) for x in body.split(",")) if body else ()
            except ValueError as exc:
                raise ParseError(f"bad lattice vector {val!r}") from exc
            return self.ctx.theta(coords)
        if val == "(":
            self.take("(")
            v = self.expr()
            self.take(")")
            return v
        if val is None:
            raise ParseError("unexpected end of expression")
        raise ParseError(f"unexpected token {val!r}", witness=val)


def evaluate(text: str, ctx: AlgebraContext):
    """Evaluate an expression inside an algebra; pure scalars are lifted."""
    v = _Parser(text, ctx).parse()
    return ctx.from_scalar(v) if isinstance(v, Scalar) else v


def evaluate_scalar(text: str) -> Scalar:
    v = _Parser(text, None).parse()
    assert isinstance(v, Scalar)
    return v


_SIMPLE = re.compile(r"s(\d+)(?:_(\d+))?")


def split_word(word: str) -> list[str]:
    """'s1s0s2' -> ['s1', 's0', 's2']; 'e' or '' -> []."""
    w = word.replace(" ", "").replace("*", "").replace(",", "")
    if w in ("", "e", "1"):
        return []
    out = []
    pos = 0
    while pos < len(w):
        m = _SIMPLE.match(w, pos)
        if not m:
            raise ParseError(f"bad reflection word {word!r}", witness=word)
        out.append(m.group(0))
        pos = m.end()
    return out
