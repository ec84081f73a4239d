"""Exact Laurent polynomials in t = q^(1/2) with rational coefficients.

All Hecke parameters live here: q_s = t^(2*lambda), q_s^(1/2) = t^lambda and so
on.  Values are immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DivByZero, NonDivisible

__all__ = ["Scalar", "T", "Q", "ONE", "ZERO", "q_power", "parse_scalar"]


def _norm(v):
    """Coefficients are stored as int whenever they are integral (much faster)."""
    if type(v) is Fraction and v.denominator == 1:
        return v.numerator
    return v


def _coerce(x) -> "Scalar":
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar({0: x})
    return NotImplemented


class Scalar:
    """Sparse map exponent -> coefficient, zero coefficients never stored."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                v = _norm(Fraction(v))
                if v:
                    c[int(k)] = v
        self._c = c
        self._hash = None

    @classmethod
    def mono(cls, exp: int, coeff=1) -> "Scalar":
        return cls({exp: coeff})

    @classmethod
    def const(cls, c) -> "Scalar":
        return cls({0: c})

    @classmethod
    def _raw(cls, c: dict) -> "Scalar":
        s = cls.__new__(cls)
        s._c = c
        s._hash = None
        return s

    # -- inspection ----------------------------------------------------------
    def terms(self) -> list[tuple[int, Fraction]]:
        return sorted(self._c.items())

    def coeff(self, exp: int) -> Fraction:
        return self._c.get(exp, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    def degree(self) -> int:
        if not self._c:
            raise ValueError("degree of zero")
        return max(self._c)

    def low_degree(self) -> int:
        if not self._c:
            raise ValueError("low degree of zero")
        return min(self._c)

    def monomial_exponent(self) -> int:
        """Exponent of t when self is c*t^k; raises otherwise."""
        if len(self._c) != 1:
            raise ValueError(f"{self} is not a monomial")
        return next(iter(self._c))

    # -- ring operations -----------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            s = _norm(c.get(k, 0) + v)
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return Scalar._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, Fraction] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                s = _norm(c.get(k, 0) + v1 * v2)
                if s:
                    c[k] = s
                else:
                    c.pop(k, None)
        return Scalar._raw(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise NonDivisible(f"{self} is not a unit", witness=str(self))
            (k, v), = self._c.items()
            return Scalar({k * n: Fraction(v) ** n})
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "Scalar":
        """Multiply by t^k."""
        return Scalar._raw({e + k: v for e, v in self._c.items()})

    def exact_div(self, den) -> "Scalar":
        """Quotient q with q*den == self, or NonDivisible / DivByZero."""
        den = _coerce(den)
        if den.is_zero():
            raise DivByZero("division by zero scalar")
        if self.is_zero():
            return ZERO
        if den.is_monomial():
            (k, v), = den._c.items()
            return Scalar({e - k: Fraction(c) / v for e, c in self._c.items()})
        # normalise both to polynomials with nonzero constant term
        sa, sb = self.low_degree(), den.low_degree()
        num = {e - sa: c for e, c in self._c.items()}
        d = {e - sb: c for e, c in den._c.items()}
        dd = max(d)
        lead = d[dd]
        quot: dict[int, Fraction] = {}
        while num:
            top = max(num)
            if top < dd:
                raise NonDivisible(f"{self} is not divisible by {den}", witness=(str(self), str(den)))
            f = _norm(Fraction(num[top]) / lead)
            shift = top - dd
            quot[shift] = f
            for e, c in d.items():
                k = e + shift
                s = _norm(num.get(k, 0) - f * c)
                if s:
                    num[k] = s
                else:
                    num.pop(k, None)
        return Scalar._raw(quot).shift(sa - sb)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.exact_div(other)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other.exact_div(self)

    def sqrt_monomial(self) -> "Scalar":
        """Square root of t^(2k) (coefficient 1); used for q^(1/2) factors."""
        k = self.monomial_exponent()
        if k % 2 or self._c[k] != 1:
            raise NonDivisible(f"no monomial square root of {self}", witness=str(self))
        return Scalar.mono(k // 2)

    def q_exponent(self) -> Fraction:
        """For c*t^k returns k/2, the exponent of q."""
        return Fraction(self.monomial_exponent(), 2)

    def substitute_t(self, value):
        """Evaluate at t = value (value may be Fraction or anything ring-like)."""
        out = 0
        for k, v in self._c.items():
            out = out + v * value ** k
        return out

    # -- comparisons ---------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # -- rendering -----------------------------------------------------------
    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __str__(self):
        """Ascending powers of t: '-1 + 2*t^3'."""
        if not self._c:
            return "0"
        out = ""
        for k, v in self.terms():
            body = _coef_times(v, "" if k == 0 else f"t^{k}")
            out = _join(out, body)
        return out

    def to_q(self) -> str:
        """Descending powers of q, exponents in halves: 'q^1 - 1'."""
        if not self._c:
            return "0"
        out = ""
        for k, v in sorted(self._c.items(), reverse=True):
            out = _join(out, _coef_times(v, "" if k == 0 else _q_atom(k)))
        return out


def _q_atom(k: int) -> str:
    if k % 2 == 0:
        e = k // 2
        return f"q^{e}" if e >= 0 else f"q^({e})"
    return f"q^({k}/2)"


def _coef_times(v: Fraction, atom: str) -> str:
    if not atom:
        return str(v)
    if v == 1:
        return atom
    if v == -1:
        return "-" + atom
    return f"{v}*{atom}"


def _join(acc: str, body: str) -> str:
    if not acc:
        return body
    if body.startswith("-"):
        return f"{acc} - {body[1:]}"
    return f"{acc} + {body}"


ZERO = Scalar()
ONE = Scalar.const(1)
T = Scalar.mono(1)
Q = Scalar.mono(2)


def q_power(exp) -> Scalar:
    """q^exp for exp in (1/2)Z."""
    e = Fraction(exp) * 2
    if e.denominator != 1:
        raise NonDivisible(f"q^{exp} is outside the half-integer exponent lattice", witness=str(exp))
    return Scalar.mono(int(e))


def scalar_sum(items: Iterable[Scalar]) -> Scalar:
    out = ZERO
    for s in items:
        out = out + s
    return out


def parse_scalar(text: str) -> Scalar:
    """Parse '3*q^(1/2) - t^-2 + 1/2' style input."""
    from .expr import evaluate_scalar

    return evaluate_scalar(text)
