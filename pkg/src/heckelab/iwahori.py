"""Iwahori-Hecke algebras of finite and affine Weyl groups with unequal parameters.

Both kinds of Coxeter group share a small interface: ``identity``,
``simple(name)``, ``mul``, ``length``, ``inverse`` and ``reduced_word``.
Elements of the finite group are indices into the enumerated Weyl group; affine
elements are pairs (translation in Y, finite index) acting by x -> w(x) + y.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg as la
from .affine import AffineWeylElt, SpecialPointData, highest_root, root_components
from .errors import BadInput, BadParameters, Budget, MixedAlgebras, NotInGroup, ParseError
from .expr import evaluate, split_word
from .rootdatum import BasedRootDatum
from .scalar import ONE, ZERO, Scalar

TRANSLATION_CAP = 16


class FiniteCoxeter:
    """The finite Weyl group W_0 of a based root datum, generators s1..sn."""

    affine = False

    def __init__(self, datum: BasedRootDatum):
        self.datum = datum
        self.W = datum.weyl_group()
        self.simple_names = [f"s{i + 1}" for i in range(len(datum.basis))]
        self._simple = {name: self.W.simple(i) for i, name in enumerate(self.simple_names)}
        self.identity = 0

    def simple(self, name: str):
        try:
            return self._simple[name]
        except KeyError:
            raise ParseError(f"unknown simple reflection {name!r}", witness=name) from None

    def mul(self, a, b):
        return self.W.mul(a, b)

    def length(self, a) -> int:
        return self.W.length(a)

    def inverse(self, a):
        return self.W.inverse(a)

    def reduced_word(self, a) -> tuple[str, ...]:
        return tuple(self.simple_names[i] for i in self.W[a].word)

    def elements(self, max_length: int | None = None) -> list:
        return [e.index for e in self.W if max_length is None or e.length <= max_length]

    def __eq__(self, other):
        return isinstance(other, FiniteCoxeter) and self.datum == other.datum

    def __hash__(self):
        return hash(("finite", self.datum))


class AffineCoxeter:
    """W_aff = Y x| W_0 for a datum with Y spanned by the simple coroots.

    ``shifts`` maps each component to the integer m with s0 = t_{m phi^vee} s_phi
    (always 1 for data built at a special point).
    """

    affine = True

    def __init__(self, datum: BasedRootDatum, shifts: Sequence[int] | None = None):
        self.datum = datum
        self.W = datum.weyl_group()
        n = len(datum.basis)
        if n != datum.rank or n == 0:
            raise BadInput("affine Weyl group needs a semisimple datum with Y = Z R^vee")
        cov = la.fmat(datum.simple_coroots)
        if abs(_det(cov)) != 1:
            raise BadInput("simple coroots do not form a basis of Y", witness=datum.simple_coroots)
        self.identity = AffineWeylElt((0,) * n, 0)
        self.components = root_components(datum)
        shifts = list(shifts) if shifts is not None else [1] * len(self.components)
        self.simple_names: list[str] = []
        self._simple: dict[str, AffineWeylElt] = {}
        self.affine_roots: dict[str, int] = {}
        for c, comp in enumerate(self.components):
            name = "s0" if len(self.components) == 1 else f"s0_{c + 1}"
            phi = highest_root(datum, comp)
            s_phi = self._reflection_index(phi)
            y = tuple(shifts[c] * x for x in datum.coroots[phi])
            self._simple[name] = AffineWeylElt(y, s_phi)
            self.simple_names.append(name)
            self.affine_roots[name] = phi
        for i in range(n):
            name = f"s{i + 1}"
            self._simple[name] = AffineWeylElt((0,) * n, self.W.simple(i))
            self.simple_names.append(name)
        # a point of the fundamental alcove: alpha_i(p) = 1/h
        h = 1 + max((datum.height(datum.roots[i]) for i in datum.positive), default=0)
        self._p = la.solve(la.fmat(datum.simple_roots), [Fraction(1, h)] * n)
        self._pos = [datum.roots[i] for i in datum.positive]
        self._words: dict = {}

    @classmethod
    def from_special_point(cls, spd: SpecialPointData) -> "AffineCoxeter":
        comps = root_components(spd.datum)
        shifts = []
        for comp in comps:
            m = next(int(h[3]) for h in spd.highest if h[1] == comp)
            shifts.append(m)
        return cls(spd.datum, shifts)

    def _reflection_index(self, root_idx: int) -> int:
        return self.W.find(self.datum.reflection_matrix_Y(root_idx))

    def simple(self, name: str) -> AffineWeylElt:
        try:
            return self._simple[name]
        except KeyError:
            raise ParseError(f"unknown simple reflection {name!r}", witness=name) from None

    def translation(self, y: Sequence[int]) -> AffineWeylElt:
        return self._check(AffineWeylElt(tuple(int(v) for v in y), 0))

    def _check(self, x: AffineWeylElt) -> AffineWeylElt:
        if any(abs(v) > TRANSLATION_CAP for v in x.translation):
            raise Budget(f"translation {x.translation} exceeds the +-{TRANSLATION_CAP} cap", witness=x.translation)
        return x

    def mul(self, a: AffineWeylElt, b: AffineWeylElt) -> AffineWeylElt:
        moved = self.W.act_Y(a.finite, b.translation)
        return self._check(AffineWeylElt(tuple(u + v for u, v in zip(a.translation, moved)),
                                         self.W.mul(a.finite, b.finite)))

    def inverse(self, a: AffineWeylElt) -> AffineWeylElt:
        wi = self.W.inverse(a.finite)
        y = self.W.act_Y(wi, a.translation)
        return AffineWeylElt(tuple(-v for v in y), wi)

    def apply(self, a: AffineWeylElt, z: Sequence) -> tuple:
        w = self.W[a.finite].mat_y
        return tuple(sum(Fraction(w[i][j]) * z[j] for j in range(len(z))) + a.translation[i]
                     for i in range(len(z)))

    def length(self, a: AffineWeylElt) -> int:
        """Number of root hyperplanes separating the fundamental alcove from its image."""
        z = self.apply(a, self._p)
        return sum(abs(math.floor(la.dot(alpha, z))) for alpha in self._pos)

    def reduced_word(self, a: AffineWeylElt) -> tuple[str, ...]:
        w = self._words.get(a)
        if w is not None:
            return w
        word = []
        x = a
        lx = self.length(x)
        while lx:
            for name in self.simple_names:
                y = self.mul(self._simple[name], x)
                ly = self.length(y)
                if ly < lx:
                    word.append(name)
                    x, lx = y, ly
                    break
            else:  # pragma: no cover - every nontrivial element has a descent
                raise NotInGroup("no descent found", witness=a)
        w = tuple(word)
        self._words[a] = w
        return w

    def elements(self, max_length: int) -> list[AffineWeylElt]:
        """All elements of length <= max_length, ordered by (length, word)."""
        seen = {self.identity}
        layer = [self.identity]
        out = [self.identity]
        for _ in range(max_length):
            nxt = set()
            for x in layer:
                for name in self.simple_names:
                    y = self.mul(x, self._simple[name])
                    if y not in seen and self.length(y) > self.length(x):
                        nxt.add(y)
            seen |= nxt
            layer = sorted(nxt, key=self.sort_key)
            out.extend(layer)
        return out

    def sort_key(self, a):
        return (self.length(a), self.reduced_word(a))

    def __eq__(self, other):
        return isinstance(other, AffineCoxeter) and self.datum == other.datum and self._simple == other._simple

    def __hash__(self):
        return hash(("affine", self.datum))


def _det(m) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    rows = [list(r) for r in m]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det *= rows[c][c]
        for r in range(c + 1, n):
            f = rows[r][c] / rows[c][c]
            rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return det


def coxeter_order(group, s, t, limit: int = 6) -> int | None:
    """Order of st (None when larger than limit, i.e. infinite for Weyl groups)."""
    st = group.mul(s, t)
    x = st
    for k in range(1, limit + 1):
        if x == group.identity:
            return k
        x = group.mul(x, st)
    return None


def conjugacy_classes(group) -> list[list[str]]:
    """Simple reflections grouped by conjugacy (odd Coxeter-graph edges)."""
    names = list(group.simple_names)
    parent = {n: n for n in names}

    def find(n):
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    for i, a in enumerate(names):
        for b in names[i + 1:]:
            try:
                m = coxeter_order(group, group.simple(a), group.simple(b))
            except Budget:
                m = None
            if m is not None and m % 2 == 1:
                parent[find(a)] = find(b)
    classes: dict[str, list[str]] = {}
    for n in names:
        classes.setdefault(find(n), []).append(n)
    return list(classes.values())


class IwahoriHecke:
    """H(W, q): basis T_w, (T_s + 1)(T_s - q_s) = 0 plus braid relations."""

    def __init__(self, group, params: Mapping[str, Scalar]):
        self.group = group
        q = {}
        for name in group.simple_names:
            if name not in params:
                raise BadParameters(f"missing parameter for {name}", witness=name)
            v = params[name]
            if not isinstance(v, Scalar):
                v = Scalar.const(v) if isinstance(v, int) else _parse_q(v)
            if not v.is_monomial() or v.terms()[0][1] != 1 or v.monomial_exponent() < 0:
                raise BadParameters(f"q_{name} must be a monomial t^m with m >= 0", witness=(name, str(v)))
            q[name] = v
        for cls in conjugacy_classes(group):
            for other in cls[1:]:
                if q[other] != q[cls[0]]:
                    raise BadParameters(f"{cls[0]} and {other} are conjugate but have different parameters",
                                        witness=(cls[0], other))
        self.q = q
        self._qw: dict = {}

    # -- element constructors ------------------------------------------------
    def zero(self) -> "HeckeElt":
        return HeckeElt(self, {})

    def one(self) -> "HeckeElt":
        return HeckeElt(self, {self.group.identity: ONE})

    def from_scalar(self, s: Scalar) -> "HeckeElt":
        return HeckeElt(self, {self.group.identity: s} if s else {})

    def T(self, w) -> "HeckeElt":
        return HeckeElt(self, {w: ONE})

    def Ts(self, name: str) -> "HeckeElt":
        return self.T(self.group.simple(name))

    def generator(self, word: str) -> "HeckeElt":
        out = self.one()
        for name in reversed(split_word(word)):
            out = self.left_mul_simple(name, out)
        return out

    def theta(self, coords):
        raise ParseError("th[...] is not available in the standard presentation")

    def parse(self, text: str) -> "HeckeElt":
        return evaluate(text, self)

    def q_of(self, w) -> Scalar:
        """q_w = product of q_s over a reduced word."""
        r = self._qw.get(w)
        if r is None:
            r = ONE
            for name in self.group.reduced_word(w):
                r = r * self.q[name]
            self._qw[w] = r
        return r

    def t_inverse(self, name: str) -> "HeckeElt":
        """T_s^{-1} = (T_s - (q_s - 1)) / q_s."""
        qs = self.q[name]
        inv = qs ** -1
        return HeckeElt(self, _clean({self.group.simple(name): inv, self.group.identity: (ONE - qs) * inv}))

    def T_inverse(self, w) -> "HeckeElt":
        out = self.one()
        for name in self.group.reduced_word(w):
            out = self.t_inverse(name) * out
        return out

    # -- multiplication ------------------------------------------------------
    def left_mul_simple(self, name: str, x: "HeckeElt") -> "HeckeElt":
        g = self.group
        s = g.simple(name)
        qs = self.q[name]
        out: dict = {}
        for w, c in x.terms.items():
            sw = g.mul(s, w)
            if g.length(sw) > g.length(w):
                _acc(out, sw, c)
            else:
                _acc(out, w, c * (qs - ONE))
                _acc(out, sw, c * qs)
        return HeckeElt(self, out)

    def mul(self, x: "HeckeElt", y: "HeckeElt") -> "HeckeElt":
        if x.alg is not self or y.alg is not self:
            raise MixedAlgebras("elements belong to different algebras")
        out: dict = {}
        for w, c in x.terms.items():
            z = y
            for name in reversed(self.group.reduced_word(w)):
                z = self.left_mul_simple(name, z)
            for v, d in z.terms.items():
                _acc(out, v, c * d)
        return HeckeElt(self, out)

    def sort_key(self, w):
        return (self.group.length(w), self.group.reduced_word(w))

    def word_name(self, w) -> str:
        word = self.group.reduced_word(w)
        return "".join(word) if word else "e"


def _parse_q(v) -> Scalar:
    from .scalar import parse_scalar
    return parse_scalar(str(v))


def _acc(d: dict, k, v: Scalar) -> None:
    if not v:
        return
    s = d.get(k)
    s = v if s is None else s + v
    if s:
        d[k] = s
    else:
        d.pop(k, None)


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def render_coefficient(c: Scalar) -> str:
    text = c.to_q()
    if c.is_monomial():
        return text
    return f"({text})"


def render_terms(items: Iterable[tuple[Scalar, str]]) -> str:
    """Join 'coef*atom' pieces; a coefficient of 1 is dropped."""
    out = ""
    for c, atom in items:
        if c == ONE:
            body = atom
        elif c == -ONE:
            body = "-" + atom
        else:
            body = f"{render_coefficient(c)}*{atom}"
        if not out:
            out = body
        elif body.startswith("-"):
            out += " - " + body[1:]
        else:
            out += " + " + body
    return out or "0"


class HeckeElt:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: IwahoriHecke, terms: dict):
        self.alg = alg
        self.terms = {k: v for k, v in terms.items() if v}

    def _coerce(self, other):
        if isinstance(other, HeckeElt):
            if other.alg is not self.alg:
                raise MixedAlgebras("elements belong to different algebras")
            return other
        if isinstance(other, int):
            other = Scalar.const(other)
        if isinstance(other, Scalar):
            return self.alg.from_scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return HeckeElt(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return HeckeElt(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            s = Scalar.const(other) if isinstance(other, int) else other
            return HeckeElt(self.alg, {k: v * s for k, v in self.terms.items()})
        if isinstance(other, HeckeElt):
            return self.alg.mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Scalar)):
            other = self.alg.from_scalar(Scalar.const(other) if isinstance(other, int) else other)
        if not isinstance(other, HeckeElt):
            return False
        return other.alg is self.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, w) -> Scalar:
        return self.terms.get(w, ZERO)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: self.alg.sort_key(kv[0]), reverse=True)

    def __str__(self):
        return render_terms((c, f"T[{self.alg.word_name(w)}]") for w, c in self.sorted_terms())

    def __repr__(self):
        return f"HeckeElt({self})"


def hecke_algebra(group, params: Mapping[str, Scalar]) -> IwahoriHecke:
    return IwahoriHecke(group, params)


def hecke_mul(x: HeckeElt, y: HeckeElt) -> HeckeElt:
    if x.alg is not y.alg:
        raise MixedAlgebras("elements belong to different algebras")
    return x.alg.mul(x, y)


def t_inverse(alg: IwahoriHecke, name: str) -> HeckeElt:
    return alg.t_inverse(name)
