"""Based root data (X, R, Y, R^vee, Delta) and their finite Weyl groups.

X and Y are both realised as Z^n with an explicit integer pairing matrix P, so
<x, y> = x^T P y.  Weyl group elements are stored by their matrices on Y and
on X, together with a reduced word in the simple reflections.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg as la
from .errors import BadInput, Budget, NotInGroup, UnknownRoot
from .report import Report

IVec = tuple[int, ...]
IMat = tuple[tuple[int, ...], ...]

DEFAULT_CAP = 10_000


def _imat_mul(a: IMat, b: IMat) -> IMat:
    n = len(b[0]) if b else 0
    return tuple(tuple(sum(r[k] * b[k][j] for k in range(len(r))) for j in range(n)) for r in a)


def _imat_vec(m: IMat, v: Sequence[int]) -> IVec:
    return tuple(sum(a * b for a, b in zip(r, v)) for r in m)


def _iid(n: int) -> IMat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


class BasedRootDatum:
    """A based root datum in coordinates.

    ``roots[i]`` is an X-vector and ``coroots[i]`` its coroot (a Y-vector);
    ``basis`` lists the indices of the simple roots.
    """

    def __init__(self, pairing, roots, coroots, basis):
        self.pairing: IMat = tuple(tuple(int(x) for x in row) for row in pairing)
        self.rank = len(self.pairing)
        self.roots: tuple[IVec, ...] = tuple(tuple(int(x) for x in r) for r in roots)
        self.coroots: tuple[IVec, ...] = tuple(tuple(int(x) for x in r) for r in coroots)
        self.basis: tuple[int, ...] = tuple(int(i) for i in basis)
        if len(self.roots) != len(self.coroots):
            raise BadInput("roots and coroots must have the same length")
        for v in self.roots + self.coroots:
            if len(v) != self.rank:
                raise BadInput(f"vector {v} has the wrong dimension")
        if any(i < 0 or i >= len(self.roots) for i in self.basis):
            raise BadInput("basis index out of range")
        self._index = {r: i for i, r in enumerate(self.roots)}

    # -- basic data ----------------------------------------------------------
    @property
    def rank_X(self) -> int:
        return self.rank

    @property
    def rank_Y(self) -> int:
        return self.rank

    @property
    def simple_roots(self) -> list[IVec]:
        return [self.roots[i] for i in self.basis]

    @property
    def simple_coroots(self) -> list[IVec]:
        return [self.coroots[i] for i in self.basis]

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(x[i] * self.pairing[i][j] * y[j] for i in range(self.rank) for j in range(self.rank))

    def root_index(self, alpha: Sequence[int]) -> int:
        try:
            return self._index[tuple(alpha)]
        except KeyError:
            raise UnknownRoot(f"{tuple(alpha)} is not a root", witness=tuple(alpha)) from None

    def coroot_of(self, alpha: Sequence[int]) -> IVec:
        return self.coroots[self.root_index(alpha)]

    def reflect_Y(self, alpha: Sequence[int], y: Sequence[int]) -> IVec:
        """s_alpha(y) = y - <alpha, y> alpha^vee."""
        av = self.coroot_of(alpha)
        c = self.pair(alpha, y)
        return tuple(yi - c * ai for yi, ai in zip(y, av))

    def reflect_X(self, alpha: Sequence[int], x: Sequence[int]) -> IVec:
        """s_alpha(x) = x - <x, alpha^vee> alpha."""
        av = self.coroot_of(alpha)
        c = self.pair(x, av)
        return tuple(xi - c * ai for xi, ai in zip(x, alpha))

    def reflect(self, alpha: Sequence[int], v: Sequence[int], on: str = "X") -> IVec:
        if on == "X":
            return self.reflect_X(alpha, v)
        if on == "Y":
            return self.reflect_Y(alpha, v)
        raise BadInput("on must be 'X' or 'Y'")

    def reflection_matrix_Y(self, i: int) -> IMat:
        a = self.roots[i]
        n = self.rank
        cols = [self.reflect_Y(a, tuple(int(k == j) for k in range(n))) for j in range(n)]
        return tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))

    def reflection_matrix_X(self, i: int) -> IMat:
        a = self.roots[i]
        n = self.rank
        cols = [self.reflect_X(a, tuple(int(k == j) for k in range(n))) for j in range(n)]
        return tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))

    # -- positivity ----------------------------------------------------------
    @cached_property
    def simple_coefficients(self) -> dict[int, tuple[Fraction, ...] | None]:
        """Coefficients of every root in the simple roots (None if not in their span)."""
        cols = la.transpose(la.fmat(self.simple_roots)) if self.basis else ()
        out = {}
        for i, r in enumerate(self.roots):
            if not self.basis:
                out[i] = None
                continue
            out[i] = la.solve(cols, la.fvec(r))
        return out

    @cached_property
    def positive(self) -> tuple[int, ...]:
        out = []
        for i, c in self.simple_coefficients.items():
            if c is not None and all(x >= 0 for x in c):
                out.append(i)
        return tuple(out)

    def is_positive(self, alpha: Sequence[int]) -> bool:
        return self.root_index(alpha) in set(self.positive)

    def height(self, alpha: Sequence[int]) -> int:
        c = self.simple_coefficients[self.root_index(alpha)]
        return int(sum(c))

    def in_2X(self, alpha: Sequence[int]) -> bool:
        return all(x % 2 == 0 for x in alpha)

    # -- validation ----------------------------------------------------------
    def check(self) -> Report:
        return check_root_datum(self)

    # -- Weyl group ----------------------------------------------------------
    def weyl_group(self, cap: int = DEFAULT_CAP) -> "WeylGroup":
        wg = self.__dict__.get("_wg")
        if wg is None or wg.cap < cap and wg.truncated:
            wg = WeylGroup(self, cap)
            self.__dict__["_wg"] = wg
        return wg

    # -- serialisation -------------------------------------------------------
    def to_json(self) -> dict:
        return {"pairing": [list(r) for r in self.pairing], "roots": [list(r) for r in self.roots],
                "coroots": [list(r) for r in self.coroots], "basis": list(self.basis)}

    @classmethod
    def from_json(cls, data: dict) -> "BasedRootDatum":
        try:
            return cls(data["pairing"], data["roots"], data["coroots"], data["basis"])
        except KeyError as exc:
            raise BadInput(f"root datum is missing field {exc}") from None

    def __eq__(self, other):
        return (isinstance(other, BasedRootDatum) and self.pairing == other.pairing
                and self.roots == other.roots and self.coroots == other.coroots and self.basis == other.basis)

    def __hash__(self):
        return hash((self.pairing, self.roots, self.coroots, self.basis))

    def __repr__(self):
        return f"BasedRootDatum(rank={self.rank}, roots={len(self.roots)}, simple={self.simple_roots})"

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def check_root_datum(d: BasedRootDatum) -> Report:
    """Check the based-root-datum axioms, each with a witness on failure."""
    rep = Report("root datum axioms")
    det = la.rank(la.fmat(d.pairing)) == d.rank if d.rank else True
    unimod = False
    if det:
        inv = la.inverse(la.fmat(d.pairing)) if d.rank else ()
        unimod = all(x.denominator == 1 for row in inv for x in row)
    rep.add("pairing-perfect", unimod, None if unimod else d.pairing)

    bad = next((r for r, c in zip(d.roots, d.coroots) if d.pair(r, c) != 2), None)
    rep.add("pairing-normalization", bad is None, bad)

    roots = set(d.roots)
    coroots = set(d.coroots)
    w = None
    for a, av in zip(d.roots, d.coroots):
        for b in d.roots:
            c = d.pair(b, av)
            img = tuple(bi - c * ai for bi, ai in zip(b, a))
            if img not in roots:
                w = (a, b)
                break
        if w:
            break
    rep.add("reflection-stable-R", w is None, w)

    w = None
    for a, av in zip(d.roots, d.coroots):
        for bv in d.coroots:
            c = d.pair(a, bv)
            img = tuple(bi - c * ai for bi, ai in zip(bv, av))
            if img not in coroots:
                w = (a, bv)
                break
        if w:
            break
    rep.add("reflection-stable-Rvee", w is None, w)

    # reflections must match on the bijection alpha -> alpha^vee
    w = None
    idx = {r: i for i, r in enumerate(d.roots)}
    for a, av in zip(d.roots, d.coroots):
        for b, bv in zip(d.roots, d.coroots):
            c = d.pair(b, av)
            img = tuple(bi - c * ai for bi, ai in zip(b, a))
            c2 = d.pair(a, bv)
            imgv = tuple(bi - c2 * ai for bi, ai in zip(bv, av))
            if img in idx and d.coroots[idx[img]] != imgv:
                w = (a, b)
                break
        if w:
            break
    rep.add("coroot-bijection", w is None, w)

    doubled = next((r for r in d.roots if tuple(2 * x for x in r) in roots), None)
    rep.add("reduced", doubled is None, doubled)

    neg = next((r for r in d.roots if tuple(-x for x in r) not in roots), None)
    rep.add("symmetric", neg is None, neg)

    simple = d.simple_roots
    indep = la.independent(la.fmat(simple)) if simple else True
    bad = None
    if indep:
        for i, c in d.simple_coefficients.items():
            if c is None or not la.is_integral(c) or not (all(x >= 0 for x in c) or all(x <= 0 for x in c)):
                bad = d.roots[i]
                break
    else:
        bad = tuple(simple)
    rep.add("basis", bad is None, bad)
    return rep


@dataclass(frozen=True)
class WeylElt:
    index: int
    word: tuple[int, ...]
    mat_y: IMat
    mat_x: IMat

    @property
    def length(self) -> int:
        return len(self.word)

    def name(self) -> str:
        return "e" if not self.word else "".join(f"s{i + 1}" for i in self.word)


class WeylGroup:
    """Finite Weyl group W_0 enumerated by closure; order (length, lex word)."""

    def __init__(self, datum: BasedRootDatum, cap: int = DEFAULT_CAP):
        self.datum = datum
        self.cap = cap
        self.truncated = False
        n = datum.rank
        self.gens_y = [datum.reflection_matrix_Y(i) for i in datum.basis]
        self.gens_x = [datum.reflection_matrix_X(i) for i in datum.basis]
        ident = WeylElt(0, (), _iid(n), _iid(n))
        elements = [ident]
        by_mat = {ident.mat_y: 0}
        layer = [ident]
        while layer:
            nxt = []
            for w in layer:
                for s, (gy, gx) in enumerate(zip(self.gens_y, self.gens_x)):
                    my = _imat_mul(w.mat_y, gy)
                    if my in by_mat:
                        continue
                    if len(elements) >= cap:
                        self.truncated = True
                        raise Budget(f"Weyl group exceeds {cap} elements", witness=cap)
                    e = WeylElt(-1, w.word + (s,), my, _imat_mul(w.mat_x, gx))
                    by_mat[my] = -1
                    nxt.append(e)
            nxt.sort(key=lambda e: e.word)
            for e in nxt:
                e2 = WeylElt(len(elements), e.word, e.mat_y, e.mat_x)
                by_mat[e.mat_y] = e2.index
                elements.append(e2)
            layer = [elements[by_mat[e.mat_y]] for e in nxt]
        self.elements: list[WeylElt] = elements
        self._by_mat = by_mat
        self._mul: dict[tuple[int, int], int] = {}
        self._inv: dict[int, int] = {}
        self.rank = len(datum.basis)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> WeylElt:
        return self.elements[i]

    @property
    def identity(self) -> int:
        return 0

    def simple(self, s: int) -> int:
        return self._by_mat[self.gens_y[s]]

    def length(self, w: int) -> int:
        return len(self.elements[w].word)

    def mul(self, a: int, b: int) -> int:
        key = (a, b)
        r = self._mul.get(key)
        if r is None:
            m = _imat_mul(self.elements[a].mat_y, self.elements[b].mat_y)
            r = self._by_mat[m]
            self._mul[key] = r
        return r

    def inverse(self, a: int) -> int:
        r = self._inv.get(a)
        if r is None:
            w = 0
            for s in reversed(self.elements[a].word):
                w = self.mul(w, self.simple(s))
            r = w
            self._inv[a] = r
        return r

    def from_word(self, word: Sequence[int]) -> int:
        w = 0
        for s in word:
            w = self.mul(w, self.simple(s))
        return w

    def find(self, mat_y: IMat) -> int:
        try:
            return self._by_mat[tuple(tuple(int(x) for x in r) for r in mat_y)]
        except KeyError:
            raise NotInGroup("matrix is not in the Weyl group", witness=mat_y) from None

    def act_Y(self, w: int, y: Sequence[int]) -> IVec:
        return _imat_vec(self.elements[w].mat_y, y)

    def act_X(self, w: int, x: Sequence[int]) -> IVec:
        return _imat_vec(self.elements[w].mat_x, x)

    def longest(self) -> int:
        return len(self.elements) - 1

    def is_left_descent(self, s: int, w: int) -> bool:
        return self.length(self.mul(self.simple(s), w)) < self.length(w)

    def inversion_count(self, w: int) -> int:
        d = self.datum
        pos = set(d.roots[i] for i in d.positive)
        return sum(1 for i in d.positive if self.act_X(w, d.roots[i]) not in pos)

    def name(self, w: int) -> str:
        return self.elements[w].name()


def reduced_word(datum: BasedRootDatum, w) -> tuple[int, ...]:
    """Reduced word by repeatedly stripping the smallest left descent.

    ``w`` may be an element index, a WeylElt, or a Y-matrix.
    """
    wg = datum.weyl_group()
    if isinstance(w, WeylElt):
        idx = w.index
    elif isinstance(w, int):
        if not 0 <= w < len(wg):
            raise NotInGroup(f"no element with index {w}", witness=w)
        idx = w
    else:
        idx = wg.find(w)
    word = []
    while wg.length(idx):
        for s in range(wg.rank):
            v = wg.mul(wg.simple(s), idx)
            if wg.length(v) < wg.length(idx):
                word.append(s)
                idx = v
                break
    return tuple(word)


def weyl_enumerate(datum: BasedRootDatum, cap: int = DEFAULT_CAP) -> list[WeylElt]:
    return list(datum.weyl_group(cap).elements)


# -- standard data ------------------------------------------------------------

def cartan_matrix(kind: str, n: int) -> list[list[int]]:
    """a[i][j] = <alpha_i^vee, alpha_j>; Bourbaki numbering."""
    kind = kind.upper()
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    for i in range(n - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if kind == "A":
        pass
    elif kind == "B":
        if n < 2:
            raise BadInput("B_n needs n >= 2")
        a[n - 1][n - 2] = -2
    elif kind == "C":
        if n < 2:
            raise BadInput("C_n needs n >= 2")
        a[n - 2][n - 1] = -2
    elif kind == "D":
        if n < 4:
            raise BadInput("D_n needs n >= 4")
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    elif kind == "G":
        if n != 2:
            raise BadInput("G_2 only")
        a[0][1] = -3
    else:
        raise BadInput(f"unknown Cartan type {kind}")
    return a


def datum_from_cartan(a: Sequence[Sequence[int]]) -> BasedRootDatum:
    """Datum with Y = coroot lattice (basis: simple coroots) and X its dual.

    alpha_j has X-coordinates (<alpha_j, alpha_i^vee>)_i.
    """
    n = len(a)
    simple = [tuple(a[i][j] for i in range(n)) for j in range(n)]
    simple_v = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    pairing = _iid(n)
    roots = list(simple)
    coroots = list(simple_v)
    seen = set(roots)
    frontier = list(zip(simple, simple_v))
    while frontier:
        new = []
        for r, rv in frontier:
            for s, sv in zip(simple, simple_v):
                c = sum(x * y for x, y in zip(r, sv))
                img = tuple(x - c * y for x, y in zip(r, s))
                c2 = sum(x * y for x, y in zip(s, rv))
                imgv = tuple(x - c2 * y for x, y in zip(rv, sv))
                if img not in seen:
                    seen.add(img)
                    roots.append(img)
                    coroots.append(imgv)
                    new.append((img, imgv))
        frontier = new
    return BasedRootDatum(pairing, roots, coroots, range(n))


def cartan_datum(kind: str, n: int) -> BasedRootDatum:
    return datum_from_cartan(cartan_matrix(kind, n))


def empty_datum(rank: int) -> BasedRootDatum:
    """Torus datum: no roots; the Hecke algebra is the group algebra of Y."""
    return BasedRootDatum(_iid(rank), [], [], [])
