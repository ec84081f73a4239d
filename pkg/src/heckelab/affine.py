"""Affine root systems presented by finitely many arithmetic families.

A family ``(gradient, offset, period)`` stands for the affine functions
x -> gradient . x + offset + period * m, m in Z.  Families sharing a gradient
are merged into a single coset c0 + k Z, and k is the period k_a of every root
with that gradient.

Points and gradients are rational vectors; the Euclidean structure on V is a
positive definite matrix G (identity unless given), so the coroot of a
gradient g is 2 G^-1 g / (g^T G^-1 g).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from . import linalg as la
from .errors import (BadInput, DependentGradients, NoExtension, NotInGroup,
                     NotSpecial, OnWall)
from .report import Report
from .rootdatum import BasedRootDatum

DEFAULT_WINDOW = 3


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def _fmt(x: Fraction):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


class AffineRoot(NamedTuple):
    gradient: tuple
    const: Fraction

    def __call__(self, x: Sequence) -> Fraction:
        return la.dot(self.gradient, x) + self.const

    def __neg__(self):
        return AffineRoot(la.neg(self.gradient), -self.const)

    def shifted(self, c) -> "AffineRoot":
        return AffineRoot(self.gradient, self.const + c)

    def to_json(self) -> dict:
        return {"gradient": [_fmt(g) for g in self.gradient], "const": _fmt(self.const)}

    def __str__(self):
        return f"{[_fmt(g) for g in self.gradient]}{'+' if self.const >= 0 else '-'}{_fmt(abs(self.const))}"


def make_root(gradient: Iterable, const=0) -> AffineRoot:
    return AffineRoot(la.fvec(gradient), Fraction(const))


def root_from_json(data) -> AffineRoot:
    if isinstance(data, dict):
        return make_root([_frac(g) for g in data["gradient"]], _frac(data.get("const", 0)))
    if isinstance(data, (list, tuple)) and data:
        *g, c = data
        return make_root([_frac(x) for x in g], _frac(c))
    raise BadInput(f"cannot read an affine root from {data!r}")


@dataclass(frozen=True)
class Family:
    gradient: tuple
    offset: Fraction
    period: Fraction

    def to_json(self) -> dict:
        return {"gradient": [_fmt(g) for g in self.gradient], "offset": _fmt(self.offset),
                "period": _fmt(self.period)}


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    a, b = abs(Fraction(a)), abs(Fraction(b))
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return Fraction(math.gcd(int(a * den), int(b * den)), den)


def _frac_lcm(a: Fraction, b: Fraction) -> Fraction:
    g = _frac_gcd(a, b)
    return abs(a * b) / g


def _mod(x: Fraction, k: Fraction) -> Fraction:
    return x - k * math.floor(x / k)


@dataclass(frozen=True)
class GradientClass:
    """All roots with one gradient: constants c0 + k Z (0 <= c0 < k)."""

    gradient: tuple
    c0: Fraction
    k: Fraction

    def contains(self, c) -> bool:
        return ((Fraction(c) - self.c0) / self.k).denominator == 1

    def consts_between(self, lo: Fraction, hi: Fraction) -> list[Fraction]:
        """Constants c of the class with lo < c < hi (strict)."""
        m0 = math.floor((lo - self.c0) / self.k) + 1
        out = []
        m = m0
        while True:
            c = self.c0 + self.k * m
            if c >= hi:
                break
            if c > lo:
                out.append(c)
            m += 1
        return out

    def min_positive(self, v: Fraction) -> Fraction:
        """Smallest constant c with v + c > 0."""
        m = math.floor((-v - self.c0) / self.k) + 1
        return self.c0 + self.k * m

    def vanishing(self, v: Fraction) -> Fraction | None:
        """The constant c with v + c = 0, if it belongs to the class."""
        return -v if self.contains(-v) else None

    def min_nonzero_abs(self, v: Fraction) -> Fraction:
        r = _mod(v + self.c0, self.k)
        return self.k if r == 0 else min(r, self.k - r)


class AffineMap:
    """x -> A x + b on V."""

    __slots__ = ("A", "b")

    def __init__(self, A, b):
        self.A = la.fmat(A)
        self.b = la.fvec(b)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(la.identity(n), la.zeros(n))

    def __call__(self, x):
        return la.add(la.mat_vec(self.A, x), self.b)

    def __mul__(self, other: "AffineMap") -> "AffineMap":
        return AffineMap(la.mat_mul(self.A, other.A), la.add(la.mat_vec(self.A, other.b), self.b))

    def inverse(self) -> "AffineMap":
        ai = la.inverse(self.A)
        return AffineMap(ai, la.neg(la.mat_vec(ai, self.b)))

    def act_on_root(self, a: AffineRoot) -> AffineRoot:
        """(w a)(x) = a(w^-1 x)."""
        inv = self.inverse()
        g = la.vec_mat(a.gradient, inv.A)
        return AffineRoot(g, la.dot(a.gradient, inv.b) + a.const)

    def key(self):
        return (self.A, self.b)

    def __eq__(self, other):
        return isinstance(other, AffineMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_identity(self) -> bool:
        n = len(self.b)
        return self.A == la.identity(n) and all(x == 0 for x in self.b)

    def __repr__(self):
        return f"AffineMap(A={[[_fmt(x) for x in r] for r in self.A]}, b={[_fmt(x) for x in self.b]})"


class AffineRootSystem:
    def __init__(self, dim: int, families: Iterable[Family], inner_product=None):
        self.dim = int(dim)
        fams = []
        for f in families:
            g = la.fvec(f.gradient)
            if len(g) != self.dim:
                raise BadInput(f"gradient {f.gradient} has the wrong dimension")
            if all(x == 0 for x in g):
                raise BadInput("zero gradient")
            p = Fraction(f.period)
            if p <= 0:
                raise BadInput("period must be positive")
            fams.append(Family(g, Fraction(f.offset), p))
        self.families: tuple[Family, ...] = tuple(fams)
        if inner_product is None:
            self.inner_product = la.identity(self.dim)
            self.inner_product_given = False
        else:
            self.inner_product = la.fmat(inner_product)
            self.inner_product_given = True
        self._ginv = la.inverse(self.inner_product) if self.dim else ()
        self._classes, self._merge_failures = self._merge()
        self._coroots: dict[tuple, tuple] = {}
        self._pairings: dict[tuple, Fraction] = {}

    # -- construction --------------------------------------------------------
    def _merge(self):
        by_grad: dict[tuple, list[Family]] = {}
        for f in self.families:
            by_grad.setdefault(f.gradient, []).append(f)
        classes = {}
        failures = []
        for g, fams in by_grad.items():
            L = fams[0].period
            for f in fams[1:]:
                L = _frac_lcm(L, f.period)
            residues = set()
            for f in fams:
                for m in range(int(L / f.period)):
                    residues.add(_mod(f.offset + f.period * m, L))
            res = sorted(residues)
            k = L
            for r in res[1:]:
                k = _frac_gcd(k, r - res[0])
            c0 = _mod(res[0], k)
            expected = {_mod(c0 + k * m, L) for m in range(int(L / k))}
            if expected != residues:
                failures.append(g)
            classes[g] = GradientClass(g, c0, k)
        return classes, failures

    @classmethod
    def from_json(cls, data: dict) -> "AffineRootSystem":
        try:
            fams = [Family(tuple(_frac(x) for x in f["gradient"]), _frac(f.get("offset", 0)),
                           _frac(f.get("period", 1))) for f in data["families"]]
            return cls(int(data["dim"]), fams, data.get("inner_product"))
        except (KeyError, TypeError) as exc:
            raise BadInput(f"bad affine root system description: {exc}") from None

    def to_json(self) -> dict:
        out = {"dim": self.dim, "families": [f.to_json() for f in self.families]}
        if self.inner_product_given:
            out["inner_product"] = [[_fmt(x) for x in r] for r in self.inner_product]
        return out

    # -- root data -----------------------------------------------------------
    @cached_property
    def _sorted_gradients(self) -> tuple:
        return tuple(sorted(self._classes))

    @property
    def gradients(self) -> list[tuple]:
        return list(self._sorted_gradients)

    def pairing(self, g, h) -> Fraction:
        """<g, (Dh)^vee>, cached."""
        key = (g, h)
        v = self._pairings.get(key)
        if v is None:
            v = self._pairings[key] = la.dot(g, self.coroot(h))
        return v

    def gradient_class(self, g) -> GradientClass:
        try:
            return self._classes[tuple(Fraction(x) for x in g)]
        except KeyError:
            raise BadInput(f"{tuple(g)} is not a gradient of the system") from None

    def contains(self, a: AffineRoot) -> bool:
        c = self._classes.get(tuple(a.gradient))
        return c is not None and c.contains(a.const)

    def period(self, a) -> Fraction:
        g = a.gradient if isinstance(a, AffineRoot) else a
        return self.gradient_class(g).k

    def roots_in_window(self, window: int = DEFAULT_WINDOW) -> list[AffineRoot]:
        out = []
        for g in self.gradients:
            c = self._classes[g]
            for const in c.consts_between(Fraction(-window) - 1, Fraction(window) + 1):
                if abs(const) <= window:
                    out.append(AffineRoot(g, const))
        return out

    def gram(self, g, h) -> Fraction:
        return la.dot(g, la.mat_vec(self._ginv, h))

    def coroot(self, g) -> tuple:
        """(Dg)^vee as a vector of V."""
        g = la.fvec(g)
        cv = self._coroots.get(g)
        if cv is None:
            cv = self._coroots[g] = la.scale(2 / self.gram(g, g), la.mat_vec(self._ginv, g))
        return cv

    def pair(self, g, a_root: AffineRoot) -> Fraction:
        """<g, (Da)^vee>."""
        return la.dot(g, self.coroot(a_root.gradient))

    def reflect(self, a: AffineRoot, b: AffineRoot) -> AffineRoot:
        """s_a(b) = b - <Db, a^vee> a."""
        c = self.pair(b.gradient, a)
        return AffineRoot(la.sub(b.gradient, la.scale(c, a.gradient)), b.const - c * a.const)

    def reflection_map(self, a: AffineRoot) -> AffineMap:
        av = self.coroot(a.gradient)
        n = self.dim
        A = tuple(tuple(Fraction(int(i == j)) - av[i] * a.gradient[j] for j in range(n)) for i in range(n))
        return AffineMap(A, la.scale(-a.const, av))

    def indivisible(self, a: AffineRoot) -> bool:
        half = AffineRoot(la.scale(Fraction(1, 2), a.gradient), a.const / 2)
        return not self.contains(half)

    @cached_property
    def components(self) -> list[list[tuple]]:
        """Gradients grouped into mutually orthogonal irreducible pieces."""
        gs = self.gradients
        comp: list[list[tuple]] = []
        seen = set()
        for g in gs:
            if g in seen:
                continue
            block = [g]
            seen.add(g)
            i = 0
            while i < len(block):
                for h in gs:
                    if h not in seen and self.gram(block[i], h) != 0:
                        seen.add(h)
                        block.append(h)
                i += 1
            comp.append(sorted(block))
        return comp

    def __repr__(self):
        return f"AffineRootSystem(dim={self.dim}, gradients={len(self._classes)})"


# -- standard systems ----------------------------------------------------------

def _e(n: int, i: int) -> tuple:
    return tuple(Fraction(int(j == i)) for j in range(n))


def affine_A(n: int) -> AffineRootSystem:
    """Type A~_n realised on Q^(n+1) with roots e_i - e_j + Z."""
    m = n + 1
    fams = []
    for i in range(m):
        for j in range(m):
            if i != j:
                fams.append(Family(la.sub(_e(m, i), _e(m, j)), Fraction(0), Fraction(1)))
    return AffineRootSystem(m, fams)


def affine_A1_line() -> AffineRootSystem:
    """A~_1 on Q with roots +-x + Z."""
    return AffineRootSystem(1, [Family((Fraction(1),), Fraction(0), Fraction(1)),
                                Family((Fraction(-1),), Fraction(0), Fraction(1))])


def affine_C(n: int) -> AffineRootSystem:
    """Roots +-e_i +- e_j + Z and +-2 e_i + Z on Q^n."""
    fams = []
    for i in range(n):
        for j in range(i + 1, n):
            for si in (1, -1):
                for sj in (1, -1):
                    g = la.add(la.scale(si, _e(n, i)), la.scale(sj, _e(n, j)))
                    fams.append(Family(g, Fraction(0), Fraction(1)))
        for s in (2, -2):
            fams.append(Family(la.scale(s, _e(n, i)), Fraction(0), Fraction(1)))
    return AffineRootSystem(n, fams)


# -- verification --------------------------------------------------------------

def system_from_spec(spec) -> AffineRootSystem:
    """A built-in system ("A1", "A2", "C2", ...) or one given as JSON."""
    if isinstance(spec, str):
        kind, n = spec[:1].upper(), spec[1:]
        if not n.isdigit():
            raise BadInput(f"no built-in affine system {spec!r}", witness=spec)
        if kind == "A":
            return affine_A1_line() if int(n) == 1 else affine_A(int(n))
        if kind == "C":
            return affine_C(int(n))
        raise BadInput(f"no built-in affine system {spec!r}", witness=spec)
    return AffineRootSystem.from_json(spec)


def verify_affine_system(sys: AffineRootSystem, window: int = DEFAULT_WINDOW) -> Report:
    if window < 2:
        raise BadInput("window must be at least 2")
    rep = Report(f"affine root system axioms (window {window})")
    rep.add("period-lattice", not sys._merge_failures,
            sys._merge_failures[0] if sys._merge_failures else None)

    roots = sys.roots_in_window(window)
    bad = None
    bad_int = None
    for a in roots:
        for b in roots:
            c = sys.pair(b.gradient, a)
            if c.denominator != 1 and bad_int is None:
                bad_int = (str(a), str(b))
            img = sys.reflect(a, b)
            if not sys.contains(img) and bad is None:
                bad = (str(a), str(b))
        if bad and bad_int:
            break
    rep.add("reflection-closure", bad is None, bad)
    rep.add("integrality", bad_int is None, bad_int)

    # gradients form a finite root system: closed under the linear reflections
    gs = set(sys.gradients)
    bad = None
    for g in sys.gradients:
        for h in sys.gradients:
            c = la.dot(h, sys.coroot(g))
            if la.sub(h, la.scale(c, g)) not in gs:
                bad = (g, h)
                break
        if bad:
            break
    rep.add("gradient-root-system", bad is None, bad)

    sym = next((g for g in gs if la.neg(g) not in gs), None)
    rep.add("symmetric", sym is None, sym)

    # the inner product must be invariant under every gradient reflection
    G = sys.inner_product
    bad = None
    for g in sys.gradients:
        A = sys.reflection_map(AffineRoot(g, Fraction(0))).A
        if la.mat_mul(la.transpose(A), la.mat_mul(G, A)) != G:
            bad = g
            break
    rep.add("inner-product-invariant", bad is None, bad)
    return rep


# -- chambers and bases ----------------------------------------------------------

@dataclass(frozen=True)
class AffineBasis:
    roots: tuple  # of AffineRoot, sorted
    witness: tuple  # point in the chamber

    def __contains__(self, a) -> bool:
        return a in self.roots

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def key(self) -> frozenset:
        return frozenset(self.roots)

    def to_json(self) -> dict:
        return {"roots": [a.to_json() for a in self.roots], "witness": [_fmt(x) for x in self.witness]}


def _proportional(a: AffineRoot, b: AffineRoot) -> Fraction | None:
    """lambda with b = lambda * a, or None."""
    lam = None
    for x, y in zip(a.gradient + (a.const,), b.gradient + (b.const,)):
        if x == 0:
            if y != 0:
                return None
            continue
        r = y / x
        if lam is None:
            lam = r
        elif r != lam:
            return None
    return lam


def check_point_generic(sys: AffineRootSystem, x) -> None:
    for g in sys.gradients:
        c = sys._classes[g].vanishing(la.dot(g, x))
        if c is not None:
            raise OnWall(f"point lies on the hyperplane of {AffineRoot(g, c)}", witness=AffineRoot(g, c))


def _is_wall(sys: AffineRootSystem, a: AffineRoot, vals: dict) -> bool:
    """True iff H_a is the only hyperplane separating x and s_a(x); vals[g] = g . x."""
    ax = vals[a.gradient] + a.const
    for g in sys._sorted_gradients:
        vx = vals[g]
        vy = vx - sys.pairing(g, a.gradient) * ax
        lo, hi = sorted((-vx, -vy))
        for c in sys._classes[g].consts_between(lo, hi):
            if _proportional(a, AffineRoot(g, c)) is None:
                return False
    return True


def basis_from_point(sys: AffineRootSystem, x) -> AffineBasis:
    """Walls of the chamber containing x, oriented positive at x."""
    x = la.fvec(x)
    if len(x) != sys.dim:
        raise BadInput("point has the wrong dimension")
    check_point_generic(sys, x)
    walls: list[AffineRoot] = []
    vals = {g: la.dot(g, x) for g in sys._sorted_gradients}
    for g in sys._sorted_gradients:
        c = sys._classes[g].min_positive(vals[g])
        a = AffineRoot(g, c)
        if not _is_wall(sys, a, vals):
            continue
        dup = next((i for i, b in enumerate(walls) if _proportional(b, a) is not None), None)
        if dup is None:
            walls.append(a)
        elif sys.indivisible(a) and not sys.indivisible(walls[dup]):
            walls[dup] = a
    return AffineBasis(tuple(sorted(walls)), x)


def simple_coefficients(B: Sequence[AffineRoot], a: AffineRoot) -> tuple | None:
    """Coefficients of a in terms of B as affine functions, or None."""
    if not B:
        return None
    cols = la.transpose([b.gradient + (b.const,) for b in B])
    return la.solve(cols, a.gradient + (a.const,))


def check_basis(sys: AffineRootSystem, B: AffineBasis, window: int = DEFAULT_WINDOW) -> Report:
    rep = Report("affine basis")
    vecs = [b.gradient + (b.const,) for b in B.roots]
    rep.add("independent", la.independent(vecs) if vecs else True)
    pos = [b for b in B.roots if b(B.witness) <= 0]
    rep.add("positive-at-witness", not pos, [str(b) for b in pos] or None)
    members = [b for b in B.roots if not sys.contains(b)]
    rep.add("members", not members, [str(b) for b in members] or None)
    bad = None
    for a in sys.roots_in_window(window):
        c = simple_coefficients(B.roots, a)
        if c is None or not la.is_integral(c) or not (all(x >= 0 for x in c) or all(x <= 0 for x in c)):
            bad = str(a)
            break
    rep.add("one-signed-integral", bad is None, bad)
    return rep


def enumerate_bases(sys: AffineRootSystem, window: int = DEFAULT_WINDOW, start=None,
                    limit: int = 5000) -> list[AffineBasis]:
    """Chambers reachable by wall crossings whose walls all have |const| <= window."""
    if start is None:
        start = generic_point(sys, [])
    first = basis_from_point(sys, start)
    out = [first]
    seen = {first.key()}
    queue = [first]
    while queue:
        B = queue.pop(0)
        for a in B.roots:
            y = sys.reflection_map(a)(B.witness)
            nb = basis_from_point(sys, y)
            if nb.key() in seen:
                continue
            seen.add(nb.key())
            if any(abs(b.const) > window for b in nb.roots):
                continue
            out.append(nb)
            queue.append(nb)
            if len(out) > limit:
                from .errors import Budget
                raise Budget(f"more than {limit} chambers", witness=limit)
    return out


# -- restriction to a subset ------------------------------------------------------

@dataclass
class Restriction:
    """(Phi_aff)_J realised on E_J with coordinates z_i = (D j_i) . x."""

    parent: AffineRootSystem
    J: tuple
    system: AffineRootSystem

    def project_point(self, x) -> tuple:
        return tuple(la.dot(j.gradient, x) for j in self.J)

    def project_root(self, a: AffineRoot) -> AffineRoot:
        if not self.J:
            raise BadInput("nothing to project onto")
        cols = la.transpose([j.gradient for j in self.J])
        c = la.solve(cols, a.gradient)
        if c is None:
            raise BadInput(f"{a} is not in the span of J")
        return AffineRoot(c, a.const)

    def lift_root(self, a: AffineRoot) -> AffineRoot:
        g = la.zeros(self.parent.dim)
        for c, j in zip(a.gradient, self.J):
            g = la.add(g, la.scale(c, j.gradient))
        return AffineRoot(g, a.const)

    @property
    def origin(self) -> tuple:
        """The point of E_J where every j vanishes."""
        return tuple(-j.const for j in self.J)


def _check_independent(J: Sequence[AffineRoot]) -> None:
    if J and not la.independent([j.gradient for j in J]):
        raise DependentGradients("gradients of J are linearly dependent", witness=[str(j) for j in J])


def restrict_to_J(sys: AffineRootSystem, J: Sequence[AffineRoot]) -> Restriction:
    J = tuple(J)
    _check_independent(J)
    for j in J:
        if not sys.contains(j):
            raise BadInput(f"{j} is not a root of the system")
    if not J:
        return Restriction(sys, J, AffineRootSystem(0, []))
    cols = la.transpose([j.gradient for j in J])
    fams = []
    for f in sys.families:
        c = la.solve(cols, f.gradient)
        if c is not None and la.mat_vec(cols, c) == f.gradient:
            fams.append(Family(c, f.offset, f.period))
    H = tuple(tuple(sys.gram(gi.gradient, gj.gradient) for gj in J) for gi in J)
    return Restriction(sys, J, AffineRootSystem(len(J), fams, la.inverse(H)))


def _vanishing_roots(sys: AffineRootSystem, x) -> list[AffineRoot]:
    out = []
    for g in sys.gradients:
        c = sys._classes[g].vanishing(la.dot(g, x))
        if c is not None:
            out.append(AffineRoot(g, c))
    return out


def _perturb(sys: AffineRootSystem, x, d) -> tuple:
    """x + eps d with eps small enough that no non-vanishing root changes sign."""
    mins = []
    steps = [Fraction(1)]
    for g in sys.gradients:
        cls = sys._classes[g]
        mins.append(cls.min_nonzero_abs(la.dot(g, x)))
        steps.append(abs(la.dot(g, d)))
    eps = Fraction(1, 2) * min(mins) / max(steps) if mins else Fraction(1)
    return la.add(x, la.scale(eps, d))


def generic_point(sys: AffineRootSystem, J: Sequence[AffineRoot]) -> tuple:
    """A point where all j in J vanish and no root with gradient outside span DJ does."""
    J = tuple(J)
    n = sys.dim
    if J:
        A = [j.gradient for j in J]
        x0 = la.solve(A, [-j.const for j in J])
        if x0 is None:
            raise DependentGradients("J has no common zero", witness=[str(j) for j in J])
        K = la.kernel(A, n)
    else:
        x0 = la.zeros(n)
        K = [_e(n, i) for i in range(n)]
    span = [j.gradient for j in J]
    outside = [g for g in sys.gradients if not span or la.rank(span + [g]) > len(span)]
    primes = [101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157]
    for trial in range(1, 200):
        x = x0
        for i, k in enumerate(K):
            x = la.add(x, la.scale(Fraction(trial, primes[i % len(primes)] * (i + 1) + trial * 7), k))
        if all(sys._classes[g].vanishing(la.dot(g, x)) is None for g in outside):
            return x
    raise RuntimeError("no generic point found")  # pragma: no cover


def _one_signed_in(J: Sequence[AffineRoot], a: AffineRoot) -> bool:
    c = simple_coefficients(J, a)
    return c is not None and la.is_integral(c) and (all(x >= 0 for x in c) or all(x <= 0 for x in c))


def extend_to_basis(sys: AffineRootSystem, J_prime: Sequence[AffineRoot]) -> AffineBasis:
    """A basis of sys containing J', or NoExtension with a witness root."""
    J = tuple(J_prime)
    _check_independent(J)
    for j in J:
        if not sys.contains(j):
            raise BadInput(f"{j} is not a root of the system")
    x = generic_point(sys, J)
    for a in _vanishing_roots(sys, x):
        if not _one_signed_in(J, a):
            raise NoExtension(f"{a} vanishes with J' but is not a one-signed combination of it",
                              witness=str(a))
    if J:
        d = la.solve([j.gradient for j in J], [Fraction(1)] * len(J))
    else:
        d = la.zeros(sys.dim)
    y = _perturb(sys, x, d)
    B = basis_from_point(sys, y)
    missing = [j for j in J if j not in B.roots]
    if missing:  # pragma: no cover - would contradict the construction
        raise NoExtension(f"construction did not produce {missing[0]}", witness=str(missing[0]))
    return B


def basis_containing_J(sys: AffineRootSystem, B: AffineBasis, J: Sequence[AffineRoot]) -> tuple[Restriction, AffineBasis]:
    """Basis of the restriction (Phi_aff)_J containing the projections of J."""
    J = tuple(J)
    for j in J:
        if j not in B.roots:
            raise BadInput(f"{j} is not in the basis")
    R = restrict_to_J(sys, J)
    if not J:
        return R, AffineBasis((), ())
    projected = [R.project_root(j) for j in J]
    return R, extend_to_basis(R.system, projected)


# -- special points --------------------------------------------------------------

@dataclass
class SpecialPointData:
    system: AffineRootSystem
    basis: AffineBasis
    e: tuple
    roots_at_e: list
    basis_at_e: list          # ordered; index i is the simple reflection s_{i+1}
    extra: list               # the roots of B not vanishing at e
    periods: dict             # gradient -> k_a
    coroot_vectors: list      # simple coroots k_a (Da)^vee as vectors of V
    datum: BasedRootDatum
    highest: list = field(default_factory=list)   # (root index, component simple indices, extra root)

    def to_Y(self, v) -> tuple:
        """Coordinates of a vector of V in the simple-coroot basis."""
        v = la.fvec(v)
        if not self.coroot_vectors:
            if any(v):
                raise NotInGroup("vector is not in the span of the coroots", witness=[_fmt(x) for x in v])
            return ()
        cols = la.transpose(self.coroot_vectors)
        c = la.solve(cols, v)
        if c is None or la.mat_vec(cols, c) != v:
            raise NotInGroup("vector is not in the span of the coroots", witness=[_fmt(x) for x in v])
        return c

    def from_Y(self, y) -> tuple:
        out = la.zeros(self.system.dim)
        for c, v in zip(y, self.coroot_vectors):
            out = la.add(out, la.scale(c, v))
        return out

    def to_json(self) -> dict:
        return {"e": [_fmt(x) for x in self.e], "basis_at_e": [a.to_json() for a in self.basis_at_e],
                "extra": [a.to_json() for a in self.extra],
                "periods": [{"gradient": [_fmt(x) for x in g], "k": _fmt(k)} for g, k in sorted(self.periods.items())],
                "datum": self.datum.to_json()}


def special_point_data(sys: AffineRootSystem, B: AffineBasis, e) -> SpecialPointData:
    e = la.fvec(e)
    if len(e) != sys.dim:
        raise BadInput("point has the wrong dimension")
    outside = [str(b) for b in B.roots if b(e) < 0]
    if outside:
        raise BadInput("e is not in the closure of the chamber", witness=outside)
    at_e = _vanishing_roots(sys, e)
    have = {a.gradient for a in at_e}
    missing = [g for g in sys.gradients if g not in have]
    if missing:
        raise NotSpecial("no root through e in some direction", witness=[_fmt(x) for x in missing[0]])
    periods = {g: sys._classes[g].k for g in sys.gradients}
    Be = [b for b in B.roots if b(e) == 0]
    extra = [b for b in B.roots if b(e) != 0]
    cov = [la.scale(periods[b.gradient], sys.coroot(b.gradient)) for b in Be]
    n = len(Be)
    cols = la.transpose(cov) if cov else ()

    def to_Y(v):
        c = la.solve(cols, v)
        if c is None or not la.is_integral(c):
            raise NotSpecial("coroot outside the simple coroot lattice", witness=[_fmt(x) for x in v])
        return la.as_int(c)

    roots, coroots = [], []
    seen = set()
    for a in at_e:
        k = periods[a.gradient]
        alpha = la.scale(1 / k, a.gradient)
        x_coords = tuple(la.dot(alpha, v) for v in cov)
        if not la.is_integral(x_coords):
            raise NotSpecial("root not integral on the coroot lattice", witness=str(a))
        key = la.as_int(x_coords)
        if key in seen:
            continue
        seen.add(key)
        roots.append(key)
        coroots.append(to_Y(la.scale(k, sys.coroot(a.gradient))))
    basis = [roots.index(la.as_int(tuple(la.dot(la.scale(1 / periods[b.gradient], b.gradient), v) for v in cov)))
             for b in Be]
    datum = BasedRootDatum([[int(i == j) for j in range(n)] for i in range(n)], roots, coroots, basis)
    spd = SpecialPointData(sys, B, e, at_e, Be, extra, periods, cov, datum)
    spd.highest = _highest_roots(spd)
    return spd


def root_components(datum: BasedRootDatum) -> list[list[int]]:
    """Simple-root positions grouped into connected components of the Dynkin graph."""
    n = len(datum.basis)
    simple, simple_v = datum.simple_roots, datum.simple_coroots
    comps: list[list[int]] = []
    seen: set[int] = set()
    for i in range(n):
        if i in seen:
            continue
        block = [i]
        seen.add(i)
        k = 0
        while k < len(block):
            for j in range(n):
                if j not in seen and datum.pair(simple[j], simple_v[block[k]]) != 0:
                    seen.add(j)
                    block.append(j)
            k += 1
        comps.append(sorted(block))
    return comps


def highest_root(datum: BasedRootDatum, component: Sequence[int]) -> int:
    comp = set(component)
    best, best_h = None, -1
    for i in datum.positive:
        c = datum.simple_coefficients[i]
        support = {k for k, x in enumerate(c) if x}
        if support <= comp:
            h = sum(c)
            if h > best_h:
                best, best_h = i, h
    return best


def _highest_roots(spd: SpecialPointData) -> list:
    out = []
    d = spd.datum
    for comp in root_components(d):
        phi = highest_root(d, comp)
        alpha = d.roots[phi]
        match = None
        for b in spd.extra:
            k = spd.periods[b.gradient]
            xb = tuple(la.dot(la.scale(1 / k, b.gradient), v) for v in spd.coroot_vectors)
            if la.is_integral(xb) and la.as_int(xb) == tuple(-x for x in alpha):
                match = b
                break
        if match is None:
            raise NotSpecial("no basis root completes a component", witness=list(alpha))
        m = match(spd.e) / spd.periods[match.gradient]
        out.append((phi, comp, match, m))
    return out


# -- the affine Weyl group in coroot coordinates ---------------------------------

class AffineWeylElt(NamedTuple):
    """x -> w(x) + y on Y (origin at the special point)."""

    translation: tuple
    finite: int


def split_affine_weyl(spd: SpecialPointData, w: AffineMap) -> AffineWeylElt:
    table = _finite_v_matrices(spd)
    try:
        idx = table[w.A]
    except KeyError:
        raise NotInGroup("linear part is not in the finite Weyl group", witness=repr(w)) from None
    v = la.sub(w(spd.e), spd.e)
    cols = la.transpose(spd.coroot_vectors) if spd.coroot_vectors else ()
    if spd.coroot_vectors:
        c = la.solve(cols, v)
        ok = c is not None and la.mat_vec(cols, c) == v and la.is_integral(c)
    else:
        c, ok = (), all(x == 0 for x in v)
    if not ok:
        raise NotInGroup("translation part is not in the coroot lattice", witness=[_fmt(x) for x in v])
    return AffineWeylElt(la.as_int(c), idx)


def _finite_v_matrices(spd: SpecialPointData) -> dict:
    cache = spd.__dict__.get("_vmats")
    if cache is not None:
        return cache
    sys = spd.system
    wg = spd.datum.weyl_group()
    gens = [sys.reflection_map(AffineRoot(b.gradient, Fraction(0))).A for b in spd.basis_at_e]
    mats = {}
    for el in wg.elements:
        A = la.identity(sys.dim)
        for s in el.word:
            A = la.mat_mul(A, gens[s])
        mats[A] = el.index
    spd.__dict__["_vmats"] = mats
    spd.__dict__["_vmats_by_index"] = {i: A for A, i in mats.items()}
    return mats


def compose_affine_weyl(spd: SpecialPointData, x: AffineWeylElt, y: AffineWeylElt) -> AffineWeylElt:
    wg = spd.datum.weyl_group()
    moved = wg.act_Y(x.finite, y.translation)
    return AffineWeylElt(tuple(a + b for a, b in zip(x.translation, moved)), wg.mul(x.finite, y.finite))


def affine_weyl_to_map(spd: SpecialPointData, x: AffineWeylElt) -> AffineMap:
    _finite_v_matrices(spd)
    A = spd.__dict__["_vmats_by_index"][x.finite]
    shift = spd.from_Y(x.translation)
    # x -> e + A(x - e) + shift
    b = la.add(la.sub(spd.e, la.mat_vec(A, spd.e)), shift)
    return AffineMap(A, b)
