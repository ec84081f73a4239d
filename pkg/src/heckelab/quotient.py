"""Quotients of an affine root system by a subset J of a basis.

Given J and a set Gamma of marked affine roots with parameters p_a, the
projections a + A'_J of the marked roots (A'_J the span of J as affine
functions) form an affine root system Gamma' on the face E^J = {j = 0},
modulo the directions along which every marked root is constant.

Coordinates on the quotient are w_i(x) = D(c_i) . x for a fixed list of
marked roots c_i whose projected gradients are a basis; the Euclidean
structure is the one induced on the orthogonal complement of D J.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .affine import (DEFAULT_WINDOW, AffineBasis, AffineMap, AffineRoot,
                     AffineRootSystem, Family, SpecialPointData, _fmt,
                     basis_from_point, check_basis, extend_to_basis, generic_point,
                     root_from_json, special_point_data, system_from_spec,
                     verify_affine_system)
from .bernstein import AffineHecke, LabelFunctions, check_labels
from .errors import (BadInput, Budget, DependentGradients, InfiniteParabolic,
                     NoExtension, NotExtendable, NotTranslation)
from .report import Report
from .rootdatum import BasedRootDatum
from .scalar import Scalar, parse_scalar

PARABOLIC_CAP = 10_000


# -- parabolic subgroups ----------------------------------------------------------

@dataclass(frozen=True)
class WordElt:
    """An element of the affine Weyl group as a map of V, with a word in reflections."""

    map: AffineMap
    word: tuple  # of AffineRoot

    @property
    def length(self) -> int:
        return len(self.word)

    def __mul__(self, other: "WordElt") -> "WordElt":
        return WordElt(self.map * other.map, self.word + other.word)


def parabolic_elements(sys: AffineRootSystem, K: Sequence[AffineRoot]) -> list[WordElt]:
    """W_K by breadth-first search; words are reduced (shortest) words."""
    K = tuple(K)
    if K and not la.independent([k.gradient for k in K]):
        raise InfiniteParabolic("gradients of K are dependent, so W_K is infinite",
                                witness=[str(k) for k in K])
    gens = [sys.reflection_map(k) for k in K]
    start = WordElt(AffineMap.identity(sys.dim), ())
    seen = {start.map: start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for k, g in zip(K, gens):
            y = WordElt(x.map * g, x.word + (k,))
            if y.map not in seen:
                seen[y.map] = y
                queue.append(y)
                if len(seen) > PARABOLIC_CAP:
                    raise Budget(f"parabolic subgroup exceeds {PARABOLIC_CAP} elements", witness=PARABOLIC_CAP)
    return list(seen.values())


def _sends_to_negatives(w: AffineMap, K: Sequence[AffineRoot]) -> bool:
    targets = {(-k).gradient + ((-k).const,) for k in K}
    return {w.act_on_root(k).gradient + (w.act_on_root(k).const,) for k in K} == targets


def longest_in_parabolic(sys: AffineRootSystem, K: Sequence[AffineRoot]) -> WordElt:
    """The longest element w0(K) of W_K; it satisfies w0(K) K = -K."""
    elts = parabolic_elements(sys, K)
    w0 = max(elts, key=lambda e: e.length)
    if not _sends_to_negatives(w0.map, K):  # pragma: no cover - Coxeter theory
        raise BadInput("longest element does not send K to -K")
    return w0


def v_element(sys: AffineRootSystem, J: Sequence[AffineRoot], a: AffineRoot) -> WordElt:
    """v[a, J] = u t with u = w0(J + a) and t = w0(J)."""
    J = tuple(J)
    try:
        extend_to_basis(sys, J + (a,))
    except (NoExtension, DependentGradients) as exc:
        raise NotExtendable(f"J together with {a} is not contained in a basis", witness=str(a)) from exc
    u = longest_in_parabolic(sys, J + (a,))
    t = longest_in_parabolic(sys, J)
    return u * t


def fixes_setwise(w: AffineMap, J: Sequence[AffineRoot]) -> bool:
    return {w.act_on_root(j) for j in J} == set(J)


# -- marked roots ---------------------------------------------------------------

def _q_exponent(p: Scalar, what: str) -> int:
    if not p.is_monomial() or p.terms()[0][1] != 1:
        raise BadInput(f"{what} must be a power of q", witness=str(p))
    e = p.monomial_exponent()
    if e % 2 or e < 2:
        raise BadInput(f"{what} must be q^m with m >= 1", witness=str(p))
    return e // 2


@dataclass(frozen=True)
class MarkedFamily:
    """The roots root + period * Z, all carrying the parameters p and p*."""

    root: AffineRoot
    period: Fraction
    p: Scalar
    p_star: Scalar | None = None

    def contains(self, b: AffineRoot) -> bool:
        return b.gradient == self.root.gradient and ((b.const - self.root.const) / self.period).denominator == 1

    def members(self, window: int) -> list[AffineRoot]:
        lo = math.floor((-window - self.root.const) / self.period)
        hi = math.ceil((window - self.root.const) / self.period)
        out = []
        for m in range(lo, hi + 1):
            c = self.root.const + m * self.period
            if abs(c) <= window:
                out.append(AffineRoot(self.root.gradient, c))
        return out


@dataclass
class MarkedRoots:
    system: AffineRootSystem
    basis: AffineBasis
    J: tuple
    gamma: list

    def find(self, b: AffineRoot) -> MarkedFamily | None:
        return next((f for f in self.gamma if f.contains(b)), None)

    def roots(self, window: int) -> list[AffineRoot]:
        return sorted({a for f in self.gamma for a in f.members(window)})

    @classmethod
    def from_json(cls, data: dict, system: AffineRootSystem, basis: AffineBasis) -> "MarkedRoots":
        J = tuple(root_from_json(r) for r in data.get("J", []))
        missing = [str(j) for j in J if j not in basis.roots]
        if missing:
            raise BadInput("J must be a subset of the basis", witness=missing)
        fams = []
        for entry in data["gamma"]:
            r = root_from_json(entry["root"])
            if not system.contains(r):
                raise BadInput(f"{r} is not a root of the system", witness=str(r))
            period = Fraction(str(entry["period"])) if "period" in entry else system.period(r)
            if period <= 0 or (period / system.period(r)).denominator != 1:
                raise BadInput(f"period of {r} must be a positive multiple of k_a", witness=str(r))
            p = parse_scalar(str(entry.get("p", "q")))
            _q_exponent(p, "p")
            ps = entry.get("p_star")
            ps = parse_scalar(str(ps)) if ps is not None else None
            if ps is not None:
                _q_exponent(ps, "p_star")
            fams.append(MarkedFamily(r, period, p, ps))
        return cls(system, basis, J, fams)

    def to_json(self) -> dict:
        return {"J": [j.to_json() for j in self.J],
                "gamma": [{"root": f.root.to_json(), "period": _fmt(f.period), "p": f.p.to_q(),
                           **({"p_star": f.p_star.to_q()} if f.p_star is not None else {})}
                          for f in self.gamma]}


def in_span_of_J(J: Sequence[AffineRoot], a: AffineRoot) -> bool:
    """Is a in A'_J, the span of J as affine functions?"""
    if not J:
        return all(x == 0 for x in a.gradient) and a.const == 0
    cols = la.transpose([j.gradient + (j.const,) for j in J])
    return la.solve(cols, a.gradient + (a.const,)) is not None


def face_point(sys: AffineRootSystem, B: AffineBasis, J: Sequence[AffineRoot]) -> tuple:
    """A point of the open face of the chamber of B cut out by J."""
    J = tuple(J)
    x = B.witness
    if not J:
        return x
    chosen = list(J)
    for b in B.roots:
        if b not in chosen and la.independent([c.gradient for c in chosen] + [b.gradient]):
            chosen.append(b)
    gram = [[sys.gram(a.gradient, b.gradient) for b in chosen] for a in chosen]
    target = [-b(x) if b in J else Fraction(0) for b in chosen]
    c = la.mat_vec(la.inverse(gram), target)
    d = la.zeros(sys.dim)
    for ci, b in zip(c, chosen):
        d = la.add(d, la.scale(ci, la.mat_vec(sys._ginv, b.gradient)))
    y = la.add(x, d)
    bad = [str(b) for b in B.roots if (b(y) != 0 if b in J else b(y) <= 0)]
    if bad:  # pragma: no cover - the relation among B has positive coefficients
        raise BadInput("could not place a point on the face of J", witness=bad)
    return y


# -- the quotient system ------------------------------------------------------------

@dataclass
class QuotientSystem:
    marked: MarkedRoots
    coord_roots: list            # marked roots c_i defining the coordinates w_i
    gram: tuple                  # induced inner products of the projected D c_i
    system: AffineRootSystem     # Gamma' in w-coordinates
    face: tuple                  # point of the face of J, in V
    point: tuple                 # its image, inside the positive chamber of Gamma'
    basis: AffineBasis           # B(J, Gamma)
    report: Report = field(default_factory=Report)
    generators: dict = field(default_factory=dict)   # marked root -> v[a, J]

    @property
    def J(self) -> tuple:
        return self.marked.J

    def w_of(self, x) -> tuple:
        return tuple(la.dot(c.gradient, x) for c in self.coord_roots)

    def project(self, a: AffineRoot) -> AffineRoot:
        J = self.J
        cols = la.transpose([c.gradient for c in self.coord_roots] + [j.gradient for j in J])
        sol = la.solve(cols, a.gradient) if cols else None
        if sol is None or la.mat_vec(cols, sol) != la.fvec(a.gradient):
            raise BadInput(f"{a} does not descend to the quotient", witness=str(a))
        r = len(self.coord_roots)
        const = a.const - sum(d * j.const for d, j in zip(sol[r:], J))
        return AffineRoot(tuple(sol[:r]), const)

    def lift(self, a: AffineRoot, window: int = DEFAULT_WINDOW) -> AffineRoot | None:
        """The positive marked root projecting to a, searched in the window."""
        for b in self.marked.roots(window + _span_slack(self)):
            if b(self.marked.basis.witness) > 0 and self.project(b) == a:
                return b
        return None

    def _face_frame(self) -> tuple[list, list]:
        """Directions u_i in ker DJ with w(u_i) = e_i, and a basis of the directions w ignores."""
        sys = self.marked.system
        J = self.J
        proj = [_project_gradient(sys, J, c.gradient) for c in self.coord_roots]
        hinv = la.inverse(self.gram)
        us = []
        for i in range(len(proj)):
            c = hinv[i]
            u = la.zeros(sys.dim)
            for ck, g in zip(c, proj):
                u = la.add(u, la.scale(ck, la.mat_vec(sys._ginv, g)))
            us.append(u)
        rows = [j.gradient for j in J] + [c.gradient for c in self.coord_roots]
        flat = la.kernel(rows, sys.dim) if rows else [tuple(Fraction(int(i == k)) for k in range(sys.dim))
                                                      for i in range(sys.dim)]
        return us, flat

    def induced_map(self, g: AffineMap) -> AffineMap:
        """The map of the quotient induced by g, which must preserve the face of J."""
        x0 = self.face
        gx = g(x0)
        if any(j(gx) != 0 for j in self.J):
            raise BadInput("map does not preserve the face of J")
        us, flat = self._face_frame()
        base = self.w_of(gx)
        for z in flat:
            if self.w_of(g(la.add(x0, z))) != base:
                raise BadInput("map is not well defined on the quotient")
        cols = []
        for u in us:
            cols.append(la.sub(self.w_of(g(la.add(x0, u))), base))
        A = la.transpose(cols) if cols else ()
        b = la.sub(base, la.mat_vec(A, self.point)) if cols else ()
        return AffineMap(A, b)

    def to_json(self) -> dict:
        return {"coordinates": [c.to_json() for c in self.coord_roots],
                "gram": [[_fmt(x) for x in r] for r in self.gram],
                "system": self.system.to_json(),
                "point": [_fmt(x) for x in self.point],
                "basis": [{"root": b.to_json(), "lift": (self.lift(b).to_json() if self.lift(b) else None)}
                          for b in self.basis.roots],
                "checks": self.report.to_json()}


def _span_slack(qs: QuotientSystem) -> int:
    return 2 + sum(int(abs(j.const)) for j in qs.J)


def _project_gradient(sys: AffineRootSystem, J: Sequence[AffineRoot], g) -> tuple:
    """Orthogonal projection of g onto the complement of D J (dual inner product)."""
    if not J:
        return la.fvec(g)
    gj = [[sys.gram(a.gradient, b.gradient) for b in J] for a in J]
    rhs = [sys.gram(a.gradient, g) for a in J]
    c = la.mat_vec(la.inverse(gj), rhs)
    out = la.fvec(g)
    for ci, j in zip(c, J):
        out = la.sub(out, la.scale(ci, j.gradient))
    return out


def _coordinates(marked: MarkedRoots) -> tuple[list, tuple]:
    sys, J = marked.system, marked.J
    chosen: list[AffineRoot] = []
    proj: list[tuple] = []
    for f in marked.gamma:
        g = _project_gradient(sys, J, f.root.gradient)
        if all(x == 0 for x in g):
            continue
        if la.independent(proj + [g]):
            chosen.append(f.root)
            proj.append(g)
    gram = tuple(tuple(sys.gram(a, b) for b in proj) for a in proj)
    return chosen, gram


def build_quotient(marked: MarkedRoots, window: int = DEFAULT_WINDOW) -> QuotientSystem:
    """Gamma' with its positive chamber and basis, plus a report of verified properties."""
    sys, B, J = marked.system, marked.basis, marked.J
    if not marked.gamma:
        raise BadInput("Gamma is empty")
    rep = Report(f"quotient by J (window {window})")
    roots = marked.roots(window)

    inside = [str(a) for a in roots if in_span_of_J(J, a)]
    rep.add("outside-span-of-J", not inside, inside or None)

    generators: dict = {}
    not_ext = []
    for a in roots:
        if in_span_of_J(J, a):
            continue
        try:
            generators[a] = v_element(sys, J, a)
        except NotExtendable:
            not_ext.append(str(a))
    rep.add("extendable", not not_ext, not_ext or None)

    moving = [str(a) for a, v in generators.items() if not fixes_setwise(v.map, J)]
    rep.add("v-fixes-J", not moving, moving or None)

    unstable, p_bad = None, None
    for a, v in generators.items():
        for b in roots:
            img = v.map.act_on_root(b)
            fb, fi = marked.find(b), marked.find(img)
            if fi is None:
                unstable = unstable or (str(a), str(b), str(img))
            elif fi.p != fb.p:
                p_bad = p_bad or (str(a), str(b), str(img))
    rep.add("gamma-stable", unstable is None, unstable)
    rep.add("p-constant", p_bad is None, p_bad)

    coords, gram = _coordinates(marked)
    proto = QuotientSystem(marked, coords, gram, AffineRootSystem(0, []), (), (), AffineBasis((), ()))
    fams = []
    for f in marked.gamma:
        pr = proto.project(f.root)
        fams.append(Family(pr.gradient, pr.const, f.period))
    ip = la.inverse(gram) if gram else None
    gsys = AffineRootSystem(len(coords), fams, ip)
    face = face_point(sys, B, J)
    qs = QuotientSystem(marked, coords, gram, gsys, face, (), AffineBasis((), ()), rep, generators)
    qs.point = qs.w_of(face)
    qs.basis = basis_from_point(gsys, qs.point)

    # Gamma' is reduced
    groots = gsys.roots_in_window(window)
    nonred = None
    for a in groots:
        for b in groots:
            r = _ratio(a, b)
            if r is not None and abs(r) != 1:
                nonred = (str(a), str(b))
                break
        if nonred:
            break
    rep.add("reduced", nonred is None, nonred)

    # projection is injective on the positive marked roots
    pos = [a for a in roots if a(B.witness) > 0]
    seen: dict = {}
    clash = None
    for a in pos:
        pa = qs.project(a)
        if pa in seen and clash is None:
            clash = (str(seen[pa]), str(a), str(pa))
        seen.setdefault(pa, a)
    rep.add("injective", clash is None, clash)

    wrong_sign = [str(a) for a in pos if qs.project(a)(qs.point) <= 0]
    rep.add("positive-chamber", not wrong_sign, wrong_sign or None)
    if len(coords):
        rep.extend(verify_affine_system(gsys, max(window, 2)), "axioms/")
        rep.extend(check_basis(gsys, qs.basis, window), "basis/")

    # v[a, J] acts on the quotient as the reflection in a + A'_J
    for a, v in generators.items():
        pa = qs.project(a)
        try:
            got = qs.induced_map(v.map)
        except BadInput as exc:
            rep.add(f"v-action[{a}]", False, str(exc))
            continue
        want = gsys.reflection_map(pa)
        rep.add(f"v-action[{a}]", got == want, None if got == want else (repr(got), repr(want)))

    # p* agrees with p on the partner root k - a'
    mism = None
    for f in marked.gamma:
        if f.p_star is None:
            continue
        derived = partner_parameter(qs, f.root)
        if derived is not None and derived != f.p_star:
            mism = (str(f.root), f.p_star.to_q(), derived.to_q())
            break
    rep.add("p-star-consistent", mism is None, mism)
    return qs


def _ratio(a: AffineRoot, b: AffineRoot) -> Fraction | None:
    """c with b = c a as affine functions, or None."""
    va, vb = a.gradient + (a.const,), b.gradient + (b.const,)
    c = None
    for x, y in zip(va, vb):
        if x == 0:
            if y != 0:
                return None
        elif c is None:
            c = y / x
        elif y / x != c:
            return None
    return c


def partner_parameter(qs: QuotientSystem, a: AffineRoot) -> Scalar | None:
    """p of a marked root projecting to k_{a'} - a', if one exists."""
    pa = qs.project(a)
    k = qs.system.period(pa)
    target = AffineRoot(la.neg(pa.gradient), k - pa.const)
    for f in qs.marked.gamma:
        pr = qs.project(f.root)
        if pr.gradient == target.gradient and ((target.const - pr.const) / f.period).denominator == 1:
            return f.p
    return None


# -- the root datum at a special point ------------------------------------------------

@dataclass
class MorrisDatum:
    quotient: QuotientSystem
    spd: SpecialPointData
    datum: BasedRootDatum
    labels: LabelFunctions

    def r(self, a: AffineRoot) -> int:
        """Index of D_J(a') / k_{a'} among the roots of the datum."""
        pa = self.quotient.project(a)
        k = self.quotient.system.period(pa)
        alpha = la.scale(1 / k, pa.gradient)
        x = tuple(la.dot(alpha, v) for v in self.spd.coroot_vectors)
        if not la.is_integral(x):
            raise BadInput(f"{a} does not give a root of the datum", witness=str(a))
        return self.datum.root_index(la.as_int(x))

    def hecke(self) -> AffineHecke:
        return AffineHecke(self.datum, self.labels)

    def to_json(self) -> dict:
        return {"special_point": self.spd.to_json(), "datum": self.datum.to_json(),
                "labels": self.labels.to_json()}


def morris_datum(qs: QuotientSystem, e) -> MorrisDatum:
    """Based root datum of Gamma' at e (a point of V on the face of J) with labels from p, p*."""
    e = la.fvec(e)
    if len(e) != qs.marked.system.dim or any(j(e) != 0 for j in qs.J):
        raise BadInput("e must be a point of V on which every root of J vanishes", witness=[_fmt(x) for x in e])
    spd = special_point_data(qs.system, qs.basis, qs.w_of(e))
    lam, star = [], []
    for b in spd.basis_at_e:
        f = _family_of_projection(qs, b)
        if f is None:
            raise BadInput(f"no marked root lies over {b}", witness=str(b))
        lam.append(_q_exponent(f.p, "p"))
        ps = f.p_star if f.p_star is not None else partner_parameter(qs, f.root)
        star.append(_q_exponent(ps, "p_star") if ps is not None else lam[-1])
    labels = LabelFunctions(lam, star)
    check_labels(spd.datum, labels)
    return MorrisDatum(qs, spd, spd.datum, labels)


def _family_of_projection(qs: QuotientSystem, b: AffineRoot) -> MarkedFamily | None:
    for f in qs.marked.gamma:
        pr = qs.project(f.root)
        if pr.gradient == b.gradient and ((b.const - pr.const) / f.period).denominator == 1:
            return f
    return None


def translation_vector(qs: QuotientSystem, t: AffineMap, md: MorrisDatum | None = None) -> tuple:
    """v(t) for t acting on the quotient by x -> x + v(t).

    In quotient coordinates, or in the coroot coordinates of ``md`` when given.
    """
    m = qs.induced_map(t)
    n = len(qs.point)
    if m.A != la.identity(n):
        raise NotTranslation("element does not act as a translation", witness=repr(m))
    if md is None:
        return m.b
    y = md.spd.to_Y(m.b)
    if not la.is_integral(y):
        raise NotTranslation("translation is outside the coroot lattice", witness=[_fmt(x) for x in y])
    return la.as_int(y)


def load_marked(data: dict) -> MarkedRoots:
    """System, basis and marked roots from a configuration dictionary."""
    sys = system_from_spec(data["system"])
    bdata = data.get("basis", {})
    if "point" in bdata:
        B = basis_from_point(sys, [Fraction(str(x)) for x in bdata["point"]])
    elif "roots" in bdata:
        B = extend_to_basis(sys, [root_from_json(r) for r in bdata["roots"]])
        if len(B.roots) != len(bdata["roots"]):
            raise BadInput("the listed roots are not a full basis")
    else:
        B = basis_from_point(sys, generic_point(sys, []))
    return MarkedRoots.from_json(data, sys, B)
