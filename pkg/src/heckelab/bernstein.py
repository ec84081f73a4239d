"""Affine Hecke algebras in the Bernstein presentation.

Elements are kept in the normal form sum_w c_w(theta) T_w with the theta
coefficients on the left.  Moving T_s past theta_z uses

    T_s theta_z = theta_{s z} T_s - RHS(s z),

    RHS(y) = ((q^lam - 1) + u (q^((lam+lam*)/2) - q^((lam-lam*)/2))) theta_y (1 - u^m) / (1 - u^2)

where u = theta_{-alpha^vee} and m = <alpha, y>.  The division is done on the
whole numerator at once, since for odd m only the combination is polynomial.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .errors import BadLabels, MixedAlgebras, NonDivisible, ParseError
from .expr import evaluate, split_word
from .iwahori import FiniteCoxeter, render_terms
from .rootdatum import BasedRootDatum
from .scalar import ONE, ZERO, Scalar

Poly = dict  # Y-vector -> Scalar


def _acc(d: dict, k, v: Scalar) -> None:
    if not v:
        return
    s = d.get(k)
    s = v if s is None else s + v
    if s:
        d[k] = s
    else:
        d.pop(k, None)


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for y1, c1 in a.items():
        for y2, c2 in b.items():
            _acc(out, tuple(u + v for u, v in zip(y1, y2)), c1 * c2)
    return out


class LabelFunctions:
    """lam, lam* on the simple roots, indexed by position in the basis."""

    def __init__(self, lam: Sequence[int], lam_star: Sequence[int] | None = None):
        self.lam = tuple(int(x) for x in lam)
        self.lam_star = tuple(int(x) for x in (lam_star if lam_star is not None else lam))
        if len(self.lam) != len(self.lam_star):
            raise BadLabels("lambda and lambda_star have different lengths")
        if any(x < 0 for x in self.lam + self.lam_star):
            raise BadLabels("labels must be nonnegative integers")

    @classmethod
    def from_json(cls, data: Mapping, rank: int) -> "LabelFunctions":
        def read(v):
            if isinstance(v, Mapping):
                return [int(v[f"s{i + 1}"]) for i in range(rank)]
            if isinstance(v, int):
                return [v] * rank
            return [int(x) for x in v]

        lam = read(data.get("lambda", 1))
        star = read(data["lambda_star"]) if "lambda_star" in data else lam
        return cls(lam, star)

    def to_json(self) -> dict:
        return {"lambda": list(self.lam), "lambda_star": list(self.lam_star)}

    def __eq__(self, other):
        return isinstance(other, LabelFunctions) and (self.lam, self.lam_star) == (other.lam, other.lam_star)

    def __hash__(self):
        return hash((self.lam, self.lam_star))

    def __repr__(self):
        return f"LabelFunctions(lam={list(self.lam)}, lam_star={list(self.lam_star)})"


def simple_orbit_classes(datum: BasedRootDatum) -> list[list[int]]:
    """Simple-root positions grouped by W_0-association."""
    W = datum.weyl_group()
    simple = datum.simple_roots
    pos = {r: i for i, r in enumerate(simple)}
    classes: list[list[int]] = []
    seen: set[int] = set()
    for i, a in enumerate(simple):
        if i in seen:
            continue
        cls = sorted({pos[W.act_X(w, a)] for w in range(len(W)) if W.act_X(w, a) in pos})
        seen.update(cls)
        classes.append(cls)
    return classes


def check_labels(datum: BasedRootDatum, labels: LabelFunctions) -> None:
    n = len(datum.basis)
    if len(labels.lam) != n:
        raise BadLabels(f"expected {n} labels, got {len(labels.lam)}", witness=len(labels.lam))
    for cls in simple_orbit_classes(datum):
        for j in cls[1:]:
            i = cls[0]
            if labels.lam[i] != labels.lam[j] or labels.lam_star[i] != labels.lam_star[j]:
                raise BadLabels(f"s{i + 1} and s{j + 1} are associate but carry different labels",
                                witness=(f"s{i + 1}", f"s{j + 1}"))
    for i, a in enumerate(datum.simple_roots):
        if labels.lam[i] != labels.lam_star[i] and not datum.in_2X(a):
            raise BadLabels(f"lambda != lambda_star at s{i + 1} but the root is not in 2X", witness=f"s{i + 1}")


class AffineHecke:
    def __init__(self, datum: BasedRootDatum, labels: LabelFunctions):
        check_labels(datum, labels)
        self.datum = datum
        self.labels = labels
        self.group = FiniteCoxeter(datum)
        self.W = self.group.W
        self.rank = datum.rank
        self.zero_y = (0,) * datum.rank
        n = len(datum.basis)
        self.q = {f"s{i + 1}": Scalar.mono(2 * labels.lam[i]) for i in range(n)}
        self.q1 = [Scalar.mono(2 * labels.lam[i]) for i in range(n)]
        self.q0 = [Scalar.mono(2 * labels.lam_star[i]) for i in range(n)]
        self._A = [q - ONE for q in self.q1]
        self._B = [Scalar.mono(labels.lam[i] + labels.lam_star[i]) - Scalar.mono(labels.lam[i] - labels.lam_star[i])
                   for i in range(n)]
        self._rhs: dict = {}

    # -- constructors --------------------------------------------------------
    def elt(self, terms: Mapping) -> "BernsteinElt":
        return BernsteinElt(self, {w: dict(p) for w, p in terms.items()})

    def zero(self) -> "BernsteinElt":
        return BernsteinElt(self, {})

    def one(self) -> "BernsteinElt":
        return self.from_scalar(ONE)

    def from_scalar(self, s: Scalar) -> "BernsteinElt":
        return BernsteinElt(self, {0: {self.zero_y: s}})

    def theta(self, y: Sequence[int], coeff: Scalar = ONE) -> "BernsteinElt":
        y = tuple(int(v) for v in y)
        if len(y) != self.rank:
            raise ParseError(f"th{list(y)} needs {self.rank} coordinates", witness=list(y))
        return BernsteinElt(self, {0: {y: coeff}})

    def T(self, w: int) -> "BernsteinElt":
        return BernsteinElt(self, {w: {self.zero_y: ONE}})

    def Ts(self, i: int) -> "BernsteinElt":
        return self.T(self.W.simple(i))

    def generator(self, word: str) -> "BernsteinElt":
        out = self.one()
        for name in reversed(split_word(word)):
            out = self.left_mul_simple(self._simple_index(name), out)
        return out

    def _simple_index(self, name: str) -> int:
        if name.startswith("s") and name[1:].isdigit():
            i = int(name[1:]) - 1
            if 0 <= i < len(self.datum.basis):
                return i
        raise ParseError(f"unknown simple reflection {name!r}", witness=name)

    def parse(self, text: str) -> "BernsteinElt":
        return evaluate(text, self)

    def theta_poly(self, p: Poly) -> "BernsteinElt":
        return BernsteinElt(self, {0: dict(p)})

    def t_inverse(self, i: int) -> "BernsteinElt":
        q = self.q1[i]
        inv = q ** -1
        return self.Ts(i) * inv + self.from_scalar((ONE - q) * inv)

    # -- the cross relation ------------------------------------------------
    def rhs(self, i: int, y: tuple) -> Poly:
        key = (i, y)
        r = self._rhs.get(key)
        if r is None:
            r = self._compute_rhs(i, y)
            self._rhs[key] = r
        return r

    def _compute_rhs(self, i: int, y: tuple) -> Poly:
        d = self.datum
        alpha = d.simple_roots[i]
        av = d.simple_coroots[i]
        m = d.pair(alpha, y)
        if m == 0:
            return {}
        A, B = self._A[i], self._B[i]
        # numerator in u: (A + B u)(1 - u^m)
        num: dict[int, Scalar] = {}
        for e, c in ((0, A), (1, B)):
            if c:
                _acc(num, e, c)
                _acc(num, e + m, -c)
        if not num:
            return {}
        quot = _divide_by_one_minus_u2(num)
        out: Poly = {}
        for e, c in quot.items():
            _acc(out, tuple(yy - e * a for yy, a in zip(y, av)), c)
        return out

    def cross_relation(self, y: Sequence[int], i: int) -> "BernsteinElt":
        """theta_y T_s - T_s theta_{s(y)} as a theta-polynomial."""
        return self.theta_poly(self.rhs(i, tuple(y)))

    # -- multiplication ------------------------------------------------------
    def left_mul_simple(self, i: int, x: "BernsteinElt") -> "BernsteinElt":
        W = self.W
        s = W.simple(i)
        qs = self.q1[i]
        refl = self.datum.reflection_matrix_Y(self.datum.basis[i])
        out: dict = {}
        for u, poly in x.terms.items():
            su = W.mul(s, u)
            up = W.length(su) > W.length(u)
            for z, c in poly.items():
                sz = tuple(sum(refl[r][k] * z[k] for k in range(len(z))) for r in range(len(z)))
                if up:
                    _acc(out.setdefault(su, {}), sz, c)
                else:
                    _acc(out.setdefault(u, {}), sz, c * (qs - ONE))
                    _acc(out.setdefault(su, {}), sz, c * qs)
                for y, d in self.rhs(i, sz).items():
                    _acc(out.setdefault(u, {}), y, -c * d)
        return BernsteinElt(self, out)

    def mul(self, x: "BernsteinElt", y: "BernsteinElt") -> "BernsteinElt":
        if x.alg is not self or y.alg is not self:
            raise MixedAlgebras("elements belong to different algebras")
        out: dict = {}
        for w, poly in x.terms.items():
            z = y
            for s in reversed(self.W[w].word):
                z = self.left_mul_simple(s, z)
            for v, p2 in z.terms.items():
                prod = _poly_mul(poly, p2)
                tgt = out.setdefault(v, {})
                for k, c in prod.items():
                    _acc(tgt, k, c)
        return BernsteinElt(self, out)

    # -- bookkeeping -----------------------------------------------------------
    def sort_key(self, w: int):
        return (self.W.length(w), self.group.reduced_word(w))

    def word_name(self, w: int) -> str:
        word = self.group.reduced_word(w)
        return "".join(word) if word else "e"

    def simple_for_root(self, root_idx: int) -> int:
        """Position j of a simple root W_0-conjugate to the given root."""
        d = self.datum
        W = self.W
        target = d.roots[root_idx]
        for j, a in enumerate(d.simple_roots):
            if any(W.act_X(w, a) == target for w in range(len(W))):
                return j
        raise BadLabels("root is not conjugate to a simple root", witness=target)  # pragma: no cover

    def affine_parameters(self, coxeter) -> dict[str, Scalar]:
        """Parameters q_s of the affine Iwahori-Hecke algebra matching the labels.

        s_i -> q^lam(alpha_i); the affine generator of each component gets
        q^lam*(phi), phi its highest root.
        """
        out = dict(self.q)
        for name, phi in coxeter.affine_roots.items():
            j = self.simple_for_root(phi)
            out[name] = Scalar.mono(2 * self.labels.lam_star[j])
        return out

    def __eq__(self, other):
        return isinstance(other, AffineHecke) and self.datum == other.datum and self.labels == other.labels

    def __hash__(self):
        return hash((self.datum, self.labels))


def _divide_by_one_minus_u2(num: dict[int, Scalar]) -> dict[int, Scalar]:
    """Exact quotient of a Laurent polynomial in u by 1 - u^2."""
    lo = min(num)
    p = {e - lo: c for e, c in num.items()}
    quot: dict[int, Scalar] = {}
    while p:
        top = max(p)
        if top < 2:
            raise NonDivisible("Bernstein numerator is not divisible by 1 - u^2",
                               witness={str(k + lo): str(v) for k, v in p.items()})
        c = p[top]
        # subtract (-c u^(top-2)) (1 - u^2) = -c u^(top-2) + c u^top
        f = -c
        _acc(quot, top - 2, f)
        _acc(p, top - 2, -f)
        _acc(p, top, f)
    return {e + lo: c for e, c in quot.items()}


class BernsteinElt:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: AffineHecke, terms: dict):
        self.alg = alg
        self.terms = {}
        for w, p in terms.items():
            p = {y: c for y, c in p.items() if c}
            if p:
                self.terms[w] = p

    def _coerce(self, other):
        if isinstance(other, BernsteinElt):
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
        out = {w: dict(p) for w, p in self.terms.items()}
        for w, p in other.terms.items():
            tgt = out.setdefault(w, {})
            for y, c in p.items():
                _acc(tgt, y, c)
        return BernsteinElt(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return BernsteinElt(self.alg, {w: {y: -c for y, c in p.items()} for w, p in self.terms.items()})

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
            return BernsteinElt(self.alg, {w: {y: c * s for y, c in p.items()} for w, p in self.terms.items()})
        if isinstance(other, BernsteinElt):
            return self.alg.mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Scalar)):
            other = self.alg.from_scalar(Scalar.const(other) if isinstance(other, int) else other)
        if not isinstance(other, BernsteinElt):
            return False
        return other.alg is self.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((w, frozenset(p.items())) for w, p in self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, w: int, y: Sequence[int]) -> Scalar:
        return self.terms.get(w, {}).get(tuple(y), ZERO)

    def theta_part(self) -> Poly:
        """The T_e coefficient."""
        return dict(self.terms.get(0, {}))

    def is_theta_monomial(self) -> bool:
        return list(self.terms) == [0] and len(self.terms[0]) == 1

    def support_size(self) -> int:
        return sum(len(p) for p in self.terms.values())

    def sorted_terms(self) -> list:
        items = []
        for w, p in self.terms.items():
            for y, c in p.items():
                items.append((self.alg.sort_key(w), y, w, c))
        items.sort(key=lambda t: (t[0], t[1]), reverse=True)
        return [(w, y, c) for _, y, w, c in items]

    def __str__(self):
        def atom(w, y):
            th = f"th[{','.join(str(v) for v in y)}]"
            return th if w == 0 else f"{th}*T[{self.alg.word_name(w)}]"

        return render_terms((c, atom(w, y)) for w, y, c in self.sorted_terms())

    def __repr__(self):
        return f"BernsteinElt({self})"


def affine_hecke(datum: BasedRootDatum, labels: LabelFunctions) -> AffineHecke:
    return AffineHecke(datum, labels)


def cross_relation(alg: AffineHecke, y: Sequence[int], i: int) -> BernsteinElt:
    return alg.cross_relation(y, i)


def bernstein_mul(x: BernsteinElt, y: BernsteinElt) -> BernsteinElt:
    if x.alg is not y.alg:
        raise MixedAlgebras("elements belong to different algebras")
    return x.alg.mul(x, y)
