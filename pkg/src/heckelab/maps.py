"""Structure maps between Hecke algebras and a generic homomorphism checker.

* the isomorphism between the standard (Iwahori-Matsumoto) presentation of an
  affine Hecke algebra and its Bernstein presentation,
* the involution iota and the element T_{s,0},
* refinement of a datum where lam* vanishes,
* the rank-one homomorphism classification,
* the p-parameter dictionary and the comparison homomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .affine import SpecialPointData, root_components
from .bernstein import AffineHecke, BernsteinElt, LabelFunctions, check_labels
from .errors import (BadInput, BadLabels, NotRankOne, ParameterMismatch,
                     PreconditionFailed)
from .iwahori import AffineCoxeter, HeckeElt, IwahoriHecke, coxeter_order
from .report import Report
from .rootdatum import BasedRootDatum
from .scalar import ONE, Scalar, q_power

# -- standard <-> Bernstein ------------------------------------------------------


def labels_from_parameters(datum: BasedRootDatum, coxeter: AffineCoxeter,
                           params: Mapping[str, Scalar]) -> LabelFunctions:
    """Read lam, lam* off affine Iwahori parameters q_s = q^lam."""
    W = datum.weyl_group()
    n = len(datum.basis)

    def half_exp(name):
        e = params[name].monomial_exponent()
        if e % 2:
            raise ParameterMismatch(f"q_{name} is not an integral power of q", witness=name)
        return e // 2

    lam = [half_exp(f"s{i + 1}") for i in range(n)]
    star = list(lam)
    for name, phi in coxeter.affine_roots.items():
        target = datum.roots[phi]
        for i, a in enumerate(datum.simple_roots):
            if any(W.act_X(w, a) == target for w in range(len(W))):
                star[i] = half_exp(name)
    try:
        labels = LabelFunctions(lam, star)
        check_labels(datum, labels)
    except BadLabels as exc:
        raise ParameterMismatch(f"parameters do not come from labels: {exc}", witness=exc.witness) from None
    return labels


class StandardBernstein:
    """The isomorphism H(W_aff, q) -> H(R, lam, lam*) and its inverse.

    On generators: T_{s_i} -> T_{s_i}, and the affine generator s0 = t_{phi^vee} s_phi
    goes to q_{phi^vee}^{1/2} theta_{phi^vee} T_{s_phi}^{-1}; images of T_w are
    products along reduced words.  The inverse sends theta_y, y = y1 - y2 with
    y1, y2 dominant, to q_{y1}^{-1/2} q_{y2}^{1/2} T_{y1} T_{y2}^{-1}.
    """

    def __init__(self, bern: AffineHecke, coxeter: AffineCoxeter | None = None,
                 params: Mapping[str, Scalar] | None = None):
        self.bern = bern
        self.coxeter = coxeter or AffineCoxeter(bern.datum)
        expected = bern.affine_parameters(self.coxeter)
        if params is not None:
            diff = [k for k in expected if params.get(k) != expected[k]]
            if diff:
                raise ParameterMismatch(f"q_{diff[0]} does not match the labels", witness=diff[0])
        self.hecke = IwahoriHecke(self.coxeter, expected)
        d = bern.datum
        self._gen: dict[str, BernsteinElt] = {}
        for i in range(len(d.basis)):
            self._gen[f"s{i + 1}"] = bern.Ts(i)
        for name, phi in self.coxeter.affine_roots.items():
            s0 = self.coxeter.simple(name)
            if s0.translation != d.coroots[phi]:
                raise BadInput("affine generator is not t_{phi^vee} s_phi")
            w_phi = s0.finite
            q_phi = ONE
            inv = bern.one()
            for s in bern.W[w_phi].word:
                q_phi = q_phi * bern.q1[s]
                inv = bern.t_inverse(s) * inv
            q_t = self.hecke.q[name] * q_phi
            self._gen[name] = bern.theta(d.coroots[phi], q_t.sqrt_monomial()) * inv
        self._fwd: dict = {self.coxeter.identity: bern.one()}
        self._theta: dict = {}
        pos_cov = [d.coroots[i] for i in d.positive]
        self.two_rho_vee = tuple(sum(c[k] for c in pos_cov) for k in range(d.rank))

    @classmethod
    def from_special_point(cls, spd: SpecialPointData, params: Mapping[str, Scalar]) -> "StandardBernstein":
        """Labels are read off the parameters; inconsistent parameters raise ParameterMismatch."""
        coxeter = AffineCoxeter.from_special_point(spd)
        labels = labels_from_parameters(spd.datum, coxeter, params)
        return cls(AffineHecke(spd.datum, labels), coxeter, params)

    def image_of_T(self, w) -> BernsteinElt:
        r = self._fwd.get(w)
        if r is None:
            word = self.coxeter.reduced_word(w)
            rest = self.coxeter.mul(self.coxeter.simple(word[0]), w)
            r = self._gen[word[0]] * self.image_of_T(rest)
            self._fwd[w] = r
        return r

    def forward(self, x: HeckeElt) -> BernsteinElt:
        if x.alg is not self.hecke:
            raise ParameterMismatch("element does not belong to the standard algebra of this isomorphism")
        out = self.bern.zero()
        for w, c in x.terms.items():
            out = out + self.image_of_T(w) * c
        return out

    def dominant_split(self, y: Sequence[int]) -> tuple[tuple, tuple]:
        d = self.bern.datum
        worst = min((d.pair(a, y) for a in d.simple_roots), default=0)
        N = (1 - worst) // 2 if worst < 0 else 0  # <alpha_i, 2 rho^vee> = 2
        y2 = tuple(N * v for v in self.two_rho_vee)
        y1 = tuple(a + b for a, b in zip(y, y2))
        return y1, y2

    def image_of_theta(self, y: Sequence[int]) -> HeckeElt:
        y = tuple(y)
        r = self._theta.get(y)
        if r is None:
            H = self.hecke
            y1, y2 = self.dominant_split(y)
            t1 = self.coxeter.translation(y1)
            t2 = self.coxeter.translation(y2)
            coeff = H.q_of(t1).sqrt_monomial() ** -1 * H.q_of(t2).sqrt_monomial()
            r = H.T(t1) * H.T_inverse(t2) * coeff
            self._theta[y] = r
        return r

    def backward(self, x: BernsteinElt) -> HeckeElt:
        if x.alg is not self.bern:
            raise ParameterMismatch("element does not belong to the Bernstein algebra of this isomorphism")
        H = self.hecke
        out = H.zero()
        zero = self.coxeter.identity.translation
        for w, poly in x.terms.items():
            tw = H.T(type(self.coxeter.identity)(zero, w))
            for y, c in poly.items():
                out = out + self.image_of_theta(y) * tw * c
        return out


def standard_to_bernstein(iso: StandardBernstein, x: HeckeElt) -> BernsteinElt:
    return iso.forward(x)


def bernstein_to_standard(iso: StandardBernstein, x: BernsteinElt) -> HeckeElt:
    return iso.backward(x)


# -- the involution ---------------------------------------------------------------

def _iota_T(alg: AffineHecke, w: int) -> BernsteinElt:
    cache = alg.__dict__.setdefault("_iota_cache", {})
    r = cache.get(w)
    if r is None:
        r = alg.one()
        for s in alg.W[w].word:
            r = r * (alg.from_scalar(alg.q1[s] - ONE) - alg.Ts(s))
        cache[w] = r
    return r


def involution(alg: AffineHecke, x: BernsteinElt) -> BernsteinElt:
    """theta_y -> theta_{-y}, T_s -> q_s - 1 - T_s, extended multiplicatively."""
    out = alg.zero()
    for w, poly in x.terms.items():
        th = alg.theta_poly({tuple(-v for v in y): c for y, c in poly.items()})
        out = out + th * _iota_T(alg, w)
    return out


def t_s0(alg: AffineHecke, i: int) -> BernsteinElt:
    """q1^{-1/2} q0^{1/2} (theta_{a^vee} T_s - (q1 - 1) theta_{a^vee})."""
    lam, star = alg.labels.lam[i], alg.labels.lam_star[i]
    pref = Scalar.mono(star - lam)
    av = alg.datum.simple_coroots[i]
    th = alg.theta(av)
    return (th * alg.Ts(i) - th * (alg.q1[i] - ONE)) * pref


# -- refinement where lam* = 0 --------------------------------------------------------

def refine_datum(datum: BasedRootDatum, labels: LabelFunctions) -> tuple[BasedRootDatum, LabelFunctions]:
    """Halve alpha and double alpha^vee over the W_0-orbit of each simple root with lam* = 0."""
    W = datum.weyl_group()
    roots = list(datum.roots)
    coroots = list(datum.coroots)
    lam = list(labels.lam)
    star = list(labels.lam_star)
    for i, a in enumerate(datum.simple_roots):
        if labels.lam_star[i] != 0:
            continue
        if not datum.in_2X(a):
            raise BadInput(f"lambda_star vanishes at s{i + 1} but the root is not in 2X", witness=f"s{i + 1}")
        orbit = {W.act_X(w, a) for w in range(len(W))}
        for k, r in enumerate(datum.roots):
            if r in orbit:
                roots[k] = tuple(x // 2 for x in r)
                coroots[k] = tuple(2 * x for x in datum.coroots[k])
        star[i] = lam[i]
    return BasedRootDatum(datum.pairing, roots, coroots, datum.basis), LabelFunctions(lam, star)


# -- homomorphism specifications -----------------------------------------------------

@dataclass
class HomSpec:
    """Images of T_{s_i} (key ('T', i)) and theta_{e_j} (key ('th', j))."""

    source: AffineHecke
    target: AffineHecke
    images: dict
    meta: dict = field(default_factory=dict)

    def image_T(self, i: int) -> BernsteinElt:
        return self.images[("T", i)]

    def theta_image(self, y: Sequence[int]) -> BernsteinElt:
        """Image of theta_y; theta-basis images must be invertible monomials."""
        out = self.target.one()
        for j, e in enumerate(y):
            if not e:
                continue
            img = self.images[("th", j)]
            if e < 0:
                img = _monomial_inverse(img)
            for _ in range(abs(e)):
                out = out * img
        return out

    def image_poly(self, poly: Mapping) -> BernsteinElt:
        out = self.target.zero()
        for y, c in poly.items():
            out = out + self.theta_image(y) * c
        return out

    def apply(self, x: BernsteinElt) -> BernsteinElt:
        out = self.target.zero()
        for w, poly in x.terms.items():
            tw = self.target.one()
            for s in self.source.W[w].word:
                tw = tw * self.image_T(s)
            out = out + self.image_poly(poly) * tw
        return out


def _monomial_inverse(x: BernsteinElt) -> BernsteinElt:
    if not x.is_theta_monomial():
        raise BadInput(f"{x} is not an invertible theta-monomial")
    (y, c), = x.terms[0].items()
    if not c.is_monomial():
        raise BadInput(f"{x} is not an invertible theta-monomial")
    return x.alg.theta(tuple(-v for v in y), c ** -1)


def _rel(rep: Report, name: str, lhs: BernsteinElt, rhs: BernsteinElt) -> bool:
    diff = lhs - rhs
    rep.add(name, diff.is_zero(), None if diff.is_zero() else str(diff))
    return diff.is_zero()


def verify_hom(spec: HomSpec, box: int = 1) -> Report:
    """Evaluate every defining relation of the source on the images."""
    src, tgt = spec.source, spec.target
    rep = Report("homomorphism relations")
    n_y = src.datum.rank
    n_s = len(src.datum.basis)
    missing = [k for k in [("T", i) for i in range(n_s)] + [("th", j) for j in range(n_y)] if k not in spec.images]
    if missing:
        raise BadInput(f"missing image for {missing[0]}")
    monomial = True
    for j in range(n_y):
        img = spec.images[("th", j)]
        ok = img.is_theta_monomial() and next(iter(img.terms[0].values())).is_monomial()
        rep.add(f"theta-invertible[e{j + 1}]", ok, None if ok else str(img))
        monomial &= ok
    for j, k in itertools.combinations(range(n_y), 2):
        a, b = spec.images[("th", j)], spec.images[("th", k)]
        _rel(rep, f"theta-commute[e{j + 1},e{k + 1}]", a * b, b * a)
    for i in range(n_s):
        t = spec.image_T(i)
        q = src.q1[i]
        _rel(rep, f"quadratic[s{i + 1}]", (t + 1) * (t - tgt.from_scalar(q)), tgt.zero())
    W = src.W
    for i, j in itertools.combinations(range(n_s), 2):
        m = coxeter_order(src.group, W.simple(i), W.simple(j))
        if m is None:
            continue
        a, b = spec.image_T(i), spec.image_T(j)
        left, right = tgt.one(), tgt.one()
        for k in range(m):
            left = left * (a if k % 2 == 0 else b)
            right = right * (b if k % 2 == 0 else a)
        _rel(rep, f"braid[s{i + 1},s{j + 1}]", left, right)
    if not monomial:
        return rep
    d = src.datum
    for i in range(n_s):
        refl = d.reflection_matrix_Y(d.basis[i])
        t = spec.image_T(i)
        for y in itertools.product(range(-box, box + 1), repeat=n_y):
            if not any(y):
                continue
            sy = tuple(sum(refl[r][k] * y[k] for k in range(n_y)) for r in range(n_y))
            lhs = spec.theta_image(y) * t - t * spec.theta_image(sy)
            rhs = spec.image_poly(src.rhs(i, y))
            _rel(rep, f"cross[s{i + 1},{list(y)}]", lhs, rhs)
    return rep


def identity_spec(alg: AffineHecke) -> HomSpec:
    images = {("T", i): alg.Ts(i) for i in range(len(alg.datum.basis))}
    for j in range(alg.datum.rank):
        images[("th", j)] = alg.theta(tuple(int(k == j) for k in range(alg.datum.rank)))
    return HomSpec(alg, alg, images)


def involution_spec(alg: AffineHecke) -> HomSpec:
    spec = identity_spec(alg)
    return HomSpec(alg, alg, {k: involution(alg, v) for k, v in spec.images.items()})


# -- rank one ------------------------------------------------------------------------

def _rank_one(alg: AffineHecke, what: str) -> tuple[int, int]:
    d = alg.datum
    if d.rank != 1 or len(d.basis) != 1:
        raise NotRankOne(f"{what} algebra is not of rank one", witness=(d.rank, len(d.basis)))
    return d.simple_roots[0][0], d.simple_coroots[0][0]


def half_integer(x) -> Fraction:
    f = Fraction(x) if not isinstance(x, str) else Fraction(x.strip())
    if (2 * f).denominator != 1:
        raise BadInput(f"{x} is not a half-integer")
    return f


def _theta_multiple(alg: AffineHecke, k: Fraction, coeff: Scalar = ONE) -> BernsteinElt:
    """theta_{k alpha^vee}; fails if k alpha^vee is not in Y."""
    av = alg.datum.simple_coroots[0][0]
    y = k * av
    if y.denominator != 1:
        raise BadInput(f"{k} alpha^vee is not in Y")
    return alg.theta((int(y),), coeff)


def a1_spec(source: AffineHecke, target: AffineHecke, k, n, c=ONE, cprime=None, bprime=None) -> HomSpec:
    """I(T_s) = c' theta_{k a'^vee} T_s' + b', I(theta_{a^vee}) = c theta_{n a'^vee}.

    ``bprime`` may be a theta-polynomial element, or "even"/"odd" to use the
    value forced by the corresponding normalized form (which then also
    supplies c' unless it is given).
    """
    _, av = _rank_one(source, "source")
    _rank_one(target, "target")
    if abs(av) != 1:
        raise BadInput("source Y must be spanned by the coroot")
    k, n = half_integer(k), half_integer(n)
    if n <= 0:
        raise BadInput("n must be positive")
    c = c if isinstance(c, Scalar) else Scalar.const(c)
    shape = normalized_image(target, k, bprime) if isinstance(bprime, str) else None
    if cprime is None:
        cprime = _lead_coeff(shape) if shape is not None else ONE
    cprime = cprime if isinstance(cprime, Scalar) else Scalar.const(cprime)
    main = _theta_multiple(target, k, cprime) * target.Ts(0)
    if shape is not None:
        bprime = shape - _theta_multiple(target, k) * target.Ts(0) * _lead_coeff(shape)
    elif bprime is None:
        bprime = target.zero()
    th = _theta_multiple(target, n, c)
    if av == -1:
        th = _monomial_inverse(th)
    images = {("T", 0): main + bprime, ("th", 0): th}
    meta = {"k": k, "n": n, "c": c, "cprime": cprime, "bprime": bprime}
    return HomSpec(source, target, images, meta)


def _lead_coeff(x: BernsteinElt) -> Scalar:
    (w, poly), = [(w, p) for w, p in x.terms.items() if w != 0]
    (_, c), = poly.items()
    return c


def normalized_image(target: AffineHecke, k, parity: str) -> BernsteinElt:
    """theta_{k a/2} T_s' theta_{-k a/2} (even) or theta_{(k-1) a/2} T_{s',0} theta_{-(k-1) a/2} (odd)."""
    k = Fraction(k)
    if parity == "even":
        h = k / 2
        mid = target.Ts(0)
    else:
        h = (k - 1) / 2
        mid = t_s0(target, 0)
    return _theta_multiple(target, h) * mid * _theta_multiple(target, -h)


@dataclass
class A1Verdict:
    kind: str                      # ValidEven | ValidOdd | Invalid
    reason: str                    # the scalar constraint that decided it
    report: Report
    witness: object = None
    normalized: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"verdict": self.kind, "reason": self.reason, "witness": self.witness,
                "normalized": {k: str(v) for k, v in self.normalized.items()},
                "relations": self.report.to_json()}


def _constraint(name: str, lhs: Scalar, rhs: Scalar) -> tuple[str, bool]:
    return f"{name}: {lhs.to_q()} = {rhs.to_q()}", lhs == rhs


def a1_constraints(spec: HomSpec) -> list[tuple[str, bool]]:
    """The scalar identities a homomorphism of the given shape must satisfy, in proof order.

    Evaluation stops at the first violated one.
    """
    src, tgt = spec.source, spec.target
    k, n = spec.meta["k"], spec.meta["n"]
    c, cp = spec.meta["c"], spec.meta["cprime"]
    l1, l0 = src.labels.lam[0], src.labels.lam_star[0]
    m1, m0 = tgt.labels.lam[0], tgt.labels.lam_star[0]
    q1, q0 = q_power(l1), q_power(l0)
    q1p, q0p = q_power(m1), q_power(m0)
    A = q1 - ONE
    Bsrc = q_power(Fraction(l1 + l0, 2)) - q_power(Fraction(l1 - l0, 2))
    Ap = q1p - ONE
    Bp = q_power(Fraction(m1 + m0, 2)) - q_power(Fraction(m1 - m0, 2))
    sq0p = q_power(Fraction(m0, 2)) - q_power(Fraction(-m0, 2))
    out: list[tuple[str, bool]] = []

    def add(name, lhs, rhs):
        out.append(_constraint(name, lhs, rhs))
        return out[-1][1]

    if not add("c^2 = 1", c * c, ONE):
        return out
    E1 = A + Bsrc
    if n.denominator == 2:
        if n > Fraction(1, 2):
            add("(q1 - 1) + q1^(1/2)(q0^(1/2) - q0^(-1/2)) = 0", E1, Scalar())
        elif k.denominator == 1:
            add("q0^(1/2) - q0^(-1/2) = 0", q_power(Fraction(l0, 2)) - q_power(Fraction(-l0, 2)), Scalar())
        else:
            add("q1 - 1 = 0", A, Scalar())
        return out
    if k.denominator == 2:
        add("q1' - 1 = 0", Ap, Scalar())
        return out
    if n >= 3:
        add("(q1 - 1) + q1^(1/2)(q0^(1/2) - q0^(-1/2)) = 0", E1, Scalar())
        return out
    if n == 2:
        if not add("-c(q1 - 1) + q1^(1/2)(q0^(1/2) - q0^(-1/2)) = 0", -c * A + Bsrc, Scalar()):
            return out
        if k % 2 == 0:
            add("q0'^(1/2) - q0'^(-1/2) = 0", sq0p, Scalar())
        else:
            add("q1' - 1 = 0", Ap, Scalar())
        return out
    if k % 2 == 0:
        if not add("c c'(q1' - 1) = c(q1 - 1)", c * cp * Ap, c * A):
            return out
        if not add("c c' q1'^(1/2)(q0'^(1/2) - q0'^(-1/2)) = q1^(1/2)(q0^(1/2) - q0^(-1/2))", c * cp * Bp, Bsrc):
            return out
        if not add("c = 1", c, ONE):
            return out
        add("q1 = q1'", q1, q1p) and add("q0 = q0'", q0, q0p)
    else:
        if not add("c c'(q1' - 1) = q1^(1/2)(q0^(1/2) - q0^(-1/2))", c * cp * Ap, Bsrc):
            return out
        if not add("c c' q1'^(1/2)(q0'^(1/2) - q0'^(-1/2)) = c(q1 - 1)", c * cp * Bp, c * A):
            return out
        if not add("c = 1", c, ONE):
            return out
        add("q1 = q0'", q1, q0p) and add("q0 = q1'", q0, q1p)
    return out


def a1_classify(spec: HomSpec) -> A1Verdict:
    """Decide the shape of a candidate rank-one homomorphism and certify it."""
    _rank_one(spec.source, "source")
    _rank_one(spec.target, "target")
    for key in ("k", "n", "c", "cprime"):
        if key not in spec.meta:
            raise BadInput(f"metadata {key!r} is required")
    k = spec.meta["k"]
    cons = a1_constraints(spec)
    failed = next((name for name, ok in cons if not ok), None)
    report = verify_hom(spec)
    fail = report.failures()
    if report.ok:
        kind = "ValidEven" if k.denominator == 1 and k % 2 == 0 else "ValidOdd"
        reason = "all relations hold"
        if failed:
            reason = f"relations hold although {failed} fails"
        tgt = spec.target
        norm = {"I(T_s)": normalized_image(tgt, k, "even" if kind == "ValidEven" else "odd"),
                "I(theta_a)": spec.images[("th", 0)]}
        return A1Verdict(kind, reason, report, None, norm)
    reason = failed or "images differ from the normalized form"
    return A1Verdict("Invalid", reason, report, {"relation": fail[0].name, "difference": fail[0].witness})


# -- the parameter dictionary -----------------------------------------------------------

@dataclass(frozen=True)
class ParamVerdict:
    epsilon: int
    q_alpha: Scalar | None
    q_alpha_star: Scalar | None
    ambiguous: bool = False
    candidates: tuple = ()

    def to_json(self) -> dict:
        if self.ambiguous:
            return {"epsilon": self.epsilon, "ambiguous": True,
                    "candidates": [{"q_alpha": a.to_q(), "q_alpha_star": b.to_q()} for a, b in self.candidates]}
        return {"epsilon": self.epsilon, "ambiguous": False, "q_alpha": self.q_alpha.to_q(),
                "q_alpha_star": self.q_alpha_star.to_q()}


def params_from_p(p: Scalar, p_prime: Scalar) -> ParamVerdict:
    """q_alpha = p^{1/2} p'^{1/2}; q_alpha* = p^{1/2} p'^{-1/2} or its inverse."""
    def exponent(s, name):
        if not isinstance(s, Scalar) or not s.is_monomial() or s.terms()[0][1] != 1:
            raise BadInput(f"{name} must be a power of q", witness=str(s))
        e = s.monomial_exponent()
        if e % 2 or e < 2:
            raise BadInput(f"{name} must be q^m with m >= 1", witness=str(s))
        return e // 2

    a, b = exponent(p, "p"), exponent(p_prime, "p'")
    qa = q_power(Fraction(a + b, 2))
    if a > b:
        return ParamVerdict(0, qa, q_power(Fraction(a - b, 2)))
    if a < b:
        return ParamVerdict(1, qa, q_power(Fraction(b - a, 2)))
    cands = ((q_power(a), ONE), (q_power(Fraction(a, 2)), q_power(Fraction(a, 2))))
    return ParamVerdict(0, None, None, True, cands)


# -- the comparison homomorphism ------------------------------------------------------

@dataclass
class ComparisonConfig:
    morris: AffineHecke
    solleveld: AffineHecke
    epsilon: tuple


def _c_long_or_a1(datum: BasedRootDatum, i: int) -> bool:
    """Is simple root i alone in an A1 component, or the long simple root of a C_n component?"""
    comp = next(c for c in root_components(datum) if i in c)
    if len(comp) == 1:
        return True
    a, av = datum.simple_roots, datum.simple_coroots

    def cartan(x, y):
        return datum.pair(a[y], av[x])

    doubles = [(x, y) for x in comp for y in comp if x != y and cartan(x, y) == -2]
    others = [(x, y) for x in comp for y in comp if x != y and cartan(x, y) not in (0, -1, -2)]
    if others or len(doubles) != 1:
        return False
    x, y = doubles[0]  # <alpha_x^vee, alpha_y> = -2: alpha_y is long
    if y != i:
        return False
    # C_n: the long root sits at the end of the chain
    neighbours = [z for z in comp if z != y and cartan(y, z) != 0]
    return neighbours == [x]


def check_comparison(cfg: ComparisonConfig) -> None:
    mor, sol = cfg.morris.datum, cfg.solleveld.datum
    if mor.pairing != sol.pairing or len(mor.basis) != len(sol.basis):
        raise PreconditionFailed("the two data live on different lattices")
    for i, (a, b) in enumerate(zip(mor.simple_roots, sol.simple_roots)):
        if a != tuple(-x for x in b):
            raise PreconditionFailed(f"Delta^Mor != -Delta^Sol at position {i + 1}", witness=(a, b))
    for i, (a, b) in enumerate(zip(mor.simple_coroots, sol.simple_coroots)):
        if a != tuple(-x for x in b):
            raise PreconditionFailed(f"coroots do not match at position {i + 1}", witness=(a, b))
    if len(cfg.epsilon) != len(sol.basis) or any(e not in (0, 1) for e in cfg.epsilon):
        raise PreconditionFailed("epsilon must be a 0/1 flag per simple root")
    lm, sm = cfg.morris.labels, cfg.solleveld.labels
    for i, e in enumerate(cfg.epsilon):
        if e == 0:
            if lm.lam[i] != sm.lam[i]:
                raise PreconditionFailed(f"lambda^Mor(-a') = lambda^Sol(a') fails at s{i + 1}",
                                         witness=(lm.lam[i], sm.lam[i]))
        else:
            if not _c_long_or_a1(sol, i):
                raise PreconditionFailed(f"epsilon = 1 at s{i + 1}, which is neither A1 nor C_n long",
                                         witness=f"s{i + 1}")
            if lm.lam[i] != sm.lam_star[i]:
                raise PreconditionFailed(f"lambda^Mor(-a') = lambda*^Sol(a') fails at s{i + 1}",
                                         witness=(lm.lam[i], sm.lam_star[i]))
            if lm.lam_star[i] != sm.lam[i]:
                raise PreconditionFailed(f"lambda*^Mor(-a') = lambda^Sol(a') fails at s{i + 1}",
                                         witness=(lm.lam_star[i], sm.lam[i]))
            if not sm.lam[i] > sm.lam_star[i]:
                raise PreconditionFailed(f"lambda^Sol(a') > lambda*^Sol(a') fails at s{i + 1}",
                                         witness=(sm.lam[i], sm.lam_star[i]))


def build_comparison(cfg: ComparisonConfig, strict: bool = True) -> tuple[HomSpec, Report]:
    """T^Mor_s -> iota(T^Sol_s) or iota(T^Sol_{s,0}); theta_y -> theta_y.

    Composed with iota on the target this sends theta_{-a'^vee} to theta_{a'^vee},
    which is reported as an extra check.
    """
    if strict:
        check_comparison(cfg)
    mor, sol = cfg.morris, cfg.solleveld
    images = {}
    for i, e in enumerate(cfg.epsilon):
        gen = sol.Ts(i) if e == 0 else t_s0(sol, i)
        images[("T", i)] = involution(sol, gen)
    r = sol.datum.rank
    for j in range(r):
        images[("th", j)] = sol.theta(tuple(int(k == j) for k in range(r)))
    spec = HomSpec(mor, sol, images, {"epsilon": tuple(cfg.epsilon)})
    rep = verify_hom(spec)
    for i, av_mor in enumerate(mor.datum.simple_coroots):
        img = involution(sol, spec.theta_image(av_mor))
        want = sol.theta(tuple(-x for x in av_mor))
        ok = img == want
        rep.add(f"theta-sign[s{i + 1}]", ok, None if ok else str(img))
    return spec, rep


def negated_basis(datum: BasedRootDatum) -> BasedRootDatum:
    """Same roots, basis replaced by the negatives of the simple roots."""
    idx = [datum.root_index(tuple(-x for x in a)) for a in datum.simple_roots]
    return BasedRootDatum(datum.pairing, datum.roots, datum.coroots, idx)
