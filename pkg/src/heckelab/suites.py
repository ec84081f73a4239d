"""Verification suites driven by JSON configurations.

Each suite takes a configuration dictionary and options and returns a Report.
Randomised checks draw from ``random.Random(seed)`` so that a fixed
(configuration, seed, window) always produces the same report.
"""

from __future__ import annotations

import itertools
import os
import random
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

from .affine import (AffineRoot, system_from_spec,
                     basis_containing_J, check_basis, enumerate_bases,
                     extend_to_basis, verify_affine_system)
from .bernstein import AffineHecke, BernsteinElt, LabelFunctions, simple_orbit_classes
from .errors import BadInput, DependentGradients, HeckeLabError, NoExtension
from .io import load_algebra, load_comparison, load_homspec
from .iwahori import HeckeElt
from .maps import (HomSpec, StandardBernstein, a1_classify, build_comparison,
                   involution, involution_spec, refine_datum,
                   t_s0, verify_hom)
from .quotient import (build_quotient, load_marked, morris_datum,
                       translation_vector, v_element)
from .report import Report
from .rootdatum import check_root_datum
from .scalar import ONE, Scalar


@dataclass
class Options:
    seed: int = 0
    window: int = 3
    max_terms: int = 6
    threads: int = 1

    @classmethod
    def from_env(cls, **kw) -> "Options":
        threads = int(os.environ.get("HECKELAB_THREADS", "1") or 1)
        return cls(threads=max(1, threads), **kw)


def pmap(fn: Callable, items: Iterable, threads: int = 1) -> list:
    """map preserving order; runs in a thread pool when threads > 1."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _aggregate(rep: Report, name: str, results: list, detail: str = "") -> None:
    """One check summarising many trials; the witness is the first failing trial."""
    bad = next(((i, w) for i, (ok, w) in enumerate(results) if not ok), None)
    rep.add(name, bad is None, None if bad is None else {"trial": bad[0], "witness": bad[1]},
            detail or f"{len(results)} trials")


# -- random elements --------------------------------------------------------------

def random_scalar(rng: random.Random) -> Scalar:
    s = Scalar.mono(rng.randint(-2, 2), rng.choice((1, -1, 2, -3)))
    if rng.random() < 0.3:
        s = s + Scalar.mono(rng.randint(-2, 2), rng.choice((1, -1)))
    return s if s else ONE


def random_bernstein(alg: AffineHecke, rng: random.Random, max_terms: int = 6, box: int = 2) -> BernsteinElt:
    out = alg.zero()
    for _ in range(rng.randint(1, max_terms)):
        w = rng.randrange(len(alg.W))
        y = tuple(rng.randint(-box, box) for _ in range(alg.rank))
        out = out + alg.theta(y, random_scalar(rng)) * alg.T(w)
    return out


def random_standard(H, elements: list, rng: random.Random, max_terms: int = 6) -> HeckeElt:
    out = H.zero()
    for _ in range(rng.randint(1, max_terms)):
        out = out + H.T(rng.choice(elements)) * random_scalar(rng)
    return out


# -- appendix A: bases containing a given subset ------------------------------------

def suite_appendixA(cfg: dict, opt: Options) -> Report:
    sys = system_from_spec(cfg["system"])
    window = opt.window
    rep = Report("bases of affine root systems")
    rep.extend(verify_affine_system(sys, max(window, 2)), "axioms/")
    bases = enumerate_bases(sys, window)
    keys = {B.key() for B in bases}
    _aggregate(rep, "bases-valid", [(check_basis(sys, B, window).ok, B.to_json()) for B in bases],
               f"{len(bases)} chambers")

    # the restricted system depends on J only through the span of its gradients
    restrictions: dict = {}
    levi, oracle = [], []
    for B in bases:
        for r in range(len(B.roots) + 1):
            for J in itertools.combinations(B.roots, r):
                try:
                    R, BJ = basis_containing_J(sys, B, J)
                except DependentGradients:
                    continue
                except HeckeLabError as exc:
                    levi.append((False, {"J": [str(j) for j in J], "error": str(exc)}))
                    continue
                if not J:
                    continue
                proj = [R.project_root(j) for j in J]
                ok = all(p in BJ.roots for p in proj) and check_basis(R.system, BJ, window).ok
                levi.append((ok, {"J": [str(j) for j in J], "basis": [str(b) for b in BJ.roots]}))
                span = frozenset(R.lift_root(AffineRoot(g, 0)).gradient for g in R.system.gradients)
                if span not in restrictions:
                    # wide enough window to hold every chamber with a wall of |const| <= window
                    sub = enumerate_bases(R.system, 2 * window + 2, limit=20000)
                    restrictions[span] = (R, [frozenset(R.lift_root(b) for b in S.roots) for S in sub])
                found = any(frozenset(J) <= L for L in restrictions[span][1])
                oracle.append((found, {"J": [str(j) for j in J]}))
    _aggregate(rep, "levi-basis", levi)
    _aggregate(rep, "levi-basis-oracle", oracle)

    converse, tried = [], set()
    for _, lifted_bases in restrictions.values():
        for L in lifted_bases:
            for r in range(1, len(L) + 1):
                for Jp in itertools.combinations(sorted(L), r):
                    lifted = frozenset(Jp)
                    if lifted in tried:
                        continue
                    tried.add(lifted)
                    try:
                        Bp = extend_to_basis(sys, sorted(lifted))
                    except DependentGradients:
                        continue
                    except NoExtension as exc:
                        converse.append((False, {"J'": sorted(str(j) for j in lifted), "error": str(exc)}))
                        continue
                    if all(abs(b.const) <= window for b in Bp.roots):
                        ok = Bp.key() in keys
                    else:
                        ok = check_basis(sys, Bp, window).ok
                    converse.append((ok and lifted <= Bp.key(), {"J'": sorted(str(j) for j in lifted)}))
    _aggregate(rep, "converse-extension", converse)
    return rep


# -- appendix B: Bernstein presentation and the standard isomorphism --------------------

def suite_appendixB(cfg: dict, opt: Options) -> Report:
    alg = load_algebra(cfg)
    rng = random.Random(opt.seed)
    rep = Report("Bernstein presentation")
    n = len(alg.datum.basis)
    for i in range(n):
        t = alg.Ts(i)
        rep.add(f"quadratic[s{i + 1}]", ((t + 1) * (t - alg.from_scalar(alg.q1[i]))).is_zero())

    triples = [tuple(random_bernstein(alg, rng, opt.max_terms) for _ in range(3))
               for _ in range(int(cfg.get("triples", 200)))]

    def assoc(tr):
        a, b, c = tr
        d = (a * b) * c - a * (b * c)
        return d.is_zero(), None if d.is_zero() else str(d)

    _aggregate(rep, "associativity", pmap(assoc, triples, opt.threads))

    try:
        iso = StandardBernstein(alg)
    except BadInput as exc:
        rep.title += f" (standard presentation unavailable: {exc})"
        return rep
    H, W = iso.hecke, iso.coxeter
    for i in range(n):
        got = iso.forward(H.Ts(f"s{i + 1}"))
        rep.add(f"iso-finite[s{i + 1}]", got == alg.Ts(i), None if got == alg.Ts(i) else str(got))
    d = alg.datum
    dominant = [y for y in itertools.product(range(0, 3), repeat=d.rank)
                if any(y) and all(d.pair(a, y) >= 0 for a in d.simple_roots)][:6]
    for y in dominant:
        ty = W.translation(y)
        half = H.q_of(ty).sqrt_monomial()
        ok = iso.forward(H.T(ty)) == alg.theta(y, half) and iso.backward(alg.theta(y)) == H.T(ty) * half ** -1
        rep.add(f"iso-dominant[{list(y)}]", ok)

    max_len = int(cfg.get("max_length", 6))
    elts = W.elements(max_len)
    rt = []
    for w in elts:
        x = H.T(w)
        back = iso.backward(iso.forward(x))
        rt.append((back == x, None if back == x else W.reduced_word(w)))
    _aggregate(rep, "iso-roundtrip", rt, f"{len(elts)} elements of length <= {max_len}")

    short = W.elements(3)
    pairs = [(random_standard(H, short, rng, opt.max_terms), random_standard(H, short, rng, opt.max_terms))
             for _ in range(int(cfg.get("pairs", 100)))]

    def mult(p):
        a, b = p
        ok = iso.forward(a * b) == iso.forward(a) * iso.forward(b)
        return ok, None if ok else (str(a), str(b))

    _aggregate(rep, "iso-multiplicative", pmap(mult, pairs, opt.threads))
    samples = [random_bernstein(alg, rng, 3, 1) for _ in range(int(cfg.get("inverse_samples", 30)))]
    _aggregate(rep, "iso-inverse", [(iso.forward(iso.backward(x)) == x, str(x)) for x in samples])
    return rep


# -- appendix C: the involution -------------------------------------------------------

def suite_appendixC(cfg: dict, opt: Options) -> Report:
    alg = load_algebra(cfg)
    rng = random.Random(opt.seed)
    rep = Report("the involution iota")
    d = alg.datum
    for i in range(len(d.basis)):
        want = alg.from_scalar(alg.q1[i] - ONE) - alg.Ts(i)
        got = involution(alg, alg.Ts(i))
        rep.add(f"iota-generator[s{i + 1}]", got == want, None if got == want else str(got))
    for j in range(d.rank):
        e = tuple(int(k == j) for k in range(d.rank))
        rep.add(f"iota-theta[e{j + 1}]", involution(alg, alg.theta(e)) == alg.theta(tuple(-x for x in e)))
    rep.extend(verify_hom(involution_spec(alg)), "relations/")

    count = int(cfg.get("pairs", 200))
    pairs = [(random_bernstein(alg, rng, opt.max_terms), random_bernstein(alg, rng, opt.max_terms))
             for _ in range(count)]

    def square(p):
        x = p[0]
        ok = involution(alg, involution(alg, x)) == x
        return ok, None if ok else str(x)

    def mult(p):
        a, b = p
        ok = involution(alg, a * b) == involution(alg, a) * involution(alg, b)
        return ok, None if ok else (str(a), str(b))

    _aggregate(rep, "iota-square", pmap(square, pairs, opt.threads))
    _aggregate(rep, "iota-multiplicative", pmap(mult, pairs, opt.threads))

    for i in range(len(d.basis)):
        ts = t_s0(alg, i)
        q0 = alg.q0[i]
        lhs = ts * ts
        rhs = ts * (q0 - ONE) + alg.from_scalar(q0)
        rep.add(f"t_s0-quadratic[s{i + 1}]", lhs == rhs, None if lhs == rhs else str(lhs - rhs))
        lam, star = alg.labels.lam[i], alg.labels.lam_star[i]
        av = d.simple_coroots[i]
        other = involution(alg, alg.theta(tuple(-x for x in av)) * alg.Ts(i)) * -Scalar.mono(star - lam)
        rep.add(f"t_s0-iota[s{i + 1}]", other == ts, None if other == ts else str(other - ts))
    return rep


# -- appendix D: rank-one homomorphisms ---------------------------------------------------

def suite_appendixD(cfg: dict, opt: Options) -> Report:
    spec = load_homspec(cfg)
    verdict = a1_classify(spec)
    expect = cfg.get("expect")
    rep = Report("rank-one homomorphism classification")
    ok = verdict.kind == expect if expect else verdict.kind != "Invalid"
    rep.add("verdict", ok, {"got": verdict.kind, "expected": expect or "ValidEven|ValidOdd",
                            "reason": verdict.reason}, verdict.reason)
    if verdict.kind == "Invalid":
        fail = verdict.report.failures()
        rep.add("witness-relation", bool(fail), verdict.witness)
    else:
        tgt = spec.target
        norm = verdict.normalized["I(T_s)"]
        rep.add("normalized-form", spec.images[("T", 0)] == norm, str(norm))
        s, t = spec.source.labels, tgt.labels
        if verdict.kind == "ValidEven":
            same = (s.lam[0], s.lam_star[0]) == (t.lam[0], t.lam_star[0])
        else:
            same = (s.lam[0], s.lam_star[0]) == (t.lam_star[0], t.lam[0])
        rep.add("parameters", same, {"source": s.to_json(), "target": t.to_json()})
    tgt = spec.target
    ts = t_s0(tgt, 0)
    q0 = tgt.q0[0]
    lhs, rhs = ts * ts, ts * (q0 - ONE) + tgt.from_scalar(q0)
    rep.add("t_s0-quadratic", lhs == rhs, None if lhs == rhs else str(lhs - rhs))
    return rep


# -- quotient ---------------------------------------------------------------------------

def suite_quotient(cfg: dict, opt: Options) -> Report:
    marked = load_marked(cfg)
    qs = build_quotient(marked, opt.window)
    rep = Report("quotient affine root system")
    rep.extend(qs.report, "quotient/")
    if "e" not in cfg:
        return rep
    md = morris_datum(qs, [Fraction(str(x)) for x in cfg["e"]])
    rep.extend(check_root_datum(md.datum), "datum/")
    if "expect_labels" in cfg:
        want = LabelFunctions.from_json(cfg["expect_labels"], len(md.datum.basis))
        rep.add("labels", md.labels == want, {"got": md.labels.to_json(), "expected": want.to_json()})
    for b in md.spd.basis_at_e:
        a = qs.lift(b, opt.window)
        k = qs.system.period(b)
        partner = type(b)(tuple(-x for x in b.gradient), k - b.const)
        a2 = next((r for r in marked.roots(opt.window + 2) if qs.project(r) == partner), None)
        if a is None or a2 is None:
            rep.add(f"translation[{b}]", False, "no marked root over the partner")
            continue
        t = v_element(marked.system, marked.J, a).map * v_element(marked.system, marked.J, a2).map
        v = translation_vector(qs, t, md)
        cov = md.datum.coroots[md.r(a)]
        ok = v in (tuple(cov), tuple(-x for x in cov))
        rep.add(f"translation[{b}]", ok, {"v": list(v), "coroot": list(cov)})
    return rep


# -- comparison and refinement --------------------------------------------------------------

def _perturbed(alg: AffineHecke) -> AffineHecke:
    cls = simple_orbit_classes(alg.datum)[0]
    lam, star = list(alg.labels.lam), list(alg.labels.lam_star)
    for i in cls:
        lam[i] += 1
        star[i] += 1
    return AffineHecke(alg.datum, LabelFunctions(lam, star))


def suite_comparison(cfg: dict, opt: Options) -> Report:
    rep = Report("comparison homomorphism")
    if "morris" in cfg:
        cc = load_comparison(cfg)
        spec, r = build_comparison(cc, strict=bool(cfg.get("strict", True)))
        rep.extend(r, "relations/")
        if cfg.get("perturb", True):
            cc.morris = _perturbed(cc.morris)
            _, r2 = build_comparison(cc, strict=False)
            fail = r2.failures()
            rep.add("perturbation-detected", bool(fail), fail[0].name if fail else None)
    if "refine" in cfg:
        rep.extend(refinement_report(cfg["refine"]), "refine/")
    return rep


def refinement_report(cfg: dict) -> Report:
    alg = load_algebra(cfg)
    datum, labels = refine_datum(alg.datum, alg.labels)
    rep = Report("refinement where lambda* vanishes")
    rep.extend(check_root_datum(datum), "datum/")
    same_w = all(alg.datum.reflection_matrix_Y(i) == datum.reflection_matrix_Y(i) for i in alg.datum.basis)
    rep.add("weyl-unchanged", same_w)
    ok_labels = all(labels.lam[i] == alg.labels.lam[i] and
                    (labels.lam_star[i] == alg.labels.lam_star[i] or
                     (alg.labels.lam_star[i] == 0 and labels.lam_star[i] == alg.labels.lam[i]))
                    for i in range(len(datum.basis)))
    rep.add("labels", ok_labels, labels.to_json())
    refined = AffineHecke(datum, labels)
    images = {("T", i): refined.Ts(i) for i in range(len(datum.basis))}
    for j in range(datum.rank):
        images[("th", j)] = refined.theta(tuple(int(k == j) for k in range(datum.rank)))
    rep.extend(verify_hom(HomSpec(alg, refined, images), box=2), "identity-map/")
    return rep


SUITES = {
    "appendixA": suite_appendixA,
    "appendixB": suite_appendixB,
    "appendixC": suite_appendixC,
    "appendixD": suite_appendixD,
    "quotient": suite_quotient,
    "comparison": suite_comparison,
}


def _applicable(cfg: dict) -> list[str]:
    if any(k in cfg for k in SUITES):
        return [k for k in SUITES if k in cfg]
    if "source" in cfg:
        return ["appendixD"]
    if "morris" in cfg or "refine" in cfg:
        return ["comparison"]
    if "gamma" in cfg:
        return ["quotient"]
    if "system" in cfg:
        return ["appendixA"]
    if "datum" in cfg:
        return ["appendixB", "appendixC"]
    raise BadInput("configuration does not match any suite")


def run_suite(name: str, cfg: dict, opt: Options) -> Report:
    if name != "all":
        return SUITES[name](cfg.get(name, cfg) if isinstance(cfg.get(name), dict) else cfg, opt)
    rep = Report("all suites")
    for s in _applicable(cfg):
        sub = cfg.get(s, cfg)
        rep.extend(SUITES[s](sub, opt), f"{s}/")
    return rep

