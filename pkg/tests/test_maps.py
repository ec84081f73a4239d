import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heckelab.bernstein import AffineHecke, LabelFunctions
from heckelab.errors import BadInput, PreconditionFailed
from heckelab.maps import (ComparisonConfig, HomSpec, StandardBernstein, a1_classify, a1_spec,
                           bernstein_to_standard, build_comparison, identity_spec, involution,
                           involution_spec, negated_basis, params_from_p, refine_datum,
                           standard_to_bernstein, t_s0, verify_hom)
from heckelab.rootdatum import BasedRootDatum, cartan_datum, check_root_datum
from heckelab.scalar import ONE, Scalar, q_power

A1 = cartan_datum("A", 1)
HALF = BasedRootDatum([[1]], [(1,), (-1,)], [(2,), (-2,)], [0])
q = q_power(1)


def alg(datum, lam, star=None):
    return AffineHecke(datum, LabelFunctions(lam, star))


ALGEBRAS = {
    "A1(2,1)": lambda: alg(A1, [2], [1]),
    "A2": lambda: alg(cartan_datum("A", 2), [1, 1]),
    "C2": lambda: alg(cartan_datum("C", 2), [1, 2], [1, 1]),
}


# -- the standard isomorphism ---------------------------------------------------------

@pytest.mark.parametrize("name", list(ALGEBRAS))
def test_finite_part_is_identity(name):
    iso = StandardBernstein(ALGEBRAS[name]())
    for i in range(len(iso.bern.datum.basis)):
        assert standard_to_bernstein(iso, iso.hecke.Ts(f"s{i + 1}")) == iso.bern.Ts(i)
        assert bernstein_to_standard(iso, iso.bern.Ts(i)) == iso.hecke.Ts(f"s{i + 1}")


@pytest.mark.parametrize("name", list(ALGEBRAS))
def test_dominant_translations(name):
    iso = StandardBernstein(ALGEBRAS[name]())
    d = iso.bern.datum
    H, W = iso.hecke, iso.coxeter
    for y in itertools.product(range(0, 3), repeat=d.rank):
        if any(d.pair(a, y) < 0 for a in d.simple_roots):
            continue
        t = W.translation(y)
        half = H.q_of(t).sqrt_monomial()
        assert standard_to_bernstein(iso, H.T(t)) == iso.bern.theta(y, half)
        assert bernstein_to_standard(iso, iso.bern.theta(y)) == H.T(t) * half ** -1


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(list(ALGEBRAS)), st.integers(0, 10 ** 6))
def test_round_trip_and_multiplicativity(name, seed):
    iso = StandardBernstein(ALGEBRAS[name]())
    H = iso.hecke
    rng = random.Random(seed)
    pool = iso.coxeter.elements(3)

    def rand():
        return sum((H.T(rng.choice(pool)) * Scalar.mono(rng.randint(-2, 2), rng.randint(1, 3))
                    for _ in range(3)), H.zero())

    x, y = rand(), rand()
    assert bernstein_to_standard(iso, standard_to_bernstein(iso, x)) == x
    assert standard_to_bernstein(iso, x * y) == standard_to_bernstein(iso, x) * standard_to_bernstein(iso, y)


# -- the involution and T_{s,0} -------------------------------------------------------

@pytest.mark.parametrize("name", list(ALGEBRAS))
def test_involution_generators(name):
    H = ALGEBRAS[name]()
    for i in range(len(H.datum.basis)):
        assert involution(H, H.Ts(i)) == H.from_scalar(H.q1[i] - ONE) - H.Ts(i)
    for y in itertools.product(range(-1, 2), repeat=H.rank):
        assert involution(H, H.theta(y)) == H.theta(tuple(-v for v in y))
    assert verify_hom(involution_spec(H), box=2).ok
    assert verify_hom(identity_spec(H), box=2).ok


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(list(ALGEBRAS)), st.integers(0, 10 ** 6))
def test_involution_square_and_product(name, seed):
    H = ALGEBRAS[name]()
    rng = random.Random(seed)

    def rand():
        out = H.zero()
        for _ in range(3):
            y = tuple(rng.randint(-2, 2) for _ in range(H.rank))
            out = out + H.theta(y, Scalar.mono(rng.randint(-2, 2))) * H.T(rng.randrange(len(H.W)))
        return out

    a, b = rand(), rand()
    assert involution(H, involution(H, a)) == a
    assert involution(H, a * b) == involution(H, a) * involution(H, b)


@pytest.mark.parametrize("lam,star", [(2, 1), (1, 2), (1, 1), (3, 1)])
def test_t_s0(lam, star):
    H = alg(A1, [lam], [star])
    ts = t_s0(H, 0)
    q0 = H.q0[0]
    assert ts * ts == ts * (q0 - ONE) + H.from_scalar(q0)
    pref = -Scalar.mono(star - lam)
    assert ts == involution(H, H.theta((-1,)) * H.Ts(0)) * pref
    if lam == star:
        th = H.theta((1,))
        assert ts == th * H.Ts(0) - th * (H.q1[0] - ONE)


def test_bad_quadratic_image_detected():
    H = alg(A1, [1])
    spec = identity_spec(H)
    spec.images[("T", 0)] = H.Ts(0) + 1
    rep = verify_hom(spec)
    assert not rep["quadratic[s1]"].ok and rep["quadratic[s1]"].witness


# -- refinement -------------------------------------------------------------------------

def test_refine_positive_is_unchanged():
    d = cartan_datum("C", 2)
    lab = LabelFunctions([1, 2], [1, 1])
    d2, lab2 = refine_datum(d, lab)
    assert d2 == d and lab2 == lab


def test_refine_a1_with_vanishing_star():
    d2, lab2 = refine_datum(A1, LabelFunctions([2], [0]))
    assert d2.roots == ((1,), (-1,)) and d2.coroots == ((2,), (-2,))
    assert lab2.lam == (2,) and lab2.lam_star == (2,)
    assert check_root_datum(d2).ok
    src = alg(A1, [2], [0])
    tgt = AffineHecke(d2, lab2)
    images = {("T", 0): tgt.Ts(0), ("th", 0): tgt.theta((1,))}
    rep = verify_hom(HomSpec(src, tgt, images), box=3)
    assert rep.ok, rep.failures()
    for y in range(-3, 4):
        assert tgt.theta_poly(src.rhs(0, (y,))) == tgt.cross_relation((y,), 0)


def test_refine_rejects_root_outside_2X():
    with pytest.raises(BadInput):
        refine_datum(HALF, LabelFunctions([1], [0]))


# -- rank one classification ------------------------------------------------------------

SRC = lambda: alg(A1, [2], [1])  # noqa: E731


@pytest.mark.parametrize("k", [0, 2])
def test_even_valid(k):
    v = a1_classify(a1_spec(SRC(), alg(A1, [2], [1]), k, 1, bprime="even"))
    assert v.kind == "ValidEven"


def test_plain_identity_is_valid_even():
    H = SRC()
    v = a1_classify(a1_spec(H, alg(A1, [2], [1]), 0, 1))
    assert v.kind == "ValidEven"


@pytest.mark.parametrize("k", [1, 3])
def test_odd_valid_with_quadratic_t_s0(k):
    tgt = alg(A1, [1], [2])
    v = a1_classify(a1_spec(SRC(), tgt, k, 1, bprime="odd"))
    assert v.kind == "ValidOdd"
    ts = t_s0(tgt, 0)
    assert ts * ts == ts * (tgt.q0[0] - ONE) + tgt.from_scalar(tgt.q0[0])


@pytest.mark.parametrize("tgt,k,n,constraint", [
    (lambda: alg(A1, [2], [1]), 0, 2, "-c(q1 - 1)"),
    (lambda: alg(A1, [2], [1]), 0, 3, "(q1 - 1) + q1^(1/2)"),
    (lambda: alg(HALF, [2], [2]), "1/2", 1, "q1' - 1"),
    (lambda: alg(HALF, [2], [2]), 0, "1/2", "q0^(1/2) - q0^(-1/2)"),
    (lambda: alg(HALF, [2], [2]), 0, "3/2", "(q1 - 1) + q1^(1/2)"),
    (lambda: alg(A1, [3], [1]), 0, 1, "c c'(q1' - 1)"),
])
def test_invalid_cases_name_a_violated_relation(tgt, k, n, constraint):
    bprime = "even" if Fraction(k).denominator == 1 and Fraction(n).denominator == 1 else None
    v = a1_classify(a1_spec(SRC(), tgt(), k, n, bprime=bprime))
    assert v.kind == "Invalid"
    assert v.reason.startswith(constraint)
    assert v.witness["relation"] and v.witness["difference"]


def test_n2_with_equal_parameters_fails_later_constraint():
    H = alg(A1, [2], [2])
    v = a1_classify(a1_spec(H, alg(A1, [2], [2]), 0, 2, bprime="even"))
    assert v.kind == "Invalid"


# -- parameters and comparison ----------------------------------------------------------

def test_params_from_p():
    v = params_from_p(q_power(2), q)
    assert (v.epsilon, v.q_alpha, v.q_alpha_star) == (0, q_power(Fraction(3, 2)), q_power(Fraction(1, 2)))
    v = params_from_p(q, q_power(2))
    assert (v.epsilon, v.q_alpha, v.q_alpha_star) == (1, q_power(Fraction(3, 2)), q_power(Fraction(1, 2)))
    v = params_from_p(q, q)
    assert v.ambiguous and v.epsilon == 0
    assert set(v.candidates) == {(q, ONE), (q_power(Fraction(1, 2)), q_power(Fraction(1, 2)))}
    with pytest.raises(BadInput):
        params_from_p(ONE, q)


COMPARISONS = [
    ("A", 1, [2], [1], (0,)), ("A", 1, [2], [1], (1,)),
    ("C", 2, [1, 2], [1, 1], (0, 0)), ("C", 2, [1, 2], [1, 1], (0, 1)),
    ("A", 2, [1, 1], [1, 1], (0, 0)), ("C", 3, [1, 1, 3], [1, 1, 1], (0, 0, 1)),
]


def comparison(kind, n, lam, star, eps):
    sol_d = cartan_datum(kind, n)
    sol = AffineHecke(sol_d, LabelFunctions(lam, star))
    ml, ms = list(lam), list(star)
    for i, e in enumerate(eps):
        if e:
            ml[i], ms[i] = star[i], lam[i]
    mor = AffineHecke(negated_basis(sol_d), LabelFunctions(ml, ms))
    return ComparisonConfig(mor, sol, eps)


@pytest.mark.parametrize("case", COMPARISONS, ids=lambda c: f"{c[0]}{c[1]}-{''.join(map(str, c[4]))}")
def test_comparison_passes(case):
    cfg = comparison(*case)
    spec, rep = build_comparison(cfg)
    assert rep.ok, rep.failures()
    sol = cfg.solleveld
    for av in cfg.morris.datum.simple_coroots:
        # composed with the involution, theta_{-a'^vee} goes to theta_{a'^vee}
        neg = tuple(-x for x in av)
        assert involution(sol, spec.theta_image(av)) == sol.theta(neg)


def test_comparison_detects_label_perturbation():
    cfg = comparison("A", 1, [2], [1], (0,))
    cfg.morris = alg(negated_basis(A1), [3], [1])
    with pytest.raises(PreconditionFailed):
        build_comparison(cfg)
    _, rep = build_comparison(cfg, strict=False)
    assert not rep.ok
    assert any(c.name.startswith(("quadratic", "cross")) for c in rep.failures())


def test_epsilon_one_needs_a1_or_long_c_root():
    cfg = comparison("C", 2, [1, 2], [1, 1], (0, 0))
    cfg.epsilon = (1, 0)
    with pytest.raises(PreconditionFailed):
        build_comparison(cfg)
