"""End-to-end acceptance checks, one test per criterion.

Each test prints a PASS/FAIL line with its wall time.
"""

import json
import time
from fractions import Fraction

import pytest

from conftest import FIXTURES
from heckelab.maps import params_from_p
from heckelab.scalar import ONE, q_power
from heckelab.suites import Options, run_suite

OPT = Options(seed=0, window=3, max_terms=6)


def load(name):
    return json.loads((FIXTURES / name).read_text())


class Criterion:
    def __init__(self, capsys, number, title, budget=None):
        self.capsys = capsys
        self.number, self.title, self.budget = number, title, budget
        self.problems = []

    def expect(self, cond, what):
        if not cond:
            self.problems.append(what)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.problems.append(f"{exc_type.__name__}: {exc}")
        if self.budget is not None and elapsed > self.budget:
            self.problems.append(f"took {elapsed:.1f}s, budget {self.budget}s")
        verdict = "FAIL" if self.problems else "PASS"
        line = f"{verdict} criterion {self.number}: {self.title} ({elapsed:.1f}s)"
        if self.problems:
            line += " -- " + "; ".join(self.problems[:3])
        # shown even under plain ``pytest -v``
        with self.capsys.disabled():
            print("\n" + line, flush=True)
        assert not self.problems, self.problems
        return False


def suite_checks(c, suite, cfg, names):
    rep = run_suite(suite, cfg, OPT)
    for n in names:
        try:
            chk = rep[n]
        except KeyError:
            c.problems.append(f"{suite}: no check {n}")
            continue
        c.expect(chk.ok, f"{suite}/{n} failed: {chk.witness}")
    return rep


def test_criterion_1_bernstein_associativity(capsys):
    with Criterion(capsys, 1, "associativity on 200 random triples in A1, A1 unequal, A2", 60) as c:
        for name in ("a1.json", "a1_unequal.json", "a2.json"):
            cfg = dict(load(name), triples=200, pairs=0, max_length=0, inverse_samples=0)
            suite_checks(c, "appendixB", cfg, ["associativity"] + [f"quadratic[s{i}]" for i in (1,)])
        c.expect(load("a1_unequal.json")["labels"] == {"lambda": [2], "lambda_star": [1]},
                 "unequal fixture lost its labels")


def test_criterion_2_standard_isomorphism(capsys):
    with Criterion(capsys, 2, "standard/Bernstein isomorphism multiplicative and round-trips up to length 6", 60) as c:
        for name in ("a1.json", "a2.json"):
            cfg = dict(load(name), triples=0, pairs=100, max_length=6)
            rep = suite_checks(c, "appendixB", cfg, ["iso-multiplicative", "iso-roundtrip", "iso-inverse"])
            c.expect(all(rep[n].ok for n in rep.names() if n.startswith("iso-")), f"{name}: iso check failed")


def test_criterion_3_involution(capsys):
    with Criterion(capsys, 3, "iota squares to the identity and is multiplicative on 200 pairs", None) as c:
        for name in ("a1.json", "a2.json", "c2.json"):
            cfg = dict(load(name), pairs=200)
            rep = run_suite("appendixC", cfg, OPT)
            gens = [n for n in rep.names() if n.startswith("iota-generator[")]
            c.expect(gens, f"{name}: generator images not checked")
            c.expect(rep.ok, f"{name}: {[f.name for f in rep.failures()][:3]}")
            suite_checks(c, "appendixC", cfg, ["iota-square", "iota-multiplicative"])


def test_criterion_4_rank_one_classification(capsys):
    with Criterion(capsys, 4, "rank-one homomorphism classification", 30) as c:
        suite_checks(c, "appendixD", load("d_k0.json"), ["verdict"])
        rep = suite_checks(c, "appendixD", load("d_k1.json"), ["verdict", "t_s0-quadratic"])
        c.expect(rep["verdict"].witness["got"] == "ValidOdd", "k=1 is not ValidOdd")
        for name in ("d_n2.json", "d_n3.json", "d_khalf.json", "d_nhalf.json"):
            rep = suite_checks(c, "appendixD", load(name), ["verdict", "witness-relation"])
            c.expect(rep["verdict"].witness["got"] == "Invalid", f"{name} not Invalid")
            c.expect(bool(rep["witness-relation"].witness), f"{name}: no violated relation named")


def test_criterion_5_bases_and_extensions(capsys):
    with Criterion(capsys, 5, "basis containing J and extension to bases in A2 and C2, window 3", 120) as c:
        for system in ("A2", "C2"):
            rep = run_suite("appendixA", {"system": system}, OPT)
            c.expect(len(rep.names()) > 3, f"{system}: too few checks")
            c.expect(rep.ok, f"{system}: {[f.name for f in rep.failures()][:3]}")


QUOTIENTS = ["q_a1_identity.json", "q_a1_unequal.json", "q_a2_full.json", "q_a2_rank1.json",
             "q_c2_levi.json", "q_c2_levi_other_point.json"]


def test_criterion_6_quotients(capsys):
    with Criterion(capsys, 6, f"quotient reduced, injective and v-action on {len(QUOTIENTS)} fixtures") as c:
        for name in QUOTIENTS:
            rep = suite_checks(c, "quotient", load(name), ["quotient/reduced", "quotient/injective"])
            v = [n for n in rep.names() if n.startswith("quotient/v-action[")]
            c.expect(v and all(rep[n].ok for n in v), f"{name}: v-action")
            c.expect(rep.ok, f"{name}: {[f.name for f in rep.failures()][:3]}")
        c.expect(not load("q_a2_rank1.json").get("J") and not load("q_a1_identity.json").get("J"),
                 "J = empty fixtures missing")


def test_criterion_7_refinement(capsys):
    with Criterion(capsys, 7, "refinement of an A1 datum with lambda* = 0 keeps the relations") as c:
        rep = run_suite("comparison", load("refine_a1.json"), OPT)
        cross = [n for n in rep.names() if n.startswith("refine/identity-map/cross")]
        c.expect(cross, "no cross relations checked")
        c.expect(rep.ok, str([f.name for f in rep.failures()][:3]))


def test_criterion_8_comparison(capsys):
    with Criterion(capsys, 8, "comparison homomorphisms in rank 1 and 2 with epsilon 0 and 1", 60) as c:
        for name in ("cmp_a1_eps0.json", "cmp_a1_eps1.json", "cmp_c2_eps0.json", "cmp_c2_eps1.json",
                     "cmp_quotient_c2.json"):
            rep = run_suite("comparison", load(name), OPT)
            signs = [n for n in rep.names() if "theta-sign" in n]
            c.expect(signs, f"{name}: theta sign not checked")
            c.expect("perturbation-detected" in rep.names(), f"{name}: no perturbation")
            c.expect(rep.ok, f"{name}: {[f.name for f in rep.failures()][:3]}")


def test_criterion_9_parameter_dictionary(capsys):
    q = q_power(1)
    with Criterion(capsys, 9, "parameter dictionary, all three cases") as c:
        v = params_from_p(q_power(3), q)
        c.expect((v.epsilon, v.q_alpha, v.q_alpha_star) == (0, q_power(2), q), f"p > p': {v}")
        v = params_from_p(q, q_power(3))
        c.expect((v.epsilon, v.q_alpha, v.q_alpha_star) == (1, q_power(2), q), f"p < p': {v}")
        v = params_from_p(q_power(2), q_power(2))
        c.expect(v.ambiguous, "equal parameters not ambiguous")
        c.expect(set(v.candidates) == {(q_power(2), ONE), (q, q)}, f"candidates {v.candidates}")


if __name__ == "__main__":
    raise SystemExit(pytest.main(["-q", "-s", __file__]))
