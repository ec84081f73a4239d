import itertools

import pytest
from hypothesis import given, strategies as st

from heckelab.errors import BadInput
from heckelab.rootdatum import (BasedRootDatum, cartan_datum, check_root_datum, empty_datum,
                                reduced_word, weyl_enumerate)

A1 = BasedRootDatum([[1]], [(2,), (-2,)], [(1,), (-1,)], [0])


def closure_size(d):
    """Brute force: the group generated by simple reflections acting on the root list."""
    def reflect(i, v):
        a, av = d.roots[i], d.coroots[i]
        c = sum(x * y for x, y in zip(v, av))
        return tuple(x - c * y for x, y in zip(v, a))

    gens = [tuple(reflect(i, r) for r in d.roots) for i in d.basis]
    index = {r: k for k, r in enumerate(d.roots)}
    perms = [tuple(index[r] for r in g) for g in gens]
    ident = tuple(range(len(d.roots)))
    seen, frontier = {ident}, [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in perms:
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen)


def test_a1_passes():
    assert check_root_datum(A1).ok


def test_bad_normalization_is_reported():
    bad = BasedRootDatum([[1]], [(1,), (-1,)], [(1,), (-1,)], [0])
    rep = check_root_datum(bad)
    assert not rep["pairing-normalization"].ok
    assert rep["pairing-normalization"].witness is not None


@pytest.mark.parametrize("kind,n", [("A", 2), ("C", 2), ("C", 3), ("B", 2), ("G", 2)])
def test_cartan_types_pass(kind, n):
    assert check_root_datum(cartan_datum(kind, n)).ok


def test_c2_reflection_stability_by_hand():
    d = cartan_datum("C", 2)
    for i in range(len(d.roots)):
        for r in d.roots:
            assert d.reflect_X(d.roots[i], r) in d.roots


def test_reflection_examples():
    a = A1.roots[0]
    assert A1.reflect_Y(a, A1.coroots[0]) == (-1,)
    assert A1.reflect_X(a, (0,)) == (0,)
    d = cartan_datum("C", 2)
    alpha, beta = d.simple_roots  # short, long
    assert d.pair(beta, d.simple_coroots[0]) == -2
    assert d.reflect_X(alpha, beta) == tuple(b + 2 * x for x, b in zip(alpha, beta))


@pytest.mark.parametrize("kind,n,order,longest", [("A", 2, 6, 3), ("C", 2, 8, 4), ("A", 3, 24, 6)])
def test_weyl_enumeration(kind, n, order, longest):
    d = cartan_datum(kind, n)
    els = weyl_enumerate(d)
    assert len(els) == order == closure_size(d)
    assert max(e.length for e in els) == longest


def test_empty_datum_has_trivial_group():
    assert len(weyl_enumerate(empty_datum(2))) == 1


def test_reduced_words():
    d = cartan_datum("A", 2)
    wg = d.weyl_group()
    assert reduced_word(d, wg.identity) == ()
    assert reduced_word(d, wg.simple(1)) == (1,)
    w0 = wg.longest()
    word = reduced_word(d, w0)
    assert len(word) == 3
    # brute force: exactly the words of length 3 whose product is w0, none shorter
    hits = [w for w in itertools.product(range(2), repeat=3) if wg.from_word(w) == w0]
    assert word in hits
    assert not any(wg.from_word(w) == w0 for k in range(3) for w in itertools.product(range(2), repeat=k))


def test_mismatched_lengths_rejected():
    with pytest.raises(BadInput):
        BasedRootDatum([[1]], [(2,)], [(1,), (-1,)], [0])


@pytest.mark.parametrize("kind,n", [("A", 2), ("C", 2), ("B", 3)])
def test_weyl_invariants(kind, n):
    d = cartan_datum(kind, n)
    wg = d.weyl_group()
    for w in range(len(wg)):
        assert wg.inversion_count(w) == wg.length(w)
        for s in range(wg.rank):
            assert abs(wg.length(wg.mul(w, wg.simple(s))) - wg.length(w)) == 1
    for a in d.roots:
        for v in d.roots:
            assert d.reflect_X(a, d.reflect_X(a, v)) == v


@given(st.sampled_from([("A", 2), ("C", 2), ("A", 3)]), st.data())
def test_reduced_word_multiplies_back(kn, data):
    d = cartan_datum(*kn)
    wg = d.weyl_group()
    w = data.draw(st.integers(0, len(wg) - 1))
    word = reduced_word(d, w)
    assert wg.from_word(word) == w and len(word) == wg.length(w)
