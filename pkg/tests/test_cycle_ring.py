import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from cyclering.cycle_ring import (CycleRingElement, SubspaceSymbol, TruncatedPoly, canonical_subspace, degree,
                                  orbit_product_expansion, orbit_sum, pair, reduce_to_truncated, subspace_orbit)
from cyclering.errors import CutoffMismatch

from conftest import double_coset_expansion

M = 6


def sym(vectors, n, coeff=1, m=M):
    return CycleRingElement.symbol(m, vectors, n, coeff)


def test_canonical_subspace():
    assert canonical_subspace([(2, 4, 0)]) == canonical_subspace([(-1, -2, 0)])
    assert canonical_subspace([(1, 0, 0), (1, 1, 0)]) == canonical_subspace([(0, 3, 0), (5, 0, 0)])
    assert canonical_subspace([(0, 0, 0)]) == ()
    assert canonical_subspace([(Fraction(1, 2), 1)]) == canonical_subspace([(1, 2)])


def test_symbol_needs_room():
    with pytest.raises(ValueError):
        SubspaceSymbol.of([(1, 0, 0), (0, 1, 0)], 1)


def test_product_examples():
    e1, e2 = (1, 0, 0), (0, 1, 0)
    assert sym([e1], 1) * sym([e2], 2) == sym([e1, e2], 3)
    assert sym([e1], 4) * sym([e2], 3) == CycleRingElement.zero(M)
    one = CycleRingElement.one(M)
    z = sym([e1], 2, 3) + sym([e2], 5, -1)
    assert one * z == z
    c = CycleRingElement.c(M)
    assert c * sym([e1], 2) == sym([e1], 3)
    assert c * sym([e1], M) == CycleRingElement.zero(M)
    assert CycleRingElement.c(M, M + 1) == CycleRingElement.zero(M)


def test_degree_and_pair_examples():
    u1, u2, u3 = [(1, 0, 0)], [(0, 1, 0)], [(1, 1, 1)]
    assert degree(sym(u1, M)) == 1
    assert degree(sym(u1, M - 1)) == 0
    assert degree(sym(u1, M, 3) - sym(u2, M, 3)) == 0
    n = 2
    assert pair(sym(u1, M - n), sym(u2, n) - sym(u3, n)) == 0
    assert pair(sym(u1, M - n), sym(u2, n)) == 1
    assert pair(CycleRingElement.one(M), sym(u1, n)) == 0


def test_reduce_examples():
    u, w = [(1, 0, 0)], [(0, 1, 1)]
    assert reduce_to_truncated(sym(u, 3)) == TruncatedPoly.monomial(M, 3)
    assert reduce_to_truncated(sym(u, 2) - sym(w, 2)) == TruncatedPoly.monomial(M, 2, 0)
    got = reduce_to_truncated(sym(u, 1, 2) + sym(w, 3))
    assert got == TruncatedPoly.monomial(M, 1, 2) + TruncatedPoly.monomial(M, 3)


def test_cutoff_mismatch():
    with pytest.raises(CutoffMismatch):
        sym([(1, 0)], 1, m=3) * sym([(1, 0)], 1, m=4)
    with pytest.raises(CutoffMismatch):
        pair(CycleRingElement.one(3), CycleRingElement.one(4))


def test_json_roundtrip():
    z = sym([(1, 2, 0)], 2, "3/4") + sym([], 0, -2)
    assert CycleRingElement.from_json(M, z.to_json()) == z


# -- random elements -------------------------------------------------------

@st.composite
def elements(draw, m, r):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        n = draw(st.integers(0, m))
        d = draw(st.integers(0, min(n, r)))
        vecs = [draw(st.lists(st.integers(-2, 2), min_size=r, max_size=r)) for _ in range(d)]
        s = SubspaceSymbol.of(vecs, n, r)
        c = draw(st.fractions(min_value=-5, max_value=5, max_denominator=3))
        terms[s] = terms.get(s, Fraction(0)) + c
    return CycleRingElement(m, terms)


@st.composite
def triples(draw):
    m = draw(st.integers(1, 8))
    r = draw(st.integers(1, 6))
    return m, r, draw(elements(m, r)), draw(elements(m, r)), draw(elements(m, r))


@settings(max_examples=1000, deadline=None)
@given(triples())
def test_ring_laws(case):
    m, r, a, b, c = case
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert CycleRingElement.one(m) * a == a


@settings(max_examples=1000, deadline=None)
@given(triples())
def test_reduce_is_a_ring_map(case):
    m, r, a, b, w = case
    assert reduce_to_truncated(a * b) == reduce_to_truncated(a) * reduce_to_truncated(b)
    assert reduce_to_truncated(a + b) == reduce_to_truncated(a) + reduce_to_truncated(b)
    assert pair(a, b) == degree(a * b) == pair(b, a)
    # pair only sees reduce(a): swap every symbol of a for [0]_n
    shadow = CycleRingElement(m, {SubspaceSymbol(n, ()): x for n, x in enumerate(reduce_to_truncated(a).coeffs)})
    assert pair(a, w) == pair(shadow, w)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8).flatmap(lambda m: st.tuples(st.just(m), st.integers(1, m), elements(m, 4))))
def test_radical_characterization(case):
    m, n, z = case
    z = z.component(n)
    a_n = reduce_to_truncated(z).coeffs[n]
    for u in ([], [(1, 0, 0, 0)], [(1, 2, 0, -1), (0, 0, 1, 1)]):
        if len(u) <= m - n:
            assert pair(z, CycleRingElement.symbol(m, u, m - n)) == a_n


# -- orbit sums ------------------------------------------------------------

PERMS = [np.eye(3, dtype=int)[list(p)] for p in itertools.permutations(range(3))]
S3_GENS = [PERMS[1], PERMS[3]]


def test_orbit_sum_examples():
    e = [(1, 0, 0)]
    assert orbit_sum(e, 1, [], 1) == sym(e, 1, m=1)
    assert orbit_sum(e, 1, [-np.eye(3, dtype=int)], 1) == sym(e, 1, m=1)
    want = sym([(1, 0, 0)], 1, m=1) + sym([(0, 1, 0)], 1, m=1) + sym([(0, 0, 1)], 1, m=1)
    assert orbit_sum(e, 1, S3_GENS, 1) == want
    assert len(subspace_orbit(canonical_subspace([(1, 1, 0)]), S3_GENS)) == 3


@pytest.mark.parametrize("u2", [[(1, 0, 0)], [(1, -1, 0)], [(1, 1, 1)], [(1, 0, 0), (0, 1, 0)]])
def test_orbit_product_rule(u2):
    u1, m = [(1, 0, 0)], 4
    n2 = len(u2)
    lhs = orbit_sum(u1, 1, S3_GENS, m) * orbit_sum(u2, n2, S3_GENS, m)
    rhs = orbit_product_expansion(u1, 1, u2, n2, S3_GENS, m)
    assert lhs == rhs == double_coset_expansion(u1, 1, u2, n2, PERMS, m)[0]


def test_orbit_product_needs_multiplicity():
    u1 = u2 = [(1, 0, 0)]
    lhs = orbit_sum(u1, 1, S3_GENS, 2) * orbit_sum(u2, 1, S3_GENS, 2)
    assert lhs != orbit_product_expansion(u1, 1, u2, 1, S3_GENS, 2, multiplicity=False)
    assert lhs == orbit_product_expansion(u1, 1, u2, 1, S3_GENS, 2)


def test_orbit_product_above_cutoff():
    assert orbit_product_expansion([(1, 0, 0)], 1, [(0, 1, 0)], 1, S3_GENS, 1) == CycleRingElement.zero(1)


def test_group_action_is_ring_map():
    a = sym([(1, 0, 0)], 1) + sym([(1, 1, 0)], 2, 3)
    b = sym([(0, 0, 1)], 2, -1)
    g = PERMS[4]
    assert (a * b).act(g) == a.act(g) * b.act(g)
