from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from kbideals.bases import KINDS, GraphIndex, basis_element, graph_element
from kbideals.catalog import TANGLE_NAMES, load
from kbideals.diagram import LONG, SHORT, SkeinVector, crossingless_tangle, reduce_tangle
from kbideals.errors import InconsistentSystem, UnderDetermined, UnknownName
from kbideals.laurent import ONE, ZERO, LaurentPoly, RationalFunction, delta, phi
from kbideals.pairing import (
    GraphCoeffs,
    hopf_pair,
    lemma_coefficient,
    pair_graph_with_basis,
    pairing_vector,
    solve_graph_coefficients,
    worked_sum,
)

elements = st.tuples(st.sampled_from([SHORT, LONG]), st.integers(0, 3))
coeff = st.integers(-3, 3).map(LaurentPoly.const)
vectors = st.dictionaries(elements, coeff, max_size=3).map(SkeinVector)


def test_basic_pairings():
    s, l = SkeinVector.element(SHORT, 0), SkeinVector.element(LONG, 0)
    # two short arcs close to an unknot; one core through the other arc's torus gives a Hopf link
    assert hopf_pair(s, s) == delta()
    assert hopf_pair(SkeinVector.element(SHORT, 1), s) == delta() ** 2
    # the clasp of two long arcs is an unknot with a framing change
    assert hopf_pair(l, l) == LaurentPoly.monomial(-6) * delta()
    assert hopf_pair(l, SkeinVector.element(SHORT, 1)) == phi(1) * delta()


@settings(max_examples=30, deadline=None)
@given(vectors, vectors, vectors, st.integers(-2, 2))
def test_pairing_is_bilinear(u, v, w, c):
    assert hopf_pair(u + v.scale(c), w) == hopf_pair(u, w) + hopf_pair(v, w) * c


@settings(max_examples=30, deadline=None)
@given(elements, elements)
def test_pairing_is_symmetric(a, b):
    u, v = SkeinVector.element(*a), SkeinVector.element(*b)
    assert hopf_pair(u, v) == hopf_pair(v, u)


@pytest.mark.parametrize("m", range(5))
def test_cores_against_bare_arc_are_unlinked(m):
    # closing with a crossingless short arc leaves m unlinked cores plus the arc circle
    bare = SkeinVector.element(SHORT, 0)
    assert hopf_pair(SkeinVector.element(SHORT, m), bare) == delta() ** (m + 1)


def test_lemma_coefficient():
    assert lemma_coefficient(3, 0) == ONE
    assert lemma_coefficient(2, 3) == ZERO
    assert lemma_coefficient(2, 2) == (phi(2) ** 2 - phi(0) ** 2) * (phi(2) ** 2 - phi(1) ** 2)


@pytest.mark.parametrize("g", [(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2), (3, 4)])
@pytest.mark.parametrize("n", range(4))
def test_pairing_formula_matches_diagrams(g, n):
    """The closed pairing formula agrees with gluing the expanded graph element."""
    v = graph_element(g)
    for kind in KINDS:
        lhs = RationalFunction._coerce(hopf_pair(v, basis_element(kind, n)))
        assert lhs == RationalFunction._coerce(pair_graph_with_basis(g, kind, n)), kind


def test_pairing_vanishes_above_colour():
    for i in range(5):
        for e in (i - 1, i + 1):
            if e < 0:
                continue
            for n in range(i + 1, 7):
                for kind in KINDS:
                    assert pair_graph_with_basis((i, e), kind, n) == ZERO


def test_pairing_vector_keys():
    pv = pairing_vector(SkeinVector.element(SHORT, 0), 1)
    assert set(pv) == {(k, n) for k in KINDS for n in range(2)}


@pytest.mark.parametrize("g", [(0, 1), (1, 2), (2, 1), (2, 3), (3, 2), (4, 3)])
def test_solver_recovers_graph_elements(g):
    assert dict(solve_graph_coefficients(graph_element(g))) == {GraphIndex(*g): RationalFunction(ONE)}


@settings(max_examples=15, deadline=None)
@given(st.dictionaries(st.sampled_from([(0, 1), (1, 0), (1, 2), (2, 1), (2, 3)]), coeff.filter(bool), max_size=4))
def test_solver_inverts_linear_combinations(cs):
    v = SkeinVector()
    for g, c in cs.items():
        v = v + graph_element(g).scale(c)
    got = solve_graph_coefficients(v, max_i=3)
    assert dict(got) == dict(GraphCoeffs(cs))


def test_solver_detects_insufficient_colour_bound():
    with pytest.raises(UnderDetermined):
        solve_graph_coefficients(graph_element((3, 2)), max_i=2)


def test_solver_works_on_diagrams():
    t = crossingless_tangle(LONG, 1)
    c = solve_graph_coefficients(t)
    back = SkeinVector()
    for g, x in c.items():
        back = back + graph_element(g).scale(x)
    assert back == reduce_tangle(t)


def test_graph_coeffs_mapping():
    c = GraphCoeffs({(2, 1): 0, (0, 1): LaurentPoly.parse("A")})
    assert len(c) == 1 and (0, 1) in c and c[(2, 1)] == ZERO
    assert c.support() == [(0, 1)]
    assert str(c) == "c(0,1) = A^1"


@pytest.mark.parametrize("name", TANGLE_NAMES)
def test_catalog_expansion_reconstructs_tangle(name):
    t = load(name).diagram
    coeffs = solve_graph_coefficients(t)
    back = SkeinVector()
    for g, x in coeffs.items():
        back = back + graph_element(g).scale(x)
    assert back == reduce_tangle(t)


def test_worked_sum_lookup():
    assert worked_sum("tangle_D", (1, 2)) == ZERO  # (1, 1, 1) is not admissible
    with pytest.raises(UnknownName):
        worked_sum("Z", (0, 1))


@pytest.mark.parametrize("g", [(0, 1), (2, 1), (2, 3)])
def test_worked_sums_of_d_and_h_share_a_normalizer(g):
    d = RationalFunction._coerce(worked_sum("D", g)) / RationalFunction._coerce(load("tangle_D").coefficients[g])
    h = RationalFunction._coerce(worked_sum("H", g)) / RationalFunction._coerce(load("tangle_H").coefficients[g])
    assert d == h


def test_formula_examples():
    from kbideals.recoupling import theta

    assert pair_graph_with_basis((0, 1), "x_even", 0) == delta()
    assert pair_graph_with_basis((2, 1), "x_even", 3) == ZERO
    assert RationalFunction(pair_graph_with_basis((2, 3), "x_odd", 0)) == theta(1, 2, 3) * phi(2)
    assert lemma_coefficient(2, 1) == LaurentPoly.parse("A^12 - A^4 - A^-4 + A^-12")
    assert lemma_coefficient(1, 2) == ZERO


def test_worked_sums_vanish_off_support():
    assert worked_sum("A", (1, 0)) == ZERO
    assert worked_sum("D", (4, 3)) == ZERO
    assert worked_sum("H", (3, 2)) == ZERO
