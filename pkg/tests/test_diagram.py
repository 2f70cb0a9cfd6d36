from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from helpers import braid_closure, random_annular_word, random_tangle
from kbideals.diagram import (
    LONG,
    SHORT,
    ClosureSpec,
    LinkDiagram,
    SkeinVector,
    TangleDiagram,
    build_annular_tangle,
    close,
    closure_complement,
    crossingless_tangle,
    cut_layout,
    kauffman_bracket,
    parity_split,
    parse_diagram,
    reduce_tangle,
    state_sum_naive,
)
from kbideals.errors import BoundExceeded, DiagramParseError, MalformedDiagram
from kbideals.laurent import ONE, LaurentPoly, delta
from kbideals.pairing import hopf_pair

A3 = LaurentPoly.monomial(3, -1)  # -A^3, the positive-kink factor


def braid_words(strands=3, max_len=7):
    gens = st.integers(1, strands - 1).flatmap(lambda k: st.sampled_from([k, -k]))
    return st.lists(gens, max_size=max_len)


# --- text format ---------------------------------------------------------------


def test_parse_link_and_round_trip():
    text = "# trefoil\nX 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n"
    d = parse_diagram(text)
    assert isinstance(d, LinkDiagram) and d.num_crossings == 3
    assert parse_diagram(d.to_text()) == d


def test_parse_tangle_and_round_trip():
    t = random_tangle(3)
    again = parse_diagram(t.to_text())
    assert isinstance(again, TangleDiagram) and again == t


def test_free_circles_in_link_text():
    d = parse_diagram("M 7 0\nM 8 0\n")
    assert d.free_loops == 2
    assert kauffman_bracket(d) == delta() ** 2


@pytest.mark.parametrize(
    "text, line",
    [
        ("X 1 2 3 4\nQ 5\n", 2),
        ("X 1 2 3\n", 1),
        ("\n\nX 1 2 a 4\n", 3),
        ("P1 1\nP1 2\n", 2),
        ("M 1 -1\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(DiagramParseError) as info:
        parse_diagram(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_malformed_diagrams_rejected():
    with pytest.raises(MalformedDiagram):
        parse_diagram("X 1 2 3 4\n")  # edges occur once
    with pytest.raises(MalformedDiagram):
        parse_diagram("X 1 2 1 2\n")  # a virtual crossing: the rotation system has genus 1
    with pytest.raises(MalformedDiagram):
        parse_diagram("P1 1\nP2 1\nM 1 1\nM 1 1\n")  # duplicate M line


# --- bracket evaluation --------------------------------------------------------


def test_trefoil_and_hopf_values():
    # standard values (unknot = delta): right/left-handed trefoil and Hopf link
    left = braid_closure(2, [-1, -1, -1])
    assert kauffman_bracket(left) == LaurentPoly.parse("A^-7 + A^-3 + A - A^9")
    hopf = braid_closure(2, [1, 1])
    assert kauffman_bracket(hopf) == LaurentPoly.parse("A^-6 + A^-2 + A^2 + A^6")


@settings(max_examples=40, deadline=None)
@given(braid_words(3, 8))
def test_frontier_contraction_matches_state_sum(word):
    d = braid_closure(3, word)
    assert kauffman_bracket(d) == state_sum_naive(d)


@settings(max_examples=25, deadline=None)
@given(braid_words(4, 6), st.integers(1, 3), st.integers(0, 6))
def test_reidemeister_two_invariance(word, k, pos):
    pos = min(pos, len(word))
    longer = word[:pos] + [k, -k] + word[pos:]
    assert kauffman_bracket(braid_closure(4, longer)) == kauffman_bracket(braid_closure(4, word))


@settings(max_examples=25, deadline=None)
@given(braid_words(4, 6), st.integers(0, 6), st.sampled_from([1, -1]))
def test_reidemeister_three_invariance(word, pos, s):
    pos = min(pos, len(word))
    lhs = word[:pos] + [s * 1, s * 2, s * 1] + word[pos:]
    rhs = word[:pos] + [s * 2, s * 1, s * 2] + word[pos:]
    assert kauffman_bracket(braid_closure(4, lhs)) == kauffman_bracket(braid_closure(4, rhs))


@settings(max_examples=25, deadline=None)
@given(braid_words(3, 6), st.sampled_from([1, -1]))
def test_reidemeister_one_factor(word, s):
    base = kauffman_bracket(braid_closure(3, word))
    stabilized = kauffman_bracket(braid_closure(4, word + [3 * s]))
    kink = LaurentPoly.monomial(3 * s, -1)
    # one of the two kink senses gives -A^3, the other -A^-3
    assert stabilized in (base * kink, base * kink.bar())
    opposite = kauffman_bracket(braid_closure(4, word + [-3 * s]))
    assert {stabilized, opposite} == {base * kink, base * kink.bar()}


@settings(max_examples=25, deadline=None)
@given(braid_words(3, 7))
def test_mirror_inverts_variable(word):
    d = braid_closure(3, word)
    assert kauffman_bracket(d.mirror()) == kauffman_bracket(d).bar()


@settings(max_examples=20, deadline=None)
@given(braid_words(3, 5), braid_words(2, 4))
def test_disjoint_union_multiplies(w1, w2):
    d1, d2 = braid_closure(3, w1), braid_closure(2, w2)
    assert kauffman_bracket(d1.disjoint_union(d2)) == kauffman_bracket(d1) * kauffman_bracket(d2)


def test_crossing_bound(monkeypatch):
    d = braid_closure(2, [1] * 6)
    with pytest.raises(BoundExceeded):
        kauffman_bracket(d, max_crossings=5)
    monkeypatch.setenv("KBIDEALS_MAX_CROSSINGS", "4")
    with pytest.raises(BoundExceeded):
        kauffman_bracket(d)
    assert kauffman_bracket(d, max_crossings=6) == state_sum_naive(d)


# --- tangles and the crossingless basis ----------------------------------------


@pytest.mark.parametrize("arc", [SHORT, LONG])
@pytest.mark.parametrize("cores", range(4))
def test_crossingless_tangles_reduce_to_themselves(arc, cores):
    t = crossingless_tangle(arc, cores)
    assert reduce_tangle(t) == SkeinVector.element(arc, cores)
    assert t.parity() == SkeinVector.parity_of((arc, cores))


def test_contractible_free_circle_gives_delta():
    t = parse_diagram("P1 1\nP2 1\nM 5 0\nM 6 2\n")
    assert reduce_tangle(t) == SkeinVector.element(SHORT, 0).scale(delta() ** 2)


def test_annular_kink_factor():
    # one curl on the arc, no winding: a framing change of the short arc
    t = build_annular_tangle(0, [("P1",), ("cup", 1), ("x", 0, 1), ("cap", 1), ("P2",)])
    v = reduce_tangle(t)
    assert set(v) == {(SHORT, 0)}
    assert v[(SHORT, 0)] in (LaurentPoly.monomial(3, -1), LaurentPoly.monomial(-3, -1))


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6))
def test_reduction_respects_membrane_parity(seed):
    t = random_tangle(seed)
    v = reduce_tangle(t)
    assert all(SkeinVector.parity_of(k) == t.parity() for k in v)


coeff = st.integers(-3, 3).map(LaurentPoly.const)
keys = st.tuples(st.sampled_from([SHORT, LONG]), st.integers(0, 4))
vectors = st.dictionaries(keys, coeff, max_size=5).map(SkeinVector)


@given(vectors, vectors, st.integers(-3, 3))
def test_parity_split_is_linear(u, v, c):
    eu, ou = parity_split(u)
    ev, ov = parity_split(v)
    e, o = parity_split(u + v.scale(c))
    assert e == eu + ev.scale(c) and o == ou + ov.scale(c)
    assert eu + ou == u
    assert all(SkeinVector.parity_of(k) == 0 for k in eu)
    assert all(SkeinVector.parity_of(k) == 1 for k in ou)


# --- cut layout and gluing -----------------------------------------------------


def test_cut_layout_of_crossingless_tangle():
    t = crossingless_tangle(LONG, 2)
    layout = cut_layout(t)
    assert [s.edge for s in layout] == [10, 11, 1]
    assert layout[0].ccw_end is None and layout[-1].ccw_end is not None


def test_cut_layout_rejects_multiple_crossings_of_one_edge():
    t = TangleDiagram((), 1, 1, ((1, 3),))
    with pytest.raises(MalformedDiagram):
        cut_layout(t)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_gluing_law(seed1, seed2):
    """The bracket of a closure equals the pairing of the two reductions."""
    t, c = random_tangle(seed1), random_tangle(seed2, max_len=5)
    try:
        link = close(t, c)
    except MalformedDiagram:
        assume(False)
    assert kauffman_bracket(link, max_crossings=200) == hopf_pair(reduce_tangle(t), reduce_tangle(c))


@pytest.mark.parametrize("w", range(4))
@pytest.mark.parametrize("tau", range(-2, 3))
def test_closure_complements(w, tau):
    spec = closure_complement(w, tau)
    assert spec.parity == ("odd" if w % 2 else "even")
    assert spec.complement.parity() == w % 2
    link = close(crossingless_tangle(SHORT, 0), spec)
    assert kauffman_bracket(link, max_crossings=200) == hopf_pair(
        SkeinVector.element(SHORT, 0), reduce_tangle(spec.complement)
    )


def test_closure_spec_checks_parity():
    with pytest.raises(MalformedDiagram):
        ClosureSpec(crossingless_tangle(SHORT, 1), 0)


def test_trivial_closure_is_unknot():
    link = close(crossingless_tangle(SHORT, 0), closure_complement(0, 0))
    assert kauffman_bracket(link) == delta()


def test_build_annular_tangle_validates_word():
    with pytest.raises((MalformedDiagram, ValueError)):
        build_annular_tangle(1, [("P1",), ("x", 0, 1)])  # P2 missing


def test_small_brackets_and_splits():
    assert kauffman_bracket(LinkDiagram((), 1)) == delta()
    assert kauffman_bracket(LinkDiagram((), 2)) == delta() ** 2
    hopf = braid_closure(2, [1, 1])
    assert kauffman_bracket(hopf) == delta() * LaurentPoly.parse("-A^4 - A^-4")
    v = SkeinVector({(LONG, 0): 1, (SHORT, 2): delta()})
    even, odd = parity_split(v)
    assert even == SkeinVector({(SHORT, 2): delta()}) and odd == SkeinVector({(LONG, 0): 1})
    assert parity_split(even) == (even, SkeinVector())
