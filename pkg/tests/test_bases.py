from __future__ import annotations

import pytest
import sympy
from hypothesis import given, strategies as st

from helpers import to_sympy
from kbideals.bases import (
    KINDS,
    GraphIndex,
    basis_element,
    change_of_basis_matrix,
    graph_element,
    matrix_determinant,
    q_poly,
    s_poly,
)
from kbideals.diagram import LONG, SHORT, SkeinVector
from kbideals.errors import Inadmissible
from kbideals.laurent import ONE, ZERO, LaurentPoly, RationalFunction, delta, phi


def _eval(coeffs, x):
    total = ZERO
    for k, c in enumerate(coeffs):
        total = total + c * x**k
    return total


@pytest.mark.parametrize("n", range(6))
def test_s_poly_vanishes_on_squares_of_phi(n):
    s = s_poly(n)
    assert s.degree == n and s.leading() == ONE
    for k in range(n):
        assert _eval(s.coeffs, phi(k) * phi(k)) == ZERO
    assert _eval(s.coeffs, phi(n) * phi(n)) != ZERO


@pytest.mark.parametrize("n", range(6))
def test_q_poly_roots_and_relation_to_s(n):
    q = q_poly(n)
    for k in range(n):
        assert _eval(q, phi(k)) == ZERO
    # S_n(z) = (-1)^n Q_n(z) Q_n(-z)
    z = sympy.Symbol("z")
    qz = sum(to_sympy(c) * z**k for k, c in enumerate(q))
    sz = sum(to_sympy(c) * z ** (2 * k) for k, c in enumerate(s_poly(n).coeffs))
    assert sympy.expand((-1) ** n * qz * qz.subs(z, -z) - sz) == 0


@pytest.mark.parametrize("size", range(1, 6))
def test_change_of_basis_is_unitriangular(size):
    m = change_of_basis_matrix(size)
    for r in range(size):
        assert m[r][r] == ONE
        assert all(m[r][c] == ZERO for c in range(r + 1, size))
    assert matrix_determinant(m) == ONE
    oracle = sympy.Matrix([[to_sympy(x) for x in row] for row in m]).det()
    assert sympy.simplify(oracle - 1) == 0


def test_matrix_determinant_against_sympy():
    m = [[LaurentPoly.parse("A + 1"), LaurentPoly.parse("A^-1")], [LaurentPoly.parse("2"), LaurentPoly.parse("A^3 - A")]]
    oracle = sympy.Matrix([[to_sympy(x) for x in row] for row in m]).det()
    assert sympy.simplify(to_sympy(matrix_determinant(m)) - oracle) == 0


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", range(5))
def test_basis_elements_have_homogeneous_parity(kind, n):
    v = basis_element(kind, n)
    want = 0 if kind.endswith("even") else 1
    assert v and all(SkeinVector.parity_of(k) == want for k in v)
    assert {arc for arc, _ in v} == {SHORT if kind[0] == "x" else LONG}


def test_basis_element_argument_checks():
    with pytest.raises(ValueError):
        basis_element("z_even", 0)
    with pytest.raises(ValueError):
        basis_element("x_even", -1)


@given(st.integers(-2, 6), st.integers(-2, 6))
def test_graph_index_validation(i, e):
    if i >= 0 and e >= 0 and abs(i - e) == 1:
        g = GraphIndex(i, e)
        assert GraphIndex.coerce((i, e)) == g
        assert g.parity() == ("odd" if i % 2 else "even")
    else:
        with pytest.raises(Inadmissible):
            GraphIndex(i, e)


def test_lowest_graph_elements_by_hand():
    # colour 0 leaves the bare arc; colour 1 is one parallel core strand
    assert graph_element((0, 1)) == SkeinVector.element(SHORT, 0)
    assert graph_element((1, 0)) == SkeinVector.element(LONG, 0)
    # the second Jones-Wenzl projector is id - e/delta
    inv = RationalFunction(ONE, delta())
    assert graph_element((1, 2)) == SkeinVector.element(SHORT, 1) - SkeinVector.element(LONG, 0).scale(inv)
    assert graph_element((2, 1)) == SkeinVector.element(LONG, 1) - SkeinVector.element(SHORT, 0).scale(inv)


@pytest.mark.parametrize("g", [(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2), (3, 4), (4, 3)])
def test_graph_element_parity_and_leading_term(g):
    v = graph_element(g)
    gi = GraphIndex(*g)
    assert all(SkeinVector.parity_of(k) == gi.i % 2 for k in v)
    # weight = cores + [arc is long]; the plain diagram is a top-weight term
    weight = {k: k[1] + (k[0] == LONG) for k in v}
    top = max(weight.values())
    assert top == gi.i
    leading = (SHORT, gi.i) if gi.eps == gi.i + 1 else (LONG, gi.i - 1)
    assert RationalFunction._coerce(v[leading]) == RationalFunction(ONE)


def test_small_polynomials():
    assert q_poly(0) == [ONE]
    assert q_poly(1) == [LaurentPoly.parse("A^2 + A^-2"), ONE]
    assert q_poly(2) == [phi(0) * phi(1), -(phi(0) + phi(1)), ONE]
    assert s_poly(0).coeffs == (ONE,)
    assert s_poly(1).coeffs == (LaurentPoly.parse("-A^4 - 2 - A^-4"), ONE)
    assert change_of_basis_matrix(2) == [[ONE, ZERO], [LaurentPoly.parse("-A^4 - 2 - A^-4"), ONE]]


def test_small_basis_elements():
    assert basis_element("x_even", 0) == SkeinVector.element(SHORT, 0)
    assert basis_element("x_odd", 0) == SkeinVector.element(SHORT, 1)
    assert basis_element("y_even", 0) == SkeinVector.element(LONG, 1)
    assert basis_element("y_odd", 0) == SkeinVector.element(LONG, 0)
    assert basis_element("x_even", 1) == SkeinVector({(SHORT, 2): 1, (SHORT, 0): LaurentPoly.parse("-A^4 - 2 - A^-4")})


def test_change_of_basis_up_to_eight():
    m = change_of_basis_matrix(8)
    assert all(m[r][r] == ONE and all(m[r][c] == ZERO for c in range(r + 1, 8)) for r in range(8))
