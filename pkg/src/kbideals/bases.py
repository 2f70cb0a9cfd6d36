"""Relative bases of the annular skein module with two boundary points.

The even basis is ``x_even(n) = short * S_n(z)`` and ``y_even(n) = long * z * S_n(z)``;
the odd basis is ``x_odd(n) = short * z * S_n(z)`` and ``y_odd(n) = long * S_n(z)``,
where ``z`` is a core circle and ``S_n(z) = prod_{k<n} (z^2 - phi_k^2)``.  With
these placements every summand of an even (odd) kind has even (odd) parity.

``graph_element`` expands the trivalent graph elements ``g_{i,eps}`` into the
crossingless basis by explicit Jones-Wenzl expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .diagram import LONG, SHORT, SkeinVector
from .errors import Inadmissible
from .laurent import ONE, ZERO, LaurentPoly, RationalFunction, phi
from .recoupling import _jw_common

__all__ = [
    "KINDS",
    "GraphIndex",
    "PolyInZ2",
    "q_poly",
    "s_poly",
    "basis_element",
    "change_of_basis_matrix",
    "graph_element",
    "matrix_determinant",
]

KINDS = ("x_even", "y_even", "x_odd", "y_odd")


@dataclass(frozen=True, order=True)
class GraphIndex:
    """Label (i, eps) of a graph basis element; eps must be i + 1 or i - 1."""

    i: int
    eps: int

    def __post_init__(self):
        if self.i < 0 or self.eps < 0 or abs(self.i - self.eps) != 1:
            raise Inadmissible(f"graph index ({self.i}, {self.eps}) needs eps = i +- 1 and both non-negative")

    @classmethod
    def coerce(cls, g) -> "GraphIndex":
        return g if isinstance(g, GraphIndex) else cls(*g)

    def parity(self) -> str:
        # the i-coloured edge crosses the meridian disk i times
        return "odd" if self.i % 2 else "even"

    def __str__(self):
        return f"({self.i},{self.eps})"


def _polymul(p: Sequence[LaurentPoly], q: Sequence[LaurentPoly]) -> List[LaurentPoly]:
    out = [ZERO] * (len(p) + len(q) - 1)
    for a, x in enumerate(p):
        if not x:
            continue
        for b, y in enumerate(q):
            out[a + b] = out[a + b] + x * y
    return out


@lru_cache(maxsize=None)
def _q_cached(n: int) -> Tuple[LaurentPoly, ...]:
    poly: List[LaurentPoly] = [ONE]
    for k in range(n):
        poly = _polymul(poly, [-phi(k), ONE])
    return tuple(poly)


def q_poly(n: int) -> List[LaurentPoly]:
    """Coefficients (ascending in z) of prod_{k<n} (z - phi_k)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return list(_q_cached(n))


@dataclass(frozen=True)
class PolyInZ2:
    """A polynomial in z^2: ``coeffs[k]`` multiplies z^(2k)."""

    coeffs: Tuple[LaurentPoly, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> LaurentPoly:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __len__(self) -> int:
        return len(self.coeffs)

    def leading(self) -> LaurentPoly:
        return self.coeffs[-1]

    def in_z(self) -> List[LaurentPoly]:
        """Dense coefficient list in z (odd powers zero)."""
        out = [ZERO] * (2 * len(self.coeffs) - 1)
        for k, c in enumerate(self.coeffs):
            out[2 * k] = c
        return out


@lru_cache(maxsize=None)
def s_poly(n: int) -> PolyInZ2:
    """prod_{k<n} (z^2 - phi_k^2) as a polynomial in z^2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    poly: List[LaurentPoly] = [ONE]
    for k in range(n):
        poly = _polymul(poly, [-(phi(k) * phi(k)), ONE])
    return PolyInZ2(tuple(poly))


def basis_element(kind: str, n: int) -> SkeinVector:
    """Expand x/y even/odd basis element number n into (arc, cores) terms."""
    if kind not in KINDS:
        raise ValueError(f"unknown basis kind {kind!r}; expected one of {KINDS}")
    if n < 0:
        raise ValueError("n must be non-negative")
    arc = SHORT if kind[0] == "x" else LONG
    extra = 1 if kind in ("x_odd", "y_even") else 0
    s = s_poly(n)
    return SkeinVector({(arc, 2 * k + extra): c for k, c in enumerate(s.coeffs)})


def change_of_basis_matrix(size: int) -> List[List[LaurentPoly]]:
    """Row r holds S_r expressed over 1, z^2, z^4, ... (lower unitriangular)."""
    if size < 1:
        raise ValueError("size must be at least 1")
    return [[s_poly(r)[c] for c in range(size)] for r in range(size)]


def matrix_determinant(m: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Determinant by cofactor-free fraction elimination (small matrices)."""
    size = len(m)
    rows = [[RationalFunction._coerce(x) for x in row] for row in m]
    det = RationalFunction(ONE)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col]), None)
        if piv is None:
            return ZERO
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        p = rows[col][col]
        det = det * p
        for r in range(col + 1, size):
            f = rows[r][col] / p
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return det.to_laurent()


# ---------------------------------------------------------------------------------
# Graph elements
# ---------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def graph_element(g) -> SkeinVector:
    """Crossingless expansion of the graph element g_{i,eps}.

    The element is a cycle around the core made of an i-coloured edge (which
    crosses the meridian disk) and an eps-coloured edge (which does not),
    with a colour-1 leg from each trivalent vertex to P1 and P2.
    Coefficients are rational functions in general.
    """
    g = GraphIndex.coerce(g)
    i, e = g.i, g.eps
    jw_i, den_i = _jw_common(i) if i else ([(None, ONE)], ONE)
    jw_e, den_e = _jw_common(e) if e else ([(None, ONE)], ONE)
    # static wiring, left/right ports of boxes "I" and "E" indexed by radius
    links: List[Tuple[object, object, int]] = []  # (port, port, cut crossings)
    if e == i + 1:
        for r in range(i):
            links.append((("I", "R", r), ("E", "L", r), 0))
            links.append((("E", "R", r), ("I", "L", r), 1))
        links.append(("P1", ("E", "L", i), 0))
        links.append((("E", "R", i), "P2", 0))
    else:
        for r in range(e):
            links.append((("I", "R", r), ("E", "L", r), 0))
            links.append((("E", "R", r), ("I", "L", r), 1))
        links.append((("I", "R", e), "P1", 0))
        links.append(("P2", ("I", "L", e), 1))
    total: Dict[Tuple[str, int], LaurentPoly] = {}
    for di, ci in jw_i:
        for de, ce in jw_e:
            edges: List[Tuple[object, object, int]] = list(links)
            for name, d in (("I", di), ("E", de)):
                if d is not None:
                    edges += [(_box_port(name, a, d.n), _box_port(name, b, d.n), 0) for a, b in d.pairs]
            arc, cores, loops = _trace(edges)
            key = (arc, cores)
            coeff = ci * ce * delta_power(loops)
            total[key] = total[key] + coeff if key in total else coeff
    den = den_i * den_e
    return SkeinVector({k: RationalFunction(v, den) for k, v in total.items()})


def _box_port(name: str, p: int, n: int):
    return (name, "L", p) if p < n else (name, "R", p - n)


def delta_power(k: int) -> LaurentPoly:
    from .laurent import delta

    return delta() ** k


def _trace(edges: Sequence[Tuple[object, object, int]]) -> Tuple[str, int, int]:
    """Follow the P1 path and all closed loops; classify each by cut parity.

    Every port has degree two except P1 and P2, which have degree one.
    """
    inc: Dict[object, List[int]] = {}
    for k, (p, q, _) in enumerate(edges):
        inc.setdefault(p, []).append(k)
        inc.setdefault(q, []).append(k)
    used = [False] * len(edges)

    def walk(node) -> Tuple[object, int]:
        par = 0
        while True:
            k = next((k for k in inc[node] if not used[k]), None)
            if k is None:
                return node, par
            used[k] = True
            p, q, w = edges[k]
            par += w
            node = q if p == node else p

    end, par = walk("P1")
    if end != "P2":
        raise AssertionError("graph expansion did not join P1 to P2")
    arc = LONG if par % 2 else SHORT
    cores = loops = 0
    for k in range(len(edges)):
        if used[k]:
            continue
        _, par = walk(edges[k][0])
        if par % 2:
            cores += 1
        else:
            loops += 1
    return arc, cores, loops
