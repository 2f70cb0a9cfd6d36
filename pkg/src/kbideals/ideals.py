"""Ideals of Z[A, A^-1], the specialisation A -> omega, and link determinants.

A Laurent ideal is handled through the presentation
``Z[A, A^-1] = Z[x, y] / (xy - 1)`` with ``x = A``: membership is decided by a
strong Groebner basis over the integers (degree-lexicographic order, x > y),
computed with S- and G-polynomials.

``omega`` sends A to a primitive eighth root of unity omega (omega^4 = -1)
and lands in Z[omega], represented by integer coordinates over
1, omega, omega^2, omega^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import NotUnitMultipleOfInteger, UnderDetermined
from .laurent import ONE, ZERO, LaurentPoly, reduce_by_delta

__all__ = [
    "LaurentIdeal",
    "CyclotomicInt",
    "groebner_basis",
    "is_trivial",
    "membership",
    "ideal_equal",
    "omega",
    "omega_contract",
    "link_determinant",
    "even_ideal",
    "odd_ideal",
    "full_ideal",
    "closure_generators",
]

Mono = Tuple[int, int]
Poly = Dict[Mono, int]  # (deg_x, deg_y) -> coefficient


# ---------------------------------------------------------------------------------
# Polynomials in Z[x, y]
# ---------------------------------------------------------------------------------


def _key(m: Mono) -> Tuple[int, int]:
    return (m[0] + m[1], m[0])


def _lead(f: Poly) -> Mono:
    return max(f, key=_key)


def _add_scaled(f: Poly, g: Poly, c: int, shift: Mono) -> Poly:
    """f + c * x^a y^b * g"""
    out = dict(f)
    a, b = shift
    for (i, j), v in g.items():
        m = (i + a, j + b)
        w = out.get(m, 0) + c * v
        if w:
            out[m] = w
        else:
            out.pop(m, None)
    return out


def _divides(m: Mono, n: Mono) -> bool:
    return m[0] <= n[0] and m[1] <= n[1]


def _reduce(f: Poly, basis: Sequence[Poly], full: bool = True) -> Poly:
    """Euclidean reduction of f by the basis.

    A term c*m with LM(g) | m is replaced by (c mod LC(g))*m with the
    remainder in the symmetric range.  With ``full=False`` only leading terms
    are reduced.  Ideal members reduce to zero once the basis is a strong
    Groebner basis.
    """
    f = dict(f)
    rest: Poly = {}
    while f:
        m = _lead(f)
        c = f[m]
        for g in basis:
            lm = _lead(g)
            if not _divides(lm, m):
                continue
            q = _sym_quotient(c, g[lm])
            if q:
                f = _add_scaled(f, g, -q, (m[0] - lm[0], m[1] - lm[1]))
                break
        else:
            if not full:
                rest.update(f)
                return rest
            rest[m] = c
            del f[m]
    return rest


def _sym_quotient(c: int, d: int) -> int:
    """q such that r = c - q*d satisfies -|d|/2 < r <= |d|/2."""
    q, r = divmod(c, d)  # r has the sign of d
    if 2 * abs(r) > abs(d) or (2 * abs(r) == abs(d) and r * d < 0):
        q += 1
    return q


def _normalize(f: Poly) -> Poly:
    return {m: -c for m, c in f.items()} if f[_lead(f)] < 0 else f


def _ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _lcm_mono(m: Mono, n: Mono) -> Mono:
    return (max(m[0], n[0]), max(m[1], n[1]))


def groebner_basis(gens: Iterable[Poly]) -> List[Poly]:
    """Reduced strong Groebner basis over Z (deglex, x > y).

    Buchberger's algorithm for Euclidean coefficient rings: for every pair
    both the S-polynomial (cancelling the leading terms) and the
    G-polynomial (leading coefficient gcd) are reduced; pairs are processed
    by increasing degree of the lcm of their leading monomials.
    """
    basis: List[Optional[Poly]] = []
    pairs: List[Tuple[Tuple[int, int], int, int]] = []
    stash: List[Poly] = []

    def live() -> List[Poly]:
        return [g for g in basis if g is not None]

    def add(h: Poly) -> None:
        h = _normalize(h)
        lm, lc = _lead(h), h[_lead(h)]
        basis.append(h)
        n = len(basis) - 1
        for k in range(n):
            g = basis[k]
            if g is None:
                continue
            if _divides(lm, _lead(g)) and g[_lead(g)] % lc == 0:
                # g's leading term is now strongly reducible: re-reduce it later
                basis[k] = None
                stash.append(g)
            else:
                pairs.append((_key(_lcm_mono(_lead(g), lm)), k, n))

    for g in gens:
        g = _reduce(g, live())
        if g:
            add(g)
    while pairs or stash:
        if stash:
            h = _reduce(stash.pop(), live())
            if h:
                add(h)
            continue
        pairs.sort(reverse=True)
        _, i, j = pairs.pop()
        f, g = basis[i], basis[j]
        if f is None or g is None:
            continue
        mf, mg = _lead(f), _lead(g)
        a, b = f[mf], g[mg]
        lcm = _lcm_mono(mf, mg)
        sf = (lcm[0] - mf[0], lcm[1] - mf[1])
        sg = (lcm[0] - mg[0], lcm[1] - mg[1])
        d, u, v = _ext_gcd(a, b)
        cands = []
        l = a * b // d
        cands.append(_add_scaled(_add_scaled({}, f, l // a, sf), g, -(l // b), sg))
        if d != abs(a) and d != abs(b):
            cands.append(_add_scaled(_add_scaled({}, f, u, sf), g, v, sg))
        for h in cands:
            h = _reduce(h, live())
            if h:
                add(h)
    return _minimalize(live())


def _minimalize(basis: List[Poly]) -> List[Poly]:
    basis = [dict(g) for g in basis]
    changed = True
    while changed:
        changed = False
        for k, g in enumerate(basis):
            lm = _lead(g)
            lc = g[lm]
            others = basis[:k] + basis[k + 1 :]
            if any(_divides(_lead(h), lm) and lc % h[_lead(h)] == 0 for h in others):
                del basis[k]
                changed = True
                break
    out = []
    for k, g in enumerate(basis):
        lm = _lead(g)
        others = basis[:k] + basis[k + 1 :]
        tail = _reduce({m: c for m, c in g.items() if m != lm}, others)
        tail[lm] = g[lm]
        out.append(_normalize(tail))
    out.sort(key=lambda p: (_key(_lead(p)), p[_lead(p)]))
    return out


def _from_laurent(p: LaurentPoly) -> Poly:
    if not p:
        return {}
    lo = p.min_exp()
    return {(e - lo, 0): c for e, c in p.items()}


def _to_laurent(f: Poly) -> LaurentPoly:
    out: Dict[int, int] = {}
    for (i, j), c in f.items():
        out[i - j] = out.get(i - j, 0) + c
    return LaurentPoly(out)


def _normalize_laurent(p: LaurentPoly) -> LaurentPoly:
    """Unit multiple whose lowest term is a positive constant."""
    lo = p.min_exp()
    q = p.shift(-lo)
    return -q if q.coeff(0) < 0 else q


_XY_MINUS_1: Poly = {(1, 1): 1, (0, 0): -1}


# ---------------------------------------------------------------------------------
# Laurent ideals
# ---------------------------------------------------------------------------------


class LaurentIdeal:
    """An ideal of Z[A, A^-1] given by generators."""

    def __init__(self, generators: Iterable[Union[LaurentPoly, int, str]]):
        gens = []
        for g in generators:
            if isinstance(g, int):
                g = LaurentPoly.const(g)
            elif isinstance(g, str):
                g = LaurentPoly.parse(g)
            if g:
                gens.append(_normalize_laurent(g))
        self.generators: Tuple[LaurentPoly, ...] = tuple(gens)

    @cached_property
    def groebner(self) -> List[Poly]:
        return groebner_basis([_XY_MINUS_1] + [_from_laurent(g) for g in self.generators])

    def contains(self, f: Union[LaurentPoly, int]) -> bool:
        if isinstance(f, int):
            f = LaurentPoly.const(f)
        if not f:
            return True
        return not _reduce(_from_laurent(f), self.groebner, full=False)

    __contains__ = contains

    def is_trivial(self) -> bool:
        return self.contains(ONE)

    def canonical_generators(self) -> List[LaurentPoly]:
        seen = []
        for g in self.groebner:
            p = _to_laurent(g)
            if not p:
                continue
            p = _normalize_laurent(p)
            if p not in seen:
                seen.append(p)
        # drop elements generated by the others
        out = list(seen)
        # try to drop non-monic, tall generators first so that the survivors
        # read naturally (e.g. 4 + A^4 rather than 1 - 2*A^4)
        def drop_order(q: LaurentPoly):
            top = abs(q.coeff(q.max_exp()))
            return (q.is_constant(), top == 1, -max(abs(c) for _, c in q.items()), -len(q), q.sort_key())

        for p in sorted(seen, key=drop_order):
            rest = [q for q in out if q != p]
            if rest and LaurentIdeal(rest).contains(p):
                out = rest
        return sorted(out, key=lambda q: (q.max_exp() - q.min_exp(), q.sort_key()))

    def __add__(self, other: "LaurentIdeal") -> "LaurentIdeal":
        return LaurentIdeal(self.generators + other.generators)

    def __eq__(self, other):
        if not isinstance(other, LaurentIdeal):
            return NotImplemented
        return ideal_equal(self, other)

    def __hash__(self):
        return hash(tuple(self.canonical_generators()))

    def __str__(self):
        if self.is_trivial():
            return "<1>"
        gens = self.canonical_generators()
        return "<" + ", ".join(str(g) for g in gens) + ">" if gens else "<0>"

    def __repr__(self):
        return f"LaurentIdeal({[str(g) for g in self.generators]})"


def is_trivial(ideal: LaurentIdeal) -> bool:
    return ideal.is_trivial()


def membership(f, ideal: LaurentIdeal) -> bool:
    return ideal.contains(f)


def ideal_equal(i: LaurentIdeal, j: LaurentIdeal) -> bool:
    return all(j.contains(g) for g in i.generators) and all(i.contains(g) for g in j.generators)


# ---------------------------------------------------------------------------------
# Z[omega]
# ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class CyclotomicInt:
    """a0 + a1*w + a2*w^2 + a3*w^3 with w^4 = -1."""

    coords: Tuple[int, int, int, int]

    @classmethod
    def of(cls, *coords: int) -> "CyclotomicInt":
        c = list(coords) + [0] * (4 - len(coords))
        return cls(tuple(c[:4]))

    @classmethod
    def omega_power(cls, k: int) -> "CyclotomicInt":
        k %= 8
        c = [0, 0, 0, 0]
        c[k % 4] = -1 if k >= 4 else 1
        return cls(tuple(c))

    def __add__(self, other):
        other = _cyc(other)
        return CyclotomicInt(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return CyclotomicInt(tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-_cyc(other))

    def __mul__(self, other):
        other = _cyc(other)
        out = [0] * 4
        for i, a in enumerate(self.coords):
            if not a:
                continue
            for j, b in enumerate(other.coords):
                k = i + j
                if k >= 4:
                    out[k - 4] -= a * b
                else:
                    out[k] += a * b
        return CyclotomicInt(tuple(out))

    __rmul__ = __mul__
    __radd__ = __add__

    def conj(self) -> "CyclotomicInt":
        a0, a1, a2, a3 = self.coords
        return CyclotomicInt((a0, -a3, -a2, -a1))

    def is_integer(self) -> bool:
        return not any(self.coords[1:])

    def __int__(self):
        if not self.is_integer():
            raise ValueError(f"{self} is not an integer")
        return self.coords[0]

    def __bool__(self):
        return any(self.coords)

    def __str__(self):
        names = ["", "w", "w^2", "w^3"]
        parts = []
        for c, n in zip(self.coords, names):
            if c:
                parts.append(str(c) if not n else (n if c == 1 else f"-{n}" if c == -1 else f"{c}*{n}"))
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _cyc(x) -> CyclotomicInt:
    if isinstance(x, CyclotomicInt):
        return x
    if isinstance(x, int):
        return CyclotomicInt((x, 0, 0, 0))
    raise TypeError(f"cannot treat {type(x).__name__} as a cyclotomic integer")


def omega(p: LaurentPoly) -> CyclotomicInt:
    """Image of p under A -> omega."""
    out = [0, 0, 0, 0]
    for e, c in p.items():
        k = e % 8
        out[k % 4] += -c if k >= 4 else c
    return CyclotomicInt(tuple(out))


def _hnf_rows(rows: List[List[int]]) -> List[List[int]]:
    """Row-style Hermite normal form (echelon over Z, positive pivots)."""
    rows = [r[:] for r in rows if any(r)]
    ncols = len(rows[0]) if rows else 0
    out: List[List[int]] = []
    for col in range(ncols):
        active = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                if r2[col]:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            active = nxt
        if active:
            piv = active[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            out.append(piv)
        rows = rest
    return out


def omega_contract(ideal: LaurentIdeal) -> int:
    """The d >= 0 with omega(I) intersected with Z equal to dZ."""
    rows = []
    gens = ideal.generators or (ZERO,)
    for g in gens:
        v = omega(g)
        for j in range(4):
            w = v * CyclotomicInt.omega_power(j)
            a0, a1, a2, a3 = w.coords
            rows.append([a3, a2, a1, a0])
    if not any(any(r) for r in rows):
        return 0
    hnf = _hnf_rows(rows)
    for r in hnf:
        if not any(r[:3]):
            return abs(r[3])
    return 0


def link_determinant(d, max_crossings: Optional[int] = None) -> int:
    """|omega(<L>/delta)|, which is the determinant of the link."""
    from .diagram import kauffman_bracket

    v = omega(reduce_by_delta(kauffman_bracket(d, max_crossings=max_crossings)))
    norm = v * v.conj()
    if not norm.is_integer() or int(norm) < 0:
        raise NotUnitMultipleOfInteger(f"{v} has non-integral norm")
    n = math.isqrt(int(norm))
    if n * n != int(norm) or not any(v == CyclotomicInt.omega_power(j) * n for j in range(8)):
        raise NotUnitMultipleOfInteger(f"{v} is not a unit times an integer")
    return n


# ---------------------------------------------------------------------------------
# Bracket ideals of tangles
# ---------------------------------------------------------------------------------

_MAX_BASIS_INDEX = 8


def closure_generators(t, parity: str) -> List[LaurentPoly]:
    """Reduced pairings of t with the x/y basis of the given parity.

    Pairings vanish from the first index n beyond every colour in the graph
    expansion of t; the loop stops there.
    """
    from .bases import basis_element
    from .diagram import TangleDiagram, reduce_tangle
    from .pairing import hopf_pair

    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    v = reduce_tangle(t, max_crossings=10**6) if isinstance(t, TangleDiagram) else t
    gens: List[LaurentPoly] = []
    for n in range(_MAX_BASIS_INDEX + 1):
        vals = {kind: hopf_pair(v, basis_element(kind, n)) for kind in ("x_even", "y_even", "x_odd", "y_odd")}
        if not any(vals.values()):
            return gens
        for kind in (f"x_{parity}", f"y_{parity}"):
            if vals[kind]:
                gens.append(reduce_by_delta(vals[kind]))
    raise UnderDetermined(f"pairings do not vanish up to index {_MAX_BASIS_INDEX}")


def even_ideal(t) -> LaurentIdeal:
    return LaurentIdeal(closure_generators(t, "even"))


def odd_ideal(t) -> LaurentIdeal:
    return LaurentIdeal(closure_generators(t, "odd"))


def full_ideal(t) -> LaurentIdeal:
    return even_ideal(t) + odd_ideal(t)
