"""Temperley-Lieb recoupling coefficients and an independent network evaluator.

The closed formulas (quantum integers, Delta_n, theta, Tet, lambda) follow
the Kauffman-Lins conventions with ``[n] = (A^{2n} - A^{-2n}) / (A^2 - A^{-2})``.
``tl_evaluate`` computes the same quantities the slow way: every colour-n edge
becomes n parallel strands through a Jones-Wenzl projector, vertices become
their unique planar strand matchings, and the resulting crossingless pictures
are summed.  The two routes are compared in the test-suite.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Hashable, Iterable, Mapping, Sequence, Tuple

from .errors import BoundExceeded, Inadmissible
from .laurent import ONE, ZERO, LaurentPoly, RationalFunction, delta

__all__ = [
    "is_admissible",
    "quantum_int",
    "quantum_factorial",
    "quantum_delta",
    "theta",
    "tet",
    "twist_lambda",
    "TLDiagram",
    "TLElement",
    "jones_wenzl",
    "Network",
    "theta_network",
    "tet_network",
    "loop_network",
    "twisted_theta_network",
    "tl_evaluate",
    "DEFAULT_STRAND_BOUND",
]

DEFAULT_STRAND_BOUND = 8
_lock = threading.Lock()


def is_admissible(a: int, b: int, c: int) -> bool:
    """|a-b| <= c <= a+b and a+b+c even (all colours non-negative)."""
    if min(a, b, c) < 0:
        return False
    return abs(a - b) <= c <= a + b and (a + b + c) % 2 == 0


def _require(a: int, b: int, c: int) -> None:
    if not is_admissible(a, b, c):
        raise Inadmissible(f"({a}, {b}, {c}) is not admissible")


_QDEN = LaurentPoly({2: 1, -2: -1})


@lru_cache(maxsize=None)
def quantum_int(n: int) -> LaurentPoly:
    """[n] = A^{2n-2} + A^{2n-6} + ... + A^{-2n+2}; [0] = 0."""
    if n < 0:
        return -quantum_int(-n)
    return LaurentPoly({2 * n - 2 - 4 * k: 1 for k in range(n)})


@lru_cache(maxsize=None)
def quantum_factorial(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError("negative quantum factorial")
    out = ONE
    for k in range(1, n + 1):
        out = out * quantum_int(k)
    return out


@lru_cache(maxsize=None)
def quantum_delta(n: int) -> LaurentPoly:
    """Value of the closed n-coloured loop, (-1)^n [n+1]."""
    if n < 0:
        raise ValueError("colour must be non-negative")
    q = quantum_int(n + 1)
    return -q if n % 2 else q


@lru_cache(maxsize=None)
def theta(a: int, b: int, c: int) -> RationalFunction:
    """Theta network value.  Not always a Laurent polynomial: theta(2,2,2) has a [2] denominator."""
    _require(a, b, c)
    m, n, p = (a + b - c) // 2, (b + c - a) // 2, (a + c - b) // 2
    qf = quantum_factorial
    num = qf(m + n + p + 1) * qf(m) * qf(n) * qf(p)
    den = qf(m + n) * qf(n + p) * qf(m + p)
    val = RationalFunction(num, den)
    return -val if (m + n + p) % 2 else val


@lru_cache(maxsize=None)
def tet(a: int, b: int, e: int, c: int, d: int, f: int) -> RationalFunction:
    """Tet[a b e; c d f]: faces (a,d,e), (b,c,e), (a,b,f), (c,d,f)."""
    for tri in ((a, d, e), (b, c, e), (a, b, f), (c, d, f)):
        _require(*tri)
    qf = quantum_factorial
    ai = [(a + d + e) // 2, (b + c + e) // 2, (a + b + f) // 2, (c + d + f) // 2]
    bj = [(b + d + e + f) // 2, (a + c + e + f) // 2, (a + b + c + d) // 2]
    inner = ONE
    for x in ai:
        for y in bj:
            inner = inner * qf(y - x)
    edges = qf(a) * qf(b) * qf(c) * qf(d) * qf(e) * qf(f)
    total = RationalFunction(0)
    for s in range(max(ai), min(bj) + 1):
        den = ONE
        for x in ai:
            den = den * qf(s - x)
        for y in bj:
            den = den * qf(y - s)
        term = RationalFunction(qf(s + 1), den)
        total = total + (-term if s % 2 else term)
    return total * RationalFunction(inner, edges)


def twist_lambda(a: int, b: int, c: int) -> LaurentPoly:
    """The half-twist eigenvalue (-1)^{(a+b-c)/2} A^{(a(a+2)+b(b+2)-c(c+2))/2}."""
    _require(a, b, c)
    sign = -1 if ((a + b - c) // 2) % 2 else 1
    return LaurentPoly.monomial((a * (a + 2) + b * (b + 2) - c * (c + 2)) // 2, sign)


# ---------------------------------------------------------------------------------
# Temperley-Lieb diagrams
# ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class TLDiagram:
    """Crossingless matching of n bottom points (0..n-1) and n top points (n..2n-1).

    ``pairs`` is a sorted tuple of (p, q) with p < q.  Points are numbered left
    to right on both rows.
    """

    n: int
    pairs: Tuple[Tuple[int, int], ...]

    @classmethod
    def identity(cls, n: int) -> "TLDiagram":
        return cls(n, tuple((k, n + k) for k in range(n)))

    @classmethod
    def cupcap(cls, n: int, i: int) -> "TLDiagram":
        """The generator e_i joining points i, i+1 on each row."""
        pairs = [(i, i + 1), (n + i, n + i + 1)]
        pairs += [(k, n + k) for k in range(n) if k not in (i, i + 1)]
        return cls(n, tuple(sorted(pairs)))

    def partner(self) -> Dict[int, int]:
        out = {}
        for p, q in self.pairs:
            out[p] = q
            out[q] = p
        return out

    def compose(self, upper: "TLDiagram") -> Tuple["TLDiagram", int]:
        """Stack ``upper`` on top of ``self``; returns (diagram, closed loop count)."""
        n = self.n
        lo, hi = self.partner(), upper.partner()
        # outer points: ('b', k) bottom of self, ('t', k) top of upper; middle k
        result = []
        seen_mid = set()

        def walk(start_side: str, k: int):
            # returns the outer endpoint reached
            if start_side == "b":
                side, pt = "lo", k
            else:
                side, pt = "hi", n + k
            while True:
                if side == "lo":
                    q = lo[pt]
                    if q < n:
                        return ("b", q)
                    mid = q - n
                    seen_mid.add(mid)
                    side, pt = "hi", mid
                else:
                    q = hi[pt]
                    if q >= n:
                        return ("t", q - n)
                    mid = q
                    seen_mid.add(mid)
                    side, pt = "lo", n + mid

        done = set()
        for side, k in [("b", k) for k in range(n)] + [("t", k) for k in range(n)]:
            if (side, k) in done:
                continue
            end = walk(side, k)
            done.add((side, k))
            done.add(end)
            p = k if side == "b" else n + k
            q = end[1] if end[0] == "b" else n + end[1]
            result.append((min(p, q), max(p, q)))
        loops = 0
        for m in range(n):
            if m in seen_mid:
                continue
            loops += 1
            pt, side = n + m, "lo"  # top of lower diagram at middle m
            cur = m
            while True:
                seen_mid.add(cur)
                if side == "lo":
                    q = lo[n + cur]
                    cur = q - n
                    side = "hi"
                else:
                    q = hi[cur]
                    cur = q
                    side = "lo"
                if cur == m and side == "lo":
                    break
        return TLDiagram(n, tuple(sorted(result))), loops

    def tensor_id(self) -> "TLDiagram":
        """Add one through-strand on the right."""
        n = self.n

        def shift(p):
            return p if p < n else p + 1

        pairs = [(shift(p), shift(q)) for p, q in self.pairs] + [(n, 2 * n + 1)]
        return TLDiagram(n + 1, tuple(sorted(pairs)))


class TLElement:
    """Linear combination of TL diagrams with RationalFunction coefficients."""

    def __init__(self, n: int, terms: Mapping[TLDiagram, RationalFunction] | None = None):
        self.n = n
        self.terms: Dict[TLDiagram, RationalFunction] = {}
        for d, c in (terms or {}).items():
            if c:
                self.terms[d] = c

    @classmethod
    def basis(cls, d: TLDiagram) -> "TLElement":
        return cls(d.n, {d: RationalFunction(1)})

    def __add__(self, other: "TLElement") -> "TLElement":
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out.get(d, RationalFunction(0)) + c
        return TLElement(self.n, out)

    def scale(self, s) -> "TLElement":
        return TLElement(self.n, {d: c * s for d, c in self.terms.items()})

    def __sub__(self, other: "TLElement") -> "TLElement":
        return self + other.scale(-1)

    def __mul__(self, upper: "TLElement") -> "TLElement":
        """self below, upper on top."""
        out: Dict[TLDiagram, RationalFunction] = {}
        dl = delta()
        for d1, c1 in self.terms.items():
            for d2, c2 in upper.terms.items():
                d, loops = d1.compose(d2)
                out[d] = out.get(d, RationalFunction(0)) + c1 * c2 * (dl ** loops)
        return TLElement(self.n, out)

    def tensor_id(self) -> "TLElement":
        return TLElement(self.n + 1, {d.tensor_id(): c for d, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TLElement):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        zero = RationalFunction(0)
        return self.n == other.n and all(self.terms.get(k, zero) == other.terms.get(k, zero) for k in keys)

    def __len__(self):
        return len(self.terms)


@lru_cache(maxsize=None)
def jones_wenzl(n: int) -> TLElement:
    """Jones-Wenzl idempotent on n strands by the Wenzl recursion.

    f_{n} = f_{n-1} (x) 1 - (Delta_{n-2}/Delta_{n-1}) (f_{n-1} (x) 1) e_{n-1} (f_{n-1} (x) 1)
    """
    if n < 0:
        raise ValueError("negative strand count")
    if n <= 1:
        return TLElement.basis(TLDiagram.identity(n))
    prev = jones_wenzl(n - 1).tensor_id()
    e = TLElement.basis(TLDiagram.cupcap(n, n - 2))
    coeff = RationalFunction(quantum_delta(n - 2), quantum_delta(n - 1))
    return prev - (prev * e * prev).scale(coeff)


# ---------------------------------------------------------------------------------
# Trivalent networks
# ---------------------------------------------------------------------------------


@dataclass
class Network:
    """Planar closed trivalent network.

    ``vertices`` lists, for each vertex, its three incident edge names in
    counterclockwise order.  ``colors`` maps edge name -> colour.  Edges listed
    in ``loops`` are closed circles without vertices.
    """

    vertices: list[list[Hashable]]
    colors: dict[Hashable, int]
    loops: list[Hashable] = field(default_factory=list)
    twists: list[tuple[int, int, int]] = field(default_factory=list)

    def validate(self) -> None:
        count: dict[Hashable, int] = {}
        for vs in self.vertices:
            if len(vs) != 3:
                raise ValueError("vertices must be trivalent")
            for e in vs:
                count[e] = count.get(e, 0) + 1
        for e, k in count.items():
            if k != 2:
                raise ValueError(f"edge {e!r} has {k} ends (need 2)")
            if e not in self.colors:
                raise ValueError(f"edge {e!r} has no colour")
        for vs in self.vertices:
            a, b, c = (self.colors[e] for e in vs)
            _require(a, b, c)
        for e in self.loops:
            if e in count:
                raise ValueError(f"loop {e!r} also appears at a vertex")

    def strand_width(self) -> int:
        widths = [sum(self.colors[e] for e in vs) for vs in self.vertices]
        widths += [self.colors[e] for e in self.loops]
        return max(widths, default=0)


def theta_network(a: int, b: int, c: int) -> Network:
    return Network([["a", "b", "c"], ["a", "c", "b"]], {"a": a, "b": b, "c": c})


def tet_network(a: int, b: int, e: int, c: int, d: int, f: int) -> Network:
    """Tetrahedral network whose value is Tet[a b e; c d f]."""
    verts = [["E", "D", "A"], ["B", "C", "E"], ["A", "F", "B"], ["F", "D", "C"]]
    return Network(verts, dict(A=a, B=b, C=c, D=d, E=e, F=f))


def twisted_theta_network(a: int, b: int, c: int, sign: int = -1) -> Network:
    """Theta network with a half-twist between the a and b edges at one vertex."""
    return Network([["a", "b", "c"], ["a", "c", "b"]], {"a": a, "b": b, "c": c}, twists=[(0, 0, sign)])


def loop_network(n: int) -> Network:
    return Network([], {"loop": n}, ["loop"])


def _strand_bound() -> int:
    env = os.environ.get("KBIDEALS_MAX_STRANDS")
    return int(env) if env else DEFAULT_STRAND_BOUND


def _jw_common(n: int) -> tuple[list[tuple[TLDiagram, LaurentPoly]], LaurentPoly]:
    """JW_n written as (sum of numerator_D * D) / common denominator."""
    with _lock:
        return _jw_common_cached(n)


@lru_cache(maxsize=None)
def _jw_common_cached(n: int):
    jw = jones_wenzl(n)
    den = ONE
    for c in jw.terms.values():
        den = den * c.den.exact_div(_poly_gcd_safe(den, c.den))
    terms = [(d, (c * den).to_laurent()) for d, c in jw.terms.items()]
    return terms, den


def _poly_gcd_safe(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    from .laurent import poly_gcd

    return poly_gcd(a, b)


def tl_evaluate(network: Network, bound: int | None = None) -> RationalFunction:
    """Evaluate a closed coloured network by explicit Jones-Wenzl expansion.

    The result lives in the fraction field; it is a Laurent polynomial for
    small colours but not in general (e.g. theta(2,2,2)).
    """
    network.validate()
    bound = _strand_bound() if bound is None else bound
    if network.strand_width() > bound:
        raise BoundExceeded(f"network needs {network.strand_width()} strands at a vertex (bound {bound})")
    colors = network.colors
    ends: dict[Hashable, list[tuple[int, int]]] = {}
    for vi, es in enumerate(network.vertices):
        for si, name in enumerate(es):
            ends.setdefault(name, []).append((vi, si))

    twisted = {}
    for vi, si, sign in network.twists:
        if sign not in (1, -1):
            raise ValueError("twist sign must be +1 or -1")
        twisted[(vi, si)] = sign
    outer_slots = set()
    for vi, si in twisted:
        outer_slots.add((vi, si))
        outer_slots.add((vi, (si + 1) % 3))

    # fixed strand connections inside each vertex
    base: list[tuple[tuple, tuple]] = []
    for vi, es in enumerate(network.vertices):
        sizes = [colors[x] for x in es]
        if any((vi, si) in twisted for si in range(3)):
            # inside a twist the vertex itself sees the two edges swapped
            for si in range(3):
                if (vi, si) in twisted:
                    t = (si + 1) % 3
                    sizes[si], sizes[t] = sizes[t], sizes[si]
        a, b, c = sizes
        between = [(a + b - c) // 2, (b + c - a) // 2, (c + a - b) // 2]
        for s in range(3):
            t = (s + 1) % 3
            for q in range(between[s]):
                base.append((("v", vi, s, sizes[s] - 1 - q), ("v", vi, t, q)))

    expansions = []
    common_den = ONE
    for name, pos in ends.items():
        n = colors[name]
        if n == 0:
            continue
        (u, su), (v, sv) = pos
        terms, den = _jw_common(n)
        common_den = common_den * den
        tag_u = "o" if (u, su) in outer_slots else "v"
        tag_v = "o" if (v, sv) in outer_slots else "v"
        options = []
        for d, num in terms:
            prs = []
            for p, q in d.pairs:
                prs.append((_port(p, n, u, su, v, sv, tag_u, tag_v), _port(q, n, u, su, v, sv, tag_u, tag_v)))
            options.append((prs, num))
        expansions.append(options)

    for (vi, si), sign in twisted.items():
        es = network.vertices[vi]
        ti = (si + 1) % 3
        m = colors[es[si]]
        r = colors[es[ti]]
        # Looking outward from the vertex the box rows run against the ccw order.
        # Inside the twist slot si carries es[ti] (r strands) and slot ti carries
        # es[si] (m strands); the es[si] block starts on the left and ends on the right.
        box = _half_twist(m, r, sign)
        terms, den = _tl_common(box)
        common_den = common_den * den
        n = m + r
        bottom_ports = [("v", vi, ti, m - 1 - k) for k in range(m)] + [("v", vi, si, r - 1 - k) for k in range(r)]
        top_ports = [("o", vi, ti, r - 1 - k) for k in range(r)] + [("o", vi, si, m - 1 - k) for k in range(m)]
        options = []
        for d, num in terms:
            prs = []
            for p, q in d.pairs:
                pp = bottom_ports[p] if p < n else top_ports[p - n]
                qq = bottom_ports[q] if q < n else top_ports[q - n]
                prs.append((pp, qq))
            options.append((prs, num))
        expansions.append(options)

    loop_factor = ONE
    for name in network.loops:
        loop_factor = loop_factor * quantum_delta(colors[name])

    total = _contract_expansions(base, expansions)
    if not network.vertices and not expansions:
        total = ONE
    return RationalFunction(total * loop_factor, common_den)


def _contract_expansions(base, expansions) -> LaurentPoly:
    """Sum over all choices of expansion terms, merging equal partial states.

    A state records the open path segments as a map end -> other end; each
    expansion closes some of them.  Closed loops contribute delta immediately,
    so identical states reached through different choices are merged.
    """
    dl = delta()
    ends: dict = {}
    for p, q in base:
        _join(ends, p, q)
    start = (tuple(sorted(ends.items())), 0)
    states: dict = {start[0]: ONE}
    for options in expansions:
        nxt: dict = {}
        for key, coeff in states.items():
            for prs, num in options:
                cur = dict(key)
                loops = 0
                for p, q in prs:
                    loops += _join(cur, p, q)
                val = coeff * num * dl ** loops if loops else coeff * num
                k = tuple(sorted(cur.items()))
                nxt[k] = nxt.get(k, ZERO) + val
        states = {k: v for k, v in nxt.items() if not v.is_zero()}
    total = ZERO
    for key, coeff in states.items():
        if key:
            raise ValueError("network expansion left dangling strands")
        total = total + coeff
    return total


def _join(ends: dict, p, q) -> int:
    """Connect ports p and q; return 1 if this closes a loop."""
    if p == q:
        return 1
    pe = ends.pop(p, None)
    qe = ends.pop(q, None)
    if pe is None and qe is None:
        ends[p], ends[q] = q, p
        return 0
    if pe == q:
        return 1
    a = p if pe is None else pe
    b = q if qe is None else qe
    ends[a], ends[b] = b, a
    return 0


def _port(x: int, n: int, u: int, su: int, v: int, sv: int, tag_u: str = "v", tag_v: str = "v"):
    if x < n:
        return (tag_u, u, su, n - 1 - x)
    return (tag_v, v, sv, x - n)


def crossing_element(n: int, i: int, sign: int) -> TLElement:
    """Kauffman expansion of a crossing between strands i, i+1 of an n-strand box.

    sign +1: the strand running from bottom-left to top-right is over, which
    expands as A * id + A^-1 * e_i; sign -1 is the mirror image.
    """
    a, ainv = RationalFunction(LaurentPoly.monomial(1)), RationalFunction(LaurentPoly.monomial(-1))
    if sign < 0:
        a, ainv = ainv, a
    return TLElement(n, {TLDiagram.identity(n): a, TLDiagram.cupcap(n, i): ainv})


@lru_cache(maxsize=None)
def _half_twist(left: int, right: int, sign: int) -> TLElement:
    """Box in which the left block of strands slides to the right past the right block.

    Every crossing has the moving (left-block) strand going bottom-left to
    top-right; ``sign`` +1 puts it over.
    """
    n = left + right
    out = TLElement.basis(TLDiagram.identity(n))
    for k in range(left - 1, -1, -1):
        for pos in range(k, k + right):
            out = out * crossing_element(n, pos, sign)
    return out


def _tl_common(el: TLElement):
    den = ONE
    from .laurent import poly_gcd

    for c in el.terms.values():
        den = den * c.den.exact_div(poly_gcd(den, c.den))
    return [(d, (c * den).to_laurent()) for d, c in el.terms.items()], den
