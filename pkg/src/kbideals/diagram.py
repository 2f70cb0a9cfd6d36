"""Planar link diagrams, annular tangle diagrams and the Kauffman bracket.

Diagrams use a PD-style text format, one item per line::

    # comment
    X a b c d      crossing; edge ids counterclockwise, starting at an under-strand
    M e k          edge e crosses the meridian cut k times
    P1 e           edge e ends at the first marked point
    P2 e           edge e ends at the second marked point

An annular (genus-1) tangle is drawn in an annulus whose outer boundary
carries, in counterclockwise order, the outer end Q of the cut, then P1, then
P2.  ``M`` lines are listed in the order the cut meets the edges, from the
inner boundary outwards.  An edge occurring only in an ``M`` line is a closed
loop without crossings: ``M e 1`` is a core, ``M e 0`` a contractible circle.
Link diagrams have no marked points; there ``M e 0`` lines denote free
circles.

The bracket is normalised so that the empty diagram has value 1 and the
unknot has value delta = -A^2 - A^-2.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import BoundExceeded, DiagramParseError, MalformedDiagram
from .laurent import ONE, ZERO, LaurentPoly, RationalFunction, delta

__all__ = [
    "LinkDiagram",
    "TangleDiagram",
    "SkeinVector",
    "ClosureSpec",
    "parse_diagram",
    "load_diagram",
    "kauffman_bracket",
    "state_sum_naive",
    "reduce_tangle",
    "parity_split",
    "close",
    "cut_layout",
    "crossingless_tangle",
    "build_annular_tangle",
    "closure_complement",
    "DEFAULT_MAX_CROSSINGS",
    "SHORT",
    "LONG",
]

DEFAULT_MAX_CROSSINGS = 24
SHORT, LONG = "short", "long"

Crossing = Tuple[int, int, int, int]


def _max_crossings(explicit: Optional[int]) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("KBIDEALS_MAX_CROSSINGS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"KBIDEALS_MAX_CROSSINGS must be an integer, got {env!r}") from None
    return DEFAULT_MAX_CROSSINGS


# ---------------------------------------------------------------------------------
# Diagram types
# ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class LinkDiagram:
    crossings: Tuple[Crossing, ...]
    free_loops: int = 0

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(c) for c in self.crossings))
        self.validate()

    def validate(self) -> None:
        if self.free_loops < 0:
            raise MalformedDiagram("negative free loop count")
        count: Dict[int, int] = {}
        for c in self.crossings:
            if len(c) != 4:
                raise MalformedDiagram(f"crossing {c} does not have 4 edges")
            for e in c:
                count[e] = count.get(e, 0) + 1
        bad = sorted(e for e, k in count.items() if k != 2)
        if bad:
            raise MalformedDiagram(f"edges {bad} do not occur exactly twice")
        _check_euler([list(c) for c in self.crossings])

    @property
    def num_crossings(self) -> int:
        return len(self.crossings)

    def edges(self) -> List[int]:
        return sorted({e for c in self.crossings for e in c})

    def to_text(self) -> str:
        lines = [f"X {a} {b} {c} {d}" for a, b, c, d in self.crossings]
        base = max(self.edges(), default=0) + 1
        lines += [f"M {base + k} 0" for k in range(self.free_loops)]
        return "\n".join(lines) + "\n"

    def mirror(self) -> "LinkDiagram":
        return LinkDiagram(tuple((b, c, d, a) for a, b, c, d in self.crossings), self.free_loops)

    def disjoint_union(self, other: "LinkDiagram") -> "LinkDiagram":
        shift = max(self.edges(), default=0) + 1
        moved = tuple(tuple(e + shift for e in c) for c in other.crossings)
        return LinkDiagram(self.crossings + moved, self.free_loops + other.free_loops)


@dataclass(frozen=True)
class TangleDiagram:
    """Annular diagram of a 1-manifold with two boundary points in a solid torus."""

    crossings: Tuple[Crossing, ...]
    p1: int
    p2: int
    membranes: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(c) for c in self.crossings))
        object.__setattr__(self, "membranes", tuple((int(e), int(k)) for e, k in self.membranes))
        self.validate()

    def validate(self) -> None:
        count: Dict[int, int] = {}
        for c in self.crossings:
            if len(c) != 4:
                raise MalformedDiagram(f"crossing {c} does not have 4 edges")
            for e in c:
                count[e] = count.get(e, 0) + 1
        count[self.p1] = count.get(self.p1, 0) + 1
        count[self.p2] = count.get(self.p2, 0) + 1
        bad = sorted(e for e, k in count.items() if k != 2)
        if bad:
            raise MalformedDiagram(f"edges {bad} do not occur exactly twice among crossings and endpoints")
        seen = set()
        for e, k in self.membranes:
            if k < 0:
                raise MalformedDiagram(f"negative membrane count on edge {e}")
            if e in seen:
                raise MalformedDiagram(f"edge {e} has more than one M line")
            seen.add(e)
        _check_euler(*self._graph())

    # structural helpers ---------------------------------------------------------

    def membrane(self, e: int) -> int:
        for f, k in self.membranes:
            if f == e:
                return k
        return 0

    def free_edges(self) -> List[int]:
        used = {e for c in self.crossings for e in c} | {self.p1, self.p2}
        return [e for e, _ in self.membranes if e not in used]

    def edges(self) -> List[int]:
        return sorted({e for c in self.crossings for e in c} | {self.p1, self.p2} | {e for e, _ in self.membranes})

    @property
    def num_crossings(self) -> int:
        return len(self.crossings)

    def total_membrane(self) -> int:
        return sum(k for _, k in self.membranes)

    def parity(self) -> int:
        """Parity of the number of intersections with the meridian disk."""
        return self.total_membrane() % 2

    def _graph(self):
        """Rotation system including the outer boundary circle.

        Vertices: crossings 0..n-1, then P1 = n, P2 = n+1 with slots
        P1: [sigma, tangle, lambda], P2: [lambda, tangle, sigma], where sigma is
        the boundary arc from P1 counterclockwise to P2 and lambda the arc from
        P2 counterclockwise through Q back to P1.
        """
        n = len(self.crossings)
        sigma, lam = ("sigma",), ("lambda",)
        verts: List[List] = [list(c) for c in self.crossings]
        verts.append([sigma, self.p1, lam])
        verts.append([lam, self.p2, sigma])
        return (verts,)

    def to_text(self) -> str:
        lines = [f"X {a} {b} {c} {d}" for a, b, c, d in self.crossings]
        lines.append(f"P1 {self.p1}")
        lines.append(f"P2 {self.p2}")
        lines += [f"M {e} {k}" for e, k in self.membranes]
        return "\n".join(lines) + "\n"

    def mirror(self) -> "TangleDiagram":
        """Switch every crossing (the same planar projection)."""
        return TangleDiagram(tuple((b, c, d, a) for a, b, c, d in self.crossings), self.p1, self.p2, self.membranes)

    def relabel(self, offset: int) -> "TangleDiagram":
        return TangleDiagram(
            tuple(tuple(e + offset for e in c) for c in self.crossings),
            self.p1 + offset,
            self.p2 + offset,
            tuple((e + offset, k) for e, k in self.membranes),
        )


# ---------------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------------


def parse_diagram(text: str) -> Union[LinkDiagram, TangleDiagram]:
    """Parse the line format; returns a TangleDiagram when P1/P2 lines are present."""
    crossings: List[Crossing] = []
    membranes: List[Tuple[int, int]] = []
    p: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag, args = parts[0], parts[1:]
        try:
            nums = [int(x) for x in args]
        except ValueError:
            raise DiagramParseError(f"non-integer field in {line!r}", lineno) from None
        if tag == "X":
            if len(nums) != 4:
                raise DiagramParseError("X needs exactly four edge ids", lineno)
            crossings.append(tuple(nums))
        elif tag == "M":
            if len(nums) != 2:
                raise DiagramParseError("M needs an edge id and a count", lineno)
            if nums[1] < 0:
                raise DiagramParseError("membrane count must be non-negative", lineno)
            membranes.append((nums[0], nums[1]))
        elif tag in ("P1", "P2"):
            if len(nums) != 1:
                raise DiagramParseError(f"{tag} needs exactly one edge id", lineno)
            if tag in p:
                raise DiagramParseError(f"duplicate {tag} line", lineno)
            p[tag] = nums[0]
        else:
            raise DiagramParseError(f"unknown record type {tag!r}", lineno)
    if p:
        if set(p) != {"P1", "P2"}:
            raise DiagramParseError("a tangle needs both P1 and P2")
        return TangleDiagram(tuple(crossings), p["P1"], p["P2"], tuple(membranes))
    used = {e for c in crossings for e in c}
    free = 0
    for e, k in membranes:
        if e in used or k != 0:
            raise DiagramParseError(f"link diagrams only allow 'M e 0' free circles (edge {e})")
        free += 1
    return LinkDiagram(tuple(crossings), free)


def load_diagram(path) -> Union[LinkDiagram, TangleDiagram]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_diagram(fh.read())


# ---------------------------------------------------------------------------------
# Rotation systems and faces
# ---------------------------------------------------------------------------------


def _darts(verts: Sequence[Sequence]) -> Dict[Tuple[int, int], Tuple[int, int]]:
    """Map each slot to the opposite slot along its edge."""
    where: Dict = {}
    for v, slots in enumerate(verts):
        for s, e in enumerate(slots):
            where.setdefault(e, []).append((v, s))
    opp = {}
    for e, occ in where.items():
        if len(occ) != 2:
            raise MalformedDiagram(f"edge {e} has {len(occ)} ends")
        a, b = occ
        opp[a] = b
        opp[b] = a
    return opp


def _faces(verts: Sequence[Sequence]) -> Dict[Tuple[int, int], int]:
    """Face label of every dart (dart = slot it leaves from); faces lie to the left."""
    opp = _darts(verts)
    face: Dict[Tuple[int, int], int] = {}
    fid = 0
    for start in opp:
        if start in face:
            continue
        d = start
        while d not in face:
            face[d] = fid
            v, s = opp[d]
            d = (v, (s - 1) % len(verts[v]))
        fid += 1
    return face


def _check_euler(verts: Sequence[Sequence]) -> None:
    if not verts:
        return
    opp = _darts(verts)
    face = _faces(verts)
    parent = list(range(len(verts)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (v, _), (w, _) in opp.items():
        parent[find(v)] = find(w)
    comps: Dict[int, List[int]] = {}
    for v in range(len(verts)):
        comps.setdefault(find(v), []).append(v)
    for members in comps.values():
        mset = set(members)
        nv = len(members)
        ne = sum(len(verts[v]) for v in members) // 2
        nf = len({f for (v, _), f in face.items() if v in mset})
        if nv - ne + nf != 2:
            raise MalformedDiagram("rotation system is not planar (Euler characteristic check failed)")


# ---------------------------------------------------------------------------------
# State sums
# ---------------------------------------------------------------------------------

_T1, _T2 = -1, -2  # terminal tokens for P1 / P2


def _greedy_order(crossings: Sequence[Crossing], start_edges: Iterable[int], first: Optional[int]):
    """Greedy elimination order; returns (order, cost) with cost = sum of 2^frontier."""
    n = len(crossings)
    remaining = set(range(n))
    seen: Dict[int, int] = {}
    age: Dict[int, int] = {}
    clock = 0
    for e in start_edges:
        seen[e] = 1
        age[e] = clock
    by_edge: Dict[int, List[int]] = {}
    for i, c in enumerate(crossings):
        for e in c:
            by_edge.setdefault(e, []).append(i)
    order: List[int] = []
    frontier = sum(1 for v in seen.values() if v == 1)
    cost = 0
    while remaining:
        if first is not None and not order:
            best = first
        else:
            cands = {i for e, v in seen.items() if v == 1 for i in by_edge.get(e, ()) if i in remaining}
            pool = cands or remaining
            best, best_key = None, None
            for i in pool:
                c = crossings[i]
                closes = sum(1 for e in c if seen.get(e, 0) == 1)
                opens = sum(1 for e in set(c) if seen.get(e, 0) == 0 and c.count(e) == 1)
                oldest = min((age[e] for e in c if seen.get(e, 0) == 1), default=clock + 1)
                key = (closes - opens, -oldest, -i)
                if best_key is None or key > best_key:
                    best, best_key = i, key
        order.append(best)
        remaining.discard(best)
        clock += 1
        for e in crossings[best]:
            seen[e] = seen.get(e, 0) + 1
            if seen[e] == 1:
                age[e] = clock
        frontier = sum(1 for v in seen.values() if v == 1)
        cost += 1 << min(frontier, 60)
    return order, cost


def _order_crossings(crossings: Sequence[Crossing], start_edges: Iterable[int]) -> List[int]:
    """Elimination order keeping the set of half-processed edges small.

    Runs a greedy search (prefer crossings that close many edges, then the
    ones touching the oldest open edge) from a few starting crossings and
    keeps the cheapest order.
    """
    start_edges = tuple(start_edges)
    n = len(crossings)
    if n == 0:
        return []
    firsts: List[Optional[int]] = [None]
    if not start_edges:
        step = max(1, n // 8)
        firsts += list(range(0, n, step))
    best, best_cost = None, None
    for f in firsts:
        order, cost = _greedy_order(crossings, start_edges, f)
        if best_cost is None or cost < best_cost:
            best, best_cost = order, cost
    return best


class _Contraction:
    """Dynamic-programming evaluation of the state sum, crossing by crossing.

    A state records how the processed part of the diagram connects the
    half-processed edges (and the terminals P1/P2) in pairs, together with
    the parity of cut crossings along each such path.  Closed loops are
    scored immediately: contractible ones as delta, essential ones (odd
    parity, annular mode only) increment a core counter.
    """

    def __init__(self, crossings: Sequence[Crossing], counts: Mapping[int, int], annular: bool):
        self.crossings = list(crossings)
        self.counts = counts
        self.annular = annular
        self.dl = delta()
        self._dpow = [ONE]

    def dpow(self, k: int) -> LaurentPoly:
        while len(self._dpow) <= k:
            self._dpow.append(self._dpow[-1] * self.dl)
        return self._dpow[k]

    def run(self, initial: Dict[int, Tuple[int, int]], order: Sequence[int]):
        # values are kept as mutable {exponent: coefficient} dicts while summing
        states: Dict[Tuple, Dict[int, int]] = {(tuple(sorted(initial.items())), 0): {0: 1}}
        for ci in order:
            a, b, c, d = self.crossings[ci]
            new: Dict[Tuple, Dict[int, int]] = {}
            for (key, cores), val in states.items():
                for pairs, shift in ((((a, b), (c, d)), 1), (((a, d), (b, c)), -1)):
                    ends = dict(key)
                    loops = 0
                    cc = cores
                    for x, y in pairs:
                        closed = self._join(ends, x, y)
                        if closed is not None:
                            if self.annular and closed % 2:
                                cc += 1
                            else:
                                loops += 1
                    nk = (tuple(sorted(ends.items())), cc)
                    acc = new.get(nk)
                    if acc is None:
                        acc = new[nk] = {}
                    if loops:
                        for f, g in self.dpow(loops).items():
                            for e, v in val.items():
                                k = e + f + shift
                                acc[k] = acc.get(k, 0) + v * g
                    else:
                        for e, v in val.items():
                            k = e + shift
                            acc[k] = acc.get(k, 0) + v
            states = {}
            for k, v in new.items():
                v = {e: x for e, x in v.items() if x}
                if v:
                    states[k] = v
        return {k: LaurentPoly(v) for k, v in states.items()}

    def _join(self, ends: Dict[int, Tuple[int, int]], x: int, y: int) -> Optional[int]:
        """Connect the edge ends x and y at the current crossing.

        Returns the parity of a loop closed by this join, or None.
        """
        cnt = self.counts
        if x == y and x not in ends:
            return cnt.get(x, 0)
        if x in ends and y in ends and ends[x][0] == y:
            par = ends[x][1]
            del ends[x]
            del ends[y]
            return par
        if x in ends:
            ox, px = ends.pop(x)
        else:
            ox, px = x, cnt.get(x, 0)
        if y in ends:
            oy, py = ends.pop(y)
        else:
            oy, py = y, cnt.get(y, 0)
        par = (px + py) % 2 if self.annular else 0
        ends[ox] = (oy, par)
        ends[oy] = (ox, par)
        return None


def kauffman_bracket(d: LinkDiagram, max_crossings: Optional[int] = None) -> LaurentPoly:
    """Kauffman bracket with the empty diagram normalised to 1."""
    if not isinstance(d, LinkDiagram):
        raise MalformedDiagram("kauffman_bracket expects a LinkDiagram")
    bound = _max_crossings(max_crossings)
    if d.num_crossings > bound:
        raise BoundExceeded(f"{d.num_crossings} crossings exceed the bound {bound}")
    contraction = _Contraction(d.crossings, {}, annular=False)
    order = _order_crossings(d.crossings, ())
    states = contraction.run({}, order)
    total = ZERO
    for (key, _), val in states.items():
        if key:
            raise MalformedDiagram("state sum left dangling edges")
        total = total + val
    return total * contraction.dpow(d.free_loops)


def state_sum_naive(d: LinkDiagram) -> LaurentPoly:
    """Direct 2^c enumeration of Kauffman states (small diagrams only)."""
    dl = delta()
    total = ZERO
    n = d.num_crossings
    for bits in itertools.product((0, 1), repeat=n):
        parent: Dict[int, int] = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        # every edge is a node; smoothings join edge ends at crossings
        for e in d.edges():
            find(e)
        for (a, b, c, dd), bit in zip(d.crossings, bits):
            if bit == 0:
                union(a, b)
                union(c, dd)
            else:
                union(a, dd)
                union(b, c)
        loops = len({find(e) for e in d.edges()}) + d.free_loops
        na = bits.count(0)
        total = total + LaurentPoly.monomial(na - (n - na)) * dl ** loops
    return total


# ---------------------------------------------------------------------------------
# Skein vectors
# ---------------------------------------------------------------------------------

Coeff = Union[LaurentPoly, RationalFunction]


class SkeinVector:
    """Finite combination of crossingless basis elements (arc type, core count).

    Coefficients are LaurentPoly values for genuine tangles; RationalFunction
    coefficients are allowed for graph-basis elements.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Tuple[str, int], Coeff] | None = None):
        out: Dict[Tuple[str, int], Coeff] = {}
        for (arc, m), c in (terms or {}).items():
            if arc not in (SHORT, LONG) or m < 0:
                raise ValueError(f"bad basis element {(arc, m)}")
            if isinstance(c, int):
                c = LaurentPoly.const(c)
            if c:
                out[(arc, m)] = c
        self.terms = dict(sorted(out.items(), key=lambda kv: (kv[0][0] != SHORT, kv[0][1])))

    @staticmethod
    def element(arc: str, cores: int) -> "SkeinVector":
        return SkeinVector({(arc, cores): ONE})

    @staticmethod
    def parity_of(key: Tuple[str, int]) -> int:
        arc, m = key
        return (m + (1 if arc == LONG else 0)) % 2

    def items(self):
        return self.terms.items()

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, key):
        return self.terms.get(key, ZERO)

    def __add__(self, other: "SkeinVector") -> "SkeinVector":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return SkeinVector(out)

    def __neg__(self):
        return SkeinVector({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "SkeinVector":
        return SkeinVector({k: c * s for k, c in self.terms.items()})

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SkeinVector):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(_coeff_eq(self.terms.get(k, ZERO), other.terms.get(k, ZERO)) for k in keys)

    def __hash__(self):
        return hash(tuple(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def is_integral(self) -> bool:
        return all(isinstance(c, LaurentPoly) or c.is_laurent() for c in self.terms.values())

    def to_laurent(self) -> "SkeinVector":
        return SkeinVector({k: c if isinstance(c, LaurentPoly) else c.to_laurent() for k, c in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        return "\n".join(f"{arc} z^{m}: {c}" for (arc, m), c in self.terms.items())

    def __repr__(self):
        return "SkeinVector({" + ", ".join(f"({a!r}, {m}): {c}" for (a, m), c in self.terms.items()) + "})"


def _coeff_eq(a: Coeff, b: Coeff) -> bool:
    if isinstance(a, LaurentPoly) and isinstance(b, LaurentPoly):
        return a == b
    return RationalFunction._coerce(a) == RationalFunction._coerce(b)


def parity_split(v: SkeinVector) -> Tuple[SkeinVector, SkeinVector]:
    """Split into even and odd parts (parity = cores + [arc is long], mod 2)."""
    even = {k: c for k, c in v.items() if SkeinVector.parity_of(k) == 0}
    odd = {k: c for k, c in v.items() if SkeinVector.parity_of(k) == 1}
    return SkeinVector(even), SkeinVector(odd)


def reduce_tangle(t: TangleDiagram, max_crossings: Optional[int] = None) -> SkeinVector:
    """Expand an annular tangle into the crossingless basis (short|long arc, cores)."""
    bound = _max_crossings(max_crossings)
    if t.num_crossings > bound:
        raise BoundExceeded(f"{t.num_crossings} crossings exceed the bound {bound}")
    counts = {e: k % 2 for e, k in t.membranes}
    dl = delta()
    if t.p1 == t.p2:
        initial = {_T1: (_T2, counts.get(t.p1, 0)), _T2: (_T1, counts.get(t.p1, 0))}
        start = ()
    else:
        k1, k2 = counts.get(t.p1, 0), counts.get(t.p2, 0)
        initial = {_T1: (t.p1, k1), t.p1: (_T1, k1), _T2: (t.p2, k2), t.p2: (_T2, k2)}
        start = (t.p1, t.p2)
    contraction = _Contraction(t.crossings, counts, annular=True)
    states = contraction.run(initial, _order_crossings(t.crossings, start))
    free_cores = 0
    free_trivial = 0
    for e in t.free_edges():
        if counts.get(e, 0):
            free_cores += 1
        else:
            free_trivial += 1
    out: Dict[Tuple[str, int], LaurentPoly] = {}
    for (key, cores), val in states.items():
        ends = dict(key)
        if set(ends) != {_T1, _T2}:
            raise MalformedDiagram("tangle reduction left dangling edges")
        arc = LONG if ends[_T1][1] % 2 else SHORT
        k = (arc, cores + free_cores)
        out[k] = out[k] + val if k in out else val
    scale = contraction.dpow(free_trivial)
    return SkeinVector({k: v * scale for k, v in out.items()})


def crossingless_tangle(arc: str, cores: int) -> TangleDiagram:
    """The crossingless representative: ``cores`` parallel cores inside the arc."""
    membranes = [(10 + j, 1) for j in range(cores)]
    if arc == LONG:
        membranes.append((1, 1))
    elif arc != SHORT:
        raise ValueError(f"unknown arc type {arc!r}")
    return TangleDiagram((), 1, 1, tuple(membranes))


# ---------------------------------------------------------------------------------
# Cut layout and gluing
# ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class CutStrand:
    """One intersection of the diagram with the cut, listed inner to outer.

    For an edge, ``ccw_end``/``cw_end`` are the (vertex, slot) occurrences on
    the counterclockwise and clockwise side of the cut; a free core has both
    set to None.
    """

    edge: int
    ccw_end: Optional[Tuple[int, int]]
    cw_end: Optional[Tuple[int, int]]


def cut_layout(t: TangleDiagram) -> List[CutStrand]:
    """Recover on which side of the cut each end of a cut edge lies.

    Walks along the cut from its outer end Q inwards through the faces of
    the diagram (outer boundary circle included).  The dart of a cut edge
    that has the outer-side face on its left runs clockwise.
    """
    (verts,) = t._graph()
    n = len(t.crossings)
    face = _faces(verts)
    comp = _components(verts)
    free = set(t.free_edges())
    where: Dict[int, List[Tuple[int, int]]] = {}
    for v, slots in enumerate(verts):
        for s, e in enumerate(slots):
            where.setdefault(e, []).append((v, s))
    entries: List[Tuple[int, int]] = []  # (edge, component) from the outside in
    for e, k in reversed(t.membranes):
        if k == 0 or (e in free and k % 2 == 0):
            continue  # crossingless circles meeting the cut evenly are contractible
        if k > 1:
            if e in free:
                raise MalformedDiagram(f"free loop {e} crosses the cut {k} times; its position is ambiguous")
            raise MalformedDiagram(f"edge {e} crosses the cut {k} times; subdivide it with crossings to glue")
        entries.append((e, -1 if e in free else comp[where[e][0][0]]))
    boundary = comp[n]
    by_comp: Dict[int, List[int]] = {}
    for e, c in entries:
        if c >= 0:
            by_comp.setdefault(c, []).append(e)
    ends: Dict[int, Tuple[Tuple[int, int], Tuple[int, int]]] = {}
    for c, edges in by_comp.items():
        if c == boundary:
            # start in the region of the boundary arc from P2 through Q to P1
            result = _walk_cut(edges, where, face, face[(n + 1, 0)])
            if result is None:
                raise MalformedDiagram("the M order is inconsistent with the faces met along the cut")
        else:
            starts = {f for (v, _), f in face.items() if comp[v] == c}
            found = {tuple(sorted(r.items())) for r in (_walk_cut(edges, where, face, f) for f in starts) if r is not None}
            if not found:
                raise MalformedDiagram("the M order is inconsistent with the faces met along the cut")
            if len(found) > 1:
                raise MalformedDiagram(
                    "a component without endpoints crosses the cut with crossings; "
                    "its nesting in the annulus is not determined by the text format"
                )
            result = dict(next(iter(found)))
        ends.update(result)
    out = [CutStrand(e, None, None) if c < 0 else CutStrand(e, *ends[e]) for e, c in entries]
    out.reverse()
    return out


def _components(verts: Sequence[Sequence]) -> List[int]:
    parent = list(range(len(verts)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (v, _), (w, _) in _darts(verts).items():
        parent[find(v)] = find(w)
    return [find(v) for v in range(len(verts))]


def _walk_cut(edges, where, face, current):
    """Walk inwards across ``edges``; return {edge: (ccw_end, cw_end)} or None."""
    out = {}
    for e in edges:
        o1, o2 = where[e]
        f1, f2 = face[o1], face[o2]
        if f1 == current and f2 != current:
            # the dart leaving o1 has the outer region on its left, so it runs
            # clockwise and o1 lies on the counterclockwise side of the cut
            out[e] = (o1, o2)
            current = f2
        elif f2 == current and f1 != current:
            out[e] = (o2, o1)
            current = f1
        else:
            return None
    return out


@dataclass(frozen=True)
class ClosureSpec:
    """A complementary tangle placed in the complementary solid torus."""

    complement: TangleDiagram
    winding: int

    def __post_init__(self):
        if self.complement.parity() != self.winding % 2:
            raise MalformedDiagram("winding parity disagrees with the complement's membrane count")

    @property
    def parity(self) -> str:
        return "odd" if self.winding % 2 else "even"


class _UF:
    def __init__(self):
        self.parent: Dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        self.parent[self.find(x)] = self.find(y)


# Which strand is over at the two clasp sites.  Fixed so that the pairing of two
# long arcs is the unknot with the framing factor A^-6 (see the test-suite).
_V2_OVER_AT_NORTH = True


def close(t: TangleDiagram, c: Union[ClosureSpec, TangleDiagram]) -> LinkDiagram:
    """Glue ``t`` (first solid torus) to a complementary tangle (second solid torus).

    The two solid tori are drawn as clasped annuli.  Every strand through the
    cut of ``t`` meets every strand through the cut of the complement twice
    (once over, once under); the marked points are joined crosswise
    (P1 to P2' and P2 to P1') by arcs running outside both annuli.
    """
    comp = c.complement if isinstance(c, ClosureSpec) else c
    cut1 = cut_layout(t)
    cut2 = cut_layout(comp)
    k, m = len(cut1), len(cut2)
    uf = _UF()
    crossings_out: List[Tuple] = []

    def occ(side, vs):
        return (side, vs[0], vs[1])

    def add_side(side: str, d: TangleDiagram, cut: List[CutStrand]):
        (verts,) = d._graph()
        nx = len(d.crossings)
        cut_edges = {s.edge for s in cut}
        where: Dict[int, List[Tuple[int, int]]] = {}
        for v, slots in enumerate(verts[:nx]):
            for s, e in enumerate(slots):
                where.setdefault(e, []).append((v, s))
        where.setdefault(d.p1, []).append((nx, 1))
        where.setdefault(d.p2, []).append((nx + 1, 1))
        for e, occs in where.items():
            if e in cut_edges:
                continue
            a, b = occs
            uf.union(occ(side, a), occ(side, b))
        for v, slots in enumerate(verts[:nx]):
            crossings_out.append(tuple(occ(side, (v, s)) for s in range(4)))
        return nx

    n1 = add_side("1", t, cut1)
    n2 = add_side("2", comp, cut2)
    # marked points, joined crosswise
    uf.union(("1", n1, 1), ("2", n2 + 1, 1))
    uf.union(("1", n1 + 1, 1), ("2", n2, 1))

    def vseg(i, u):
        return ("v", i, u)

    def hseg(j, u):
        return ("h", j, u)

    for i, s in enumerate(cut1, start=1):
        bottom, top = vseg(i, 0), vseg(i, 2 * m)
        if s.ccw_end is None:
            uf.union(bottom, top)
        else:
            uf.union(bottom, occ("1", s.cw_end))
            uf.union(top, occ("1", s.ccw_end))
    for j, s in enumerate(cut2, start=1):
        start, end = hseg(j, 0), hseg(j, 2 * k)
        if s.ccw_end is None:
            uf.union(start, end)
        else:
            uf.union(start, occ("2", s.cw_end))
            uf.union(end, occ("2", s.ccw_end))
    for i in range(1, k + 1):
        for j in range(1, m + 1):
            # north site: horizontal strand j heading west over/under vertical strand i
            E, W = hseg(j, k - i), hseg(j, k - i + 1)
            S, N = vseg(i, m + j - 1), vseg(i, m + j)
            crossings_out.append((S, E, N, W) if _V2_OVER_AT_NORTH else (W, S, E, N))
            # south site
            W, E = hseg(j, k + i - 1), hseg(j, k + i)
            S, N = vseg(i, m - j), vseg(i, m - j + 1)
            crossings_out.append((W, S, E, N) if _V2_OVER_AT_NORTH else (S, E, N, W))

    labels: Dict = {}
    out = []
    for cr in crossings_out:
        row = []
        for x in cr:
            r = uf.find(x)
            if r not in labels:
                labels[r] = len(labels) + 1
            row.append(labels[r])
        out.append(tuple(row))
    # components that never meet a crossing are free circles
    all_nodes = list(uf.parent)
    roots = {uf.find(x) for x in all_nodes}
    free = sum(1 for r in roots if r not in labels)
    # contractible free circles of either side never entered the union-find
    free += sum(1 for e, kk in t.membranes if e in t.free_edges() and kk % 2 == 0)
    free += sum(1 for e, kk in comp.membranes if e in comp.free_edges() and kk % 2 == 0)
    return LinkDiagram(tuple(out), free)


# ---------------------------------------------------------------------------------
# Building annular tangles from layer words
# ---------------------------------------------------------------------------------

Layer = Tuple


def build_annular_tangle(width: int, word: Sequence[Layer]) -> TangleDiagram:
    """Build an annular tangle by stacking layers counterclockwise from the cut.

    ``width`` strands cross the cut; strand positions are numbered from the
    inner boundary outwards.  Layers:

    * ``("x", p, s)`` -- crossing of the strands at positions p and p+1.
      With s = +1 the strand moving outwards passes over, with s = -1 under.
    * ``("cup", p)`` -- a new turning arc occupying positions p and p+1.
    * ``("cap", p)`` -- the strands at positions p and p+1 are joined.
    * ``("P1",)`` / ``("P2",)`` -- the outermost strand starts at P1 / ends
      at P2 (for P2, or starts for P1).  P1 must come before P2.

    After the last layer exactly ``width`` strands must remain; the one at
    position r continues through the cut into position r at the start.
    """
    uf = _UF()
    fresh = itertools.count()
    start = [("seg", next(fresh)) for _ in range(width)]
    current = list(start)
    xs: List[Tuple] = []
    p_edge: Dict[str, Tuple] = {}
    for layer in word:
        kind = layer[0]
        if kind == "x":
            _, p, s = layer
            if not 0 <= p < len(current) - 1:
                raise MalformedDiagram(f"crossing position {p} out of range")
            sw, nw = current[p], current[p + 1]
            se, ne = ("seg", next(fresh)), ("seg", next(fresh))
            # positions grow outwards and layers run counterclockwise, so the
            # counterclockwise order around the crossing is SW, NW, NE, SE
            if s > 0:
                xs.append((nw, ne, se, sw))
            else:
                xs.append((sw, nw, ne, se))
            current[p], current[p + 1] = se, ne
        elif kind == "cup":
            p = layer[1]
            if not 0 <= p <= len(current):
                raise MalformedDiagram(f"cup position {p} out of range")
            seg = ("seg", next(fresh))
            current[p:p] = [seg, seg]
        elif kind == "cap":
            p = layer[1]
            if not 0 <= p < len(current) - 1:
                raise MalformedDiagram(f"cap position {p} out of range")
            uf.union(current[p], current[p + 1])
            del current[p : p + 2]
        elif kind in ("P1", "P2"):
            if kind in p_edge:
                raise MalformedDiagram(f"{kind} used twice")
            if kind == "P2" and "P1" not in p_edge:
                raise MalformedDiagram("P1 must precede P2")
            if kind == "P1":
                seg = ("seg", next(fresh))
                current.append(seg)
            else:
                if not current:
                    raise MalformedDiagram("no strand left for P2")
                seg = current.pop()
            p_edge[kind] = seg
        else:
            raise MalformedDiagram(f"unknown layer {layer!r}")
    if set(p_edge) != {"P1", "P2"}:
        raise MalformedDiagram("both P1 and P2 are required")
    if len(current) != width:
        raise MalformedDiagram(f"{len(current)} strands reach the cut, expected {width}")
    for a, b in zip(current, start):
        uf.union(a, b)
    labels: Dict = {}

    def lab(seg):
        r = uf.find(seg)
        if r not in labels:
            labels[r] = len(labels) + 1
        return labels[r]

    crossings = tuple(tuple(lab(s) for s in x) for x in xs)
    p1, p2 = lab(p_edge["P1"]), lab(p_edge["P2"])
    cut_count: Dict[int, int] = {}
    for seg in start:
        e = lab(seg)
        cut_count[e] = cut_count.get(e, 0) + 1
    membranes = [(lab(seg), 1) for seg in start]
    if any(k > 1 for k in cut_count.values()):
        membranes = list({e: (e, k) for e, k in ((lab(s), cut_count[lab(s)]) for s in start)}.values())
    # contractible circles made of cups and caps only
    used = {e for x in crossings for e in x} | {p1, p2} | set(cut_count)
    for seg in list(uf.parent):
        e = lab(seg)
        if e not in used:
            membranes.append((e, 0))
            used.add(e)
    return TangleDiagram(crossings, p1, p2, tuple(membranes))


def closure_complement(winding: int, twists: int) -> ClosureSpec:
    """A family of complementary tangles: the arc winds ``winding`` times
    (each turn passes over the previous ones) and is twisted ``twists`` times
    against its neighbouring strand."""
    if winding < 0:
        raise ValueError("winding must be non-negative")
    s = 1 if twists >= 0 else -1
    word: List[Layer] = [("P1",)]
    if winding == 0 and twists == 0:
        word.append(("P2",))
    elif winding == 0:
        # the arc is twisted against one leg of a small turning arc
        word.append(("cup", 0))
        word += [("x", 1, s)] * abs(twists)
        word += [("cap", 0), ("P2",)]
    else:
        word += [("x", p, 1) for p in range(winding - 1, -1, -1)]
        word += [("x", winding - 1, s)] * abs(twists)
        word.append(("P2",))
    return ClosureSpec(build_annular_tangle(winding, word), winding)
