"""Shared test helpers: diagram generators and independent oracles."""

from __future__ import annotations

import random
from typing import List, Sequence, Tuple

import sympy

from kbideals.diagram import LinkDiagram, build_annular_tangle
from kbideals.laurent import LaurentPoly

A_SYM = sympy.Symbol("A")


def to_sympy(p: LaurentPoly):
    return sum((c * A_SYM**e for e, c in p.items()), sympy.Integer(0))


def from_sympy(expr) -> LaurentPoly:
    expr = sympy.expand(expr)
    out = {}
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        c, rest = term.as_coeff_Mul()
        e = 0 if rest == 1 else sympy.degree(rest, A_SYM) if rest.is_polynomial(A_SYM) else -sympy.degree(1 / rest, A_SYM)
        out[int(e)] = out.get(int(e), 0) + int(c)
    return LaurentPoly(out)


def braid_closure(strands: int, word: Sequence[int]) -> LinkDiagram:
    """Planar closure of a braid word (letter +-k is sigma_k^{+-1}, 1-based).

    Strands run upwards.  For sigma_k^{+1} the strand from bottom-left to
    top-right passes over.  Crossings list their edges counter-clockwise
    starting at the incoming under-strand.
    """
    cur = list(range(1, strands + 1))
    start = list(cur)
    nxt = strands + 1
    crossings: List[Tuple[int, int, int, int]] = []
    for letter in word:
        k = abs(letter) - 1
        if not 0 <= k < strands - 1:
            raise ValueError("generator out of range")
        sw, se = cur[k], cur[k + 1]
        nw, ne = nxt, nxt + 1
        nxt += 2
        if letter > 0:  # under-strand SE -> NW
            crossings.append((se, ne, nw, sw))
        else:  # under-strand SW -> NE
            crossings.append((sw, se, ne, nw))
        cur[k], cur[k + 1] = nw, ne
    # identify the top edge of each strand with its bottom edge
    rename = {}
    for top, bottom in zip(cur, start):
        rename[top] = bottom
    crossings = [tuple(rename.get(e, e) for e in x) for x in crossings]
    used = {e for x in crossings for e in x}
    free = [e for e in start if e not in used]
    return LinkDiagram(crossings, len(free))


def fox_determinant(d: LinkDiagram) -> int:
    """Determinant from the Fox colouring matrix: |any (n-1)-minor|.

    Over-strand edges (positions 2 and 4) belong to one arc; the relation
    at a crossing is 2*over - under_in - under_out.
    """
    if d.free_loops:
        return 0
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, c, dd in d.crossings:
        for e in (a, b, c, dd):
            find(e)
        parent[find(b)] = find(dd)
    arcs = sorted({find(e) for e in parent})
    index = {r: i for i, r in enumerate(arcs)}
    n = len(arcs)
    if n == 0:
        return 1
    if n > len(d.crossings):
        # some component never passes under: it lifts off, the link splits
        return 0
    rows = []
    for a, b, c, dd in d.crossings:
        row = [0] * n
        row[index[find(b)]] += 2
        row[index[find(a)]] -= 1
        row[index[find(c)]] -= 1
        rows.append(row)
    m = sympy.Matrix(rows)
    if n == 1:
        return 1
    return abs(int(m[1:, 1:].det()))


def random_annular_word(rng: random.Random, width: int, length: int):
    """A random layer word for build_annular_tangle with the given boundary width."""
    cur = width
    word = []
    p1 = p2 = False
    for _ in range(length):
        opts = []
        if cur >= 2:
            opts += ["x", "x", "x", "cap"]
        opts.append("cup")
        if not p1:
            opts.append("P1")
        elif not p2 and cur > 0:
            opts.append("P2")
        k = rng.choice(opts)
        if k == "x":
            word.append(("x", rng.randrange(cur - 1), rng.choice((1, -1))))
        elif k == "cap":
            word.append(("cap", rng.randrange(cur - 1)))
            cur -= 2
        elif k == "cup":
            word.append(("cup", rng.randrange(cur + 1)))
            cur += 2
        elif k == "P1":
            word.append(("P1",))
            p1 = True
            cur += 1
        else:
            word.append(("P2",))
            p2 = True
            cur -= 1
    if not p1:
        word.append(("P1",))
        cur += 1
    if not p2:
        if cur == 0:
            word.append(("cup", 0))
            cur += 2
        word.append(("P2",))
        cur -= 1
    while cur > width:
        word.append(("cap", rng.randrange(cur - 1)))
        cur -= 2
    while cur < width:
        word.append(("cup", rng.randrange(cur + 1)))
        cur += 2
    return word


def random_tangle(seed: int, max_width: int = 2, max_len: int = 6):
    rng = random.Random(seed)
    w = rng.randrange(max_width + 1)
    return build_annular_tangle(w, random_annular_word(rng, w, rng.randrange(1, max_len + 1)))


def bounded_combination_search(gens: Sequence[LaurentPoly], f: LaurentPoly, shifts: int) -> bool:
    """Is f an integer combination of A^k * g with |k| <= shifts?

    Exhaustive over that bounded search space: the candidate combinations
    form a Z-lattice, which is put in echelon form with integer row
    operations; f is then reduced pivot by pivot.
    """
    rows = []
    for g in gens:
        for k in range(-shifts, shifts + 1):
            rows.append(dict(g.shift(k).items()))
    return lattice_contains(rows, dict(f.items()))


def lattice_contains(rows: Sequence[dict], target: dict) -> bool:
    """Is ``target`` an integer combination of ``rows`` (sparse integer vectors)?"""
    cols = sorted({e for r in rows for e in r} | set(target))
    pivots = []
    remaining = [dict(r) for r in rows if r]
    for c in cols:
        active = [r for r in remaining if r.get(c, 0)]
        rest = [r for r in remaining if not r.get(c, 0)]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            p = active[0]
            nxt = [p]
            for r in active[1:]:
                q = r[c] // p[c]
                r = _axpy(r, p, -q)
                (nxt if r.get(c, 0) else rest).append(r)
            active = nxt
        if active:
            pivots.append((c, active[0]))
        remaining = [r for r in rest if r]
    target = dict(target)
    for c, p in pivots:
        v = target.get(c, 0)
        if v % p[c]:
            return False
        if v:
            target = _axpy(target, p, -(v // p[c]))
    return not any(target.values())


def _axpy(r: dict, p: dict, q: int) -> dict:
    out = dict(r)
    for e, v in p.items():
        out[e] = out.get(e, 0) + q * v
        if not out[e]:
            del out[e]
    return out


def random_small_ideal(rng: random.Random):
    """Two or three generators: small integers and low-degree polynomials."""
    gens = []
    for _ in range(rng.randrange(2, 4)):
        if rng.random() < 0.4:
            gens.append(LaurentPoly.const(rng.randrange(2, 13)))
        else:
            deg = rng.randrange(1, 4)
            coeffs = {e: rng.randrange(-4, 5) for e in range(deg + 1)}
            coeffs[deg] = rng.choice((1, -1, 2))
            gens.append(LaurentPoly(coeffs).shift(rng.randrange(-2, 3)))
    return [g for g in gens if g] or [LaurentPoly.const(7)]
