"""Command-line interface: ``kbideals VERB INPUT [options]``.

INPUT is a path to a file in the diagram text format or the name of a
catalog entry (``krebes_A``, ``tangle_D``, ``tangle_H``,
``d_unknot_complement``, ``d_unknot_closure``).

Exit status: 0 on success, 2 on a usage or computation error.  ``ideal``
answers a triviality query: 0 when the ideal is NON-TRIVIAL (an obstruction
was found), 1 when it is TRIVIAL.  ``verify`` exits 1 if any check fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from . import errors
from .diagram import (
    ClosureSpec,
    LinkDiagram,
    TangleDiagram,
    close,
    closure_complement,
    kauffman_bracket,
    load_diagram,
    parity_split,
    reduce_tangle,
)

Diagram = Union[LinkDiagram, TangleDiagram]

_ERRORS = (
    errors.Inadmissible,
    errors.BoundExceeded,
    errors.MalformedDiagram,
    errors.InconsistentSystem,
    errors.UnderDetermined,
    errors.NotUnitMultipleOfInteger,
    errors.UnknownName,
)


class _Report:
    """Collects text lines and a JSON mirror for one invocation."""

    def __init__(self) -> None:
        self.lines: List[str] = []
        self.data: Dict[str, object] = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def emit(self, as_json: bool, out=None) -> None:
        out = out or sys.stdout
        if as_json:
            out.write(json.dumps(self.data, indent=2, ensure_ascii=False) + "\n")
        else:
            out.write("\n".join(self.lines) + ("\n" if self.lines else ""))


def resolve_input(spec: str) -> Diagram:
    """Load INPUT either as a file path or as a catalog name."""
    if os.path.exists(spec):
        return load_diagram(spec)
    from . import catalog

    if spec.strip().lower() == "d_unknot_closure":
        entry = catalog.load("d_unknot_complement")
        assert entry.closure is not None
        return entry.closure
    return catalog.load(spec).diagram


def _need_tangle(d: Diagram, verb: str) -> TangleDiagram:
    if not isinstance(d, TangleDiagram):
        raise errors.MalformedDiagram(f"'{verb}' needs a tangle (P1/P2 lines), got a link diagram")
    return d


def _need_link(d: Diagram, verb: str) -> LinkDiagram:
    if not isinstance(d, LinkDiagram):
        raise errors.MalformedDiagram(f"'{verb}' needs a link diagram, got a tangle")
    return d


def _vector_json(v) -> Dict[str, str]:
    return {f"{arc} z^{m}": str(c) for (arc, m), c in v.items()}


# ----------------------------------------------------------------------------- verbs


def cmd_bracket(args, rep: _Report) -> int:
    d = _need_link(resolve_input(args.input), "bracket")
    b = kauffman_bracket(d, max_crossings=args.max_crossings)
    rep.line(str(b))
    rep.data = {"bracket": str(b)}
    return 0


def cmd_reduce(args, rep: _Report) -> int:
    t = _need_tangle(resolve_input(args.input), "reduce")
    v = reduce_tangle(t, max_crossings=args.max_crossings)
    even, odd = parity_split(v)
    rep.line("even part:")
    rep.line(_indent(str(even)))
    rep.line("odd part:")
    rep.line(_indent(str(odd)))
    rep.data = {"even": _vector_json(even), "odd": _vector_json(odd)}
    return 0


def _indent(text: str) -> str:
    return "\n".join("  " + ln for ln in text.splitlines())


def cmd_coeffs(args, rep: _Report) -> int:
    from .pairing import solve_graph_coefficients

    t = _need_tangle(resolve_input(args.input), "coeffs")
    v = reduce_tangle(t, max_crossings=args.max_crossings)
    coeffs = solve_graph_coefficients(v, max_i=args.max_color)
    rep.line(str(coeffs))
    rep.data = {"coefficients": {f"{g.i},{g.eps}": str(c) for g, c in coeffs.items()}}
    return 0


def cmd_ideal(args, rep: _Report) -> int:
    from .ideals import even_ideal, full_ideal, odd_ideal, omega_contract

    t = _need_tangle(resolve_input(args.input), "ideal")
    v = reduce_tangle(t, max_crossings=args.max_crossings)
    ideal = {"even": even_ideal, "odd": odd_ideal, "full": full_ideal}[args.parity](v)
    trivial = ideal.is_trivial()
    verdict = "TRIVIAL" if trivial else "NON-TRIVIAL"
    rep.line(f"{args.parity} ideal: {ideal}")
    rep.line(verdict)
    rep.data = {
        "parity": args.parity,
        "ideal": [str(g) for g in ideal.canonical_generators()] if not trivial else ["1"],
        "trivial": trivial,
        "omega_contraction": omega_contract(ideal),
    }
    return 1 if trivial else 0


def cmd_det(args, rep: _Report) -> int:
    from .ideals import link_determinant

    d = _need_link(resolve_input(args.input), "det")
    n = link_determinant(d, max_crossings=args.max_crossings)
    rep.line(str(n))
    rep.data = {"determinant": n}
    return 0


def cmd_closure(args, rep: _Report) -> int:
    t = _need_tangle(resolve_input(args.input), "closure")
    if args.complement:
        comp: Union[ClosureSpec, TangleDiagram] = _need_tangle(resolve_input(args.complement), "closure")
    else:
        comp = closure_complement(args.winding, args.twists)
    link = close(t, comp)
    text = link.to_text()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        rep.line(f"wrote {args.output} ({link.num_crossings} crossings)")
    else:
        rep.lines.append(text.rstrip("\n"))
    rep.data = {"diagram": text, "crossings": link.num_crossings}
    return 0


def verification_checks() -> List[Tuple[str, Callable[[], Tuple[bool, str]]]]:
    """The golden checks run by ``verify``: (label, thunk -> (ok, detail))."""
    from . import catalog
    from .ideals import even_ideal, full_ideal, ideal_equal, link_determinant, odd_ideal, omega_contract
    from .pairing import solve_graph_coefficients

    checks: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = []

    def coeff_check(name):
        def run():
            e = catalog.load(name)
            got = solve_graph_coefficients(reduce_tangle(e.diagram, max_crossings=10**6))
            ok = dict(got) == dict(e.coefficients)
            return ok, "; ".join(f"c{g}={c}" for g, c in got.items())

        return run

    def ideal_check(name):
        def run():
            e = catalog.load(name)
            v = reduce_tangle(e.diagram, max_crossings=10**6)
            ev, od = even_ideal(v), odd_ideal(v)
            if e.ideal_pair is not None:
                a, b = e.ideal_pair
                ok = (ideal_equal(ev, a) and ideal_equal(od, b)) or (ideal_equal(ev, b) and ideal_equal(od, a))
            else:
                ok = ideal_equal(ev, e.even_ideal) and ideal_equal(od, e.odd_ideal)
            if e.full_trivial is not None:
                ok = ok and full_ideal(v).is_trivial() == e.full_trivial
            return ok, f"even {ev}, odd {od}"

        return run

    def contraction_check(name):
        def run():
            e = catalog.load(name)
            v = reduce_tangle(e.diagram, max_crossings=10**6)
            got = {p: omega_contract(f(v)) for p, f in (("even", even_ideal), ("odd", odd_ideal))}
            if e.contraction_pair is not None:
                ok = frozenset(got.values()) == e.contraction_pair
            else:
                ok = all(got[p] == k for p, k in e.contractions.items())
            return ok, f"even {got['even']}, odd {got['odd']}"

        return run

    for name in catalog.TANGLE_NAMES:
        checks.append((f"{name}: graph coefficients", coeff_check(name)))
        checks.append((f"{name}: even/odd ideals", ideal_check(name)))
        checks.append((f"{name}: omega contractions", contraction_check(name)))

    def closure_check():
        e = catalog.load("d_unknot_complement")
        d = catalog.load("tangle_D").diagram
        link = close(d, e.diagram)
        b = kauffman_bracket(link, max_crossings=10**6)
        det = link_determinant(e.closure, max_crossings=10**6)
        ok = b == e.closure_bracket and det == e.closure_determinant and kauffman_bracket(e.closure) == b
        return ok, f"bracket {b}, det {det}"

    checks.append(("tangle_D: unknotted odd closure", closure_check))
    checks.append(("omega contraction <11, 4 - A^4>", _eleven_check))
    return checks


def _eleven_check() -> Tuple[bool, str]:
    from .ideals import LaurentIdeal, omega_contract

    k = omega_contract(LaurentIdeal(["11", "4 - A^4"]))
    return k == 1, str(k)


def cmd_verify(args, rep: _Report) -> int:
    results = []
    failures = 0
    for label, run in verification_checks():
        try:
            ok, detail = run()
        except _ERRORS as exc:  # a computation error is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        failures += not ok
        rep.line(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        results.append({"check": label, "pass": ok, "detail": detail})
    rep.line(f"{len(results) - failures}/{len(results)} checks passed")
    rep.data = {"checks": results, "passed": failures == 0}
    return 0 if failures == 0 else 1


# ----------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kbideals", description="Kauffman bracket ideals of genus-1 tangles.")
    p.add_argument("--json", action="store_true", help="emit a machine-readable JSON report")
    p.add_argument(
        "--max-crossings",
        type=int,
        default=None,
        help="state-sum crossing bound (default: $KBIDEALS_MAX_CROSSINGS or 24)",
    )
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, fn, help_text, needs_input=True):
        sp = sub.add_parser(name, help=help_text)
        if needs_input:
            sp.add_argument("input", help="diagram file or catalog name")
        sp.set_defaults(func=fn)
        return sp

    verb("bracket", cmd_bracket, "Kauffman bracket of a link diagram")
    verb("reduce", cmd_reduce, "expand a tangle in the crossingless basis, split by parity")
    sp = verb("coeffs", cmd_coeffs, "graph-basis coefficients of a tangle")
    sp.add_argument("--max-color", type=int, default=4, help="largest graph colour to solve for")
    sp = verb("ideal", cmd_ideal, "even/odd/full bracket ideal and triviality verdict")
    sp.add_argument("--parity", choices=("even", "odd", "full"), required=True)
    verb("det", cmd_det, "determinant of a link diagram")
    sp = verb("closure", cmd_closure, "close a tangle with a generated or given complement")
    sp.add_argument("--winding", type=int, default=0)
    sp.add_argument("--twists", type=int, default=0)
    sp.add_argument("--complement", help="complementary tangle (file or catalog name) instead of --winding/--twists")
    sp.add_argument("-o", "--output", help="write the closure diagram to this file")
    verb("verify", cmd_verify, "run the built-in golden checks", needs_input=False)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = _Report()
    try:
        status = args.func(args, rep)
    except errors.DiagramParseError as exc:
        print(f"DiagramParseError: {exc}", file=sys.stderr)
        return 2
    except _ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"{type(exc).__name__}: {msg}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    rep.emit(args.json)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
