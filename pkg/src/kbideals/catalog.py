"""Built-in tangles and the reference values they are expected to reproduce.

Diagrams are stored in the package ``data`` directory in the diagram text
format.  Each entry records the reference graph-basis coefficients, the
even/odd bracket ideals and their contractions under A -> omega, together
with a short label for each group of reference values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, FrozenSet, List, Optional, Tuple

from .diagram import LinkDiagram, TangleDiagram, parse_diagram
from .errors import UnknownName
from .ideals import LaurentIdeal
from .laurent import LaurentPoly, RationalFunction, delta
from .pairing import GraphCoeffs

__all__ = ["CatalogEntry", "load", "names", "read_data", "TANGLE_NAMES"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    diagram: TangleDiagram
    coefficients: Optional[GraphCoeffs] = None
    even_ideal: Optional[LaurentIdeal] = None
    odd_ideal: Optional[LaurentIdeal] = None
    # when only the unordered pair {even, odd} is pinned down
    ideal_pair: Optional[Tuple[LaurentIdeal, LaurentIdeal]] = None
    full_trivial: Optional[bool] = None
    contractions: Dict[str, int] = field(default_factory=dict)
    contraction_pair: Optional[FrozenSet[int]] = None
    closure: Optional[LinkDiagram] = None
    closure_bracket: Optional[LaurentPoly] = None
    closure_determinant: Optional[int] = None
    sources: Dict[str, str] = field(default_factory=dict)


def read_data(filename: str) -> str:
    return resources.files("kbideals").joinpath("data", filename).read_text(encoding="utf-8")


def _rf(text: str) -> RationalFunction:
    return RationalFunction.parse(text)


def _ideal(*gens: str) -> LaurentIdeal:
    return LaurentIdeal(list(gens))


_COEFF_SOURCE = "reference graph-basis coefficients"
_IDEAL_SOURCE = "reference even/odd bracket ideals"
_OMEGA_SOURCE = "reference omega contractions"

_ALIASES = {
    "krebes_a": "krebes_A",
    "a": "krebes_A",
    "\U0001d49c": "krebes_A",
    "tangle_d": "tangle_D",
    "d": "tangle_D",
    "\U0001d49f": "tangle_D",
    "tangle_h": "tangle_H",
    "h": "tangle_H",
    "ℋ": "tangle_H",
    "d_unknot_complement": "d_unknot_complement",
}

TANGLE_NAMES = ("krebes_A", "tangle_D", "tangle_H")


def names() -> List[str]:
    return list(TANGLE_NAMES) + ["d_unknot_complement"]


def _canonical(name: str) -> str:
    key = _ALIASES.get(name.strip().lower()) or _ALIASES.get(name.strip())
    if key is None:
        raise UnknownName(name)
    return key


def load(name: str) -> CatalogEntry:
    """Return the catalog entry for ``name`` (case-insensitive; script letters accepted)."""
    return _load(_canonical(name))


@lru_cache(maxsize=None)
def _load(key: str) -> CatalogEntry:
    diagram = parse_diagram(read_data(f"{key}.tangle"))
    if key == "krebes_A":
        return CatalogEntry(
            name=key,
            description="genus-1 tangle with trivial even and non-trivial odd ideal",
            diagram=diagram,
            coefficients=GraphCoeffs(
                {
                    (0, 1): _rf("(-1 - A^8 + A^12)/(1 + A^4)"),
                    (2, 1): _rf("(-1 + A^4 + A^12)/(A^6 + A^10 + A^14)"),
                    (2, 3): _rf("1"),
                }
            ),
            even_ideal=_ideal("1"),
            odd_ideal=_ideal("9", "4 + A^4"),
            full_trivial=True,
            contractions={"odd": 3},
            sources={"coefficients": _COEFF_SOURCE, "ideals": _IDEAL_SOURCE, "contractions": _OMEGA_SOURCE},
        )
    if key == "tangle_D":
        return CatalogEntry(
            name=key,
            description="genus-1 tangle with non-trivial even and trivial odd ideal",
            diagram=diagram,
            coefficients=GraphCoeffs(
                {
                    (0, 1): _rf("(1 - A^4 - A^12)/(A^2 + A^6)"),
                    (2, 1): _rf("(1 + A^8 - A^12)/(A^8 + A^12 + A^16)"),
                    (2, 3): _rf("A^2"),
                }
            ),
            even_ideal=_ideal("-9", "-2 + A^4"),
            odd_ideal=_ideal("1"),
            full_trivial=True,
            contractions={"even": 3},
            sources={"coefficients": _COEFF_SOURCE, "ideals": _IDEAL_SOURCE, "contractions": _OMEGA_SOURCE},
        )
    if key == "tangle_H":
        return CatalogEntry(
            name=key,
            description="genus-1 tangle with non-trivial even and odd ideals but trivial full ideal",
            diagram=diagram,
            coefficients=GraphCoeffs(
                {
                    (0, 1): _rf("(-1 + 2*A^4 - 3*A^8 + 2*A^12 - 3*A^16 + 2*A^20 - A^24 + A^28)/(A^12 + A^16)"),
                    (2, 1): _rf("(-1 + A^4 - 2*A^8 + 3*A^12 - 2*A^16 + 3*A^20 - 2*A^24 + A^28)/(A^18 + A^22 + A^26)"),
                    (2, 3): _rf("A^4"),
                }
            ),
            ideal_pair=(_ideal("5", "1 + A^4"), _ideal("9", "4 + A^4")),
            full_trivial=True,
            contraction_pair=frozenset({3, 5}),
            sources={
                "coefficients": _COEFF_SOURCE,
                "ideals": "reference unordered ideal pair; the even/odd attachment is decided by computation",
                "contractions": _OMEGA_SOURCE,
            },
        )
    closure = parse_diagram(read_data("d_unknot_closure.link"))
    return CatalogEntry(
        name=key,
        description="complementary tangle closing tangle_D to an unknot (odd closure)",
        diagram=diagram,
        closure=closure,
        closure_bracket=delta(),
        closure_determinant=1,
        sources={"closure": "reference unknotted odd closure of tangle D"},
    )
