"""Kauffman bracket skein modules of genus-1 tangles and their determinant ideals.

Submodules:

* :mod:`kbideals.laurent`     -- Laurent polynomials in A and rational functions.
* :mod:`kbideals.recoupling`  -- Temperley-Lieb recoupling: Jones-Wenzl idempotents, theta, tet.
* :mod:`kbideals.diagram`     -- link/tangle diagrams, bracket evaluation, closures.
* :mod:`kbideals.bases`       -- the x/y and graph bases of the relative skein module.
* :mod:`kbideals.pairing`     -- the Hopf pairing and graph-basis coefficients.
* :mod:`kbideals.ideals`      -- ideals in Z[A, A^-1], omega contraction, determinants.
* :mod:`kbideals.catalog`     -- built-in tangles with reference values.
"""

from __future__ import annotations

from .laurent import LaurentPoly, RationalFunction, delta, phi
from .diagram import (
    ClosureSpec,
    LinkDiagram,
    SkeinVector,
    TangleDiagram,
    close,
    closure_complement,
    kauffman_bracket,
    parse_diagram,
    parity_split,
    reduce_tangle,
)
from .bases import GraphIndex, basis_element, graph_element
from .pairing import GraphCoeffs, hopf_pair, solve_graph_coefficients
from .ideals import (
    LaurentIdeal,
    even_ideal,
    full_ideal,
    ideal_equal,
    link_determinant,
    odd_ideal,
    omega_contract,
)

__version__ = "0.1.0"

__all__ = [
    "LaurentPoly",
    "RationalFunction",
    "delta",
    "phi",
    "ClosureSpec",
    "LinkDiagram",
    "SkeinVector",
    "TangleDiagram",
    "close",
    "closure_complement",
    "kauffman_bracket",
    "parse_diagram",
    "parity_split",
    "reduce_tangle",
    "GraphIndex",
    "basis_element",
    "graph_element",
    "GraphCoeffs",
    "hopf_pair",
    "solve_graph_coefficients",
    "LaurentIdeal",
    "even_ideal",
    "full_ideal",
    "ideal_equal",
    "link_determinant",
    "odd_ideal",
    "omega_contract",
    "__version__",
]
