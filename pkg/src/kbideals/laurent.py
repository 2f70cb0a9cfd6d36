"""Exact arithmetic in Z[A, A^-1] and its field of fractions.

A ``LaurentPoly`` is an immutable sparse map ``exponent -> int`` with zero
coefficients elided.  Text form is ascending in the exponent, e.g.
``-1 + 4*A^4 + 9*A^-2`` prints as ``9*A^-2 - 1 + 4*A^4``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

__all__ = [
    "LaurentPoly",
    "RationalFunction",
    "NotDivisible",
    "A",
    "ONE",
    "ZERO",
    "delta",
    "phi",
    "reduce_by_delta",
    "poly_gcd",
]


class NotDivisible(ArithmeticError):
    """Raised when an exact Laurent division leaves a remainder."""


Scalar = Union[int, "LaurentPoly"]


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            if c:
                acc[e] = acc.get(e, 0) + c
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e]}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> "LaurentPoly":
        # terms already sorted and free of zeros
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw({exponent: coeff} if coeff else {})

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls.monomial(0, c)

    # -- structure -----------------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, e: int) -> int:
        return self._terms.get(e, 0)

    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return next(iter(self._terms))

    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return next(reversed(self._terms))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """True for +-A^k, the units of Z[A, A^-1]."""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._terms.get(0, 0)

    # -- arithmetic ----------------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly(acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return LaurentPoly._raw({e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        if len(other._terms) == 1:
            (f, d), = other._terms.items()
            return LaurentPoly._raw({e + f: c * d for e, c in self._terms.items()})
        if len(self._terms) == 1:
            return other * self
        acc: dict[int, int] = {}
        for e, c in self._terms.items():
            for f, d in other._terms.items():
                acc[e + f] = acc.get(e + f, 0) + c * d
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if self.is_unit():
                (e, c), = self._terms.items()
                return LaurentPoly.monomial(e * n, c ** (-n))
            raise ValueError("negative power of a non-unit Laurent polynomial")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by A^k."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def bar(self) -> "LaurentPoly":
        """The involution A -> A^-1."""
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    def subs_power(self, k: int) -> "LaurentPoly":
        """Substitute A -> A^k."""
        return LaurentPoly({e * k: c for e, c in self._terms.items()})

    def __call__(self, value):
        """Evaluate at an integer, Fraction or any ring element supporting ** and +."""
        total = 0
        for e, c in self._terms.items():
            total += c * (value ** e if e >= 0 else Fraction(1, value ** (-e)) if isinstance(value, int) else value ** e)
        return total

    def content(self) -> int:
        from math import gcd
        g = 0
        for c in self._terms.values():
            g = gcd(g, c)
        return g

    # -- division ------------------------------------------------------------------

    def divmod_low(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Long division from the lowest exponent up.

        Returns (q, r) with self = q*other + r.  r is zero exactly when the
        division is exact in Z[A, A^-1].
        """
        if not other._terms:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self._terms:
            return ZERO, ZERO
        lo_d = other.min_exp()
        span_d = other.max_exp() - lo_d
        lead = other._terms[lo_d]
        rem = dict(self._terms)
        quot: dict[int, int] = {}
        top = self.max_exp()
        while rem:
            lo = min(rem)
            if lo + span_d > top:
                break
            c = rem[lo]
            if c % lead:
                break
            q = c // lead
            shift = lo - lo_d
            quot[shift] = q
            for e, d in other._terms.items():
                k = e + shift
                v = rem.get(k, 0) - q * d
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return LaurentPoly(quot), LaurentPoly(rem)

    def exact_div(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        q, r = self.divmod_low(other)
        if r:
            raise NotDivisible(f"{self} is not divisible by {other}")
        return q

    def divides(self, other: "LaurentPoly") -> bool:
        return not other.divmod_low(self)[1]

    # -- comparison / hashing -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def sort_key(self):
        return tuple(self._terms.items())

    # -- text ----------------------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(self._terms.items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            elif mag == 1:
                body = f"A^{e}"
            else:
                body = f"{mag}*A^{e}"
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __repr__(self):
        return f"LaurentPoly({self})"

    _TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*(\*)?\s*(A(?:\^\(?(-?\d+)\)?)?)?\s*")

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Parse the canonical text form (also accepts any term order)."""
        s = text.strip()
        if not s:
            raise ValueError("empty polynomial text")
        pos = 0
        acc: dict[int, int] = {}
        first = True
        while pos < len(s):
            m = cls._TERM.match(s, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse Laurent polynomial at {s[pos:]!r}")
            sign, num, star, mono, exp = m.groups()
            if sign is None and not first:
                raise ValueError(f"missing operator before {s[pos:]!r}")
            if num is None and mono is None:
                raise ValueError(f"empty term in {text!r}")
            if star and (num is None or mono is None):
                raise ValueError(f"malformed product in {text!r}")
            c = int(num) if num is not None else 1
            if sign == "-":
                c = -c
            e = 0
            if mono is not None:
                e = int(exp) if exp is not None else 1
            acc[e] = acc.get(e, 0) + c
            pos = m.end()
            first = False
        return cls(acc)


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
A = LaurentPoly._raw({1: 1})


def delta() -> LaurentPoly:
    """Value of a trivial circle, -A^2 - A^-2."""
    return _DELTA


_DELTA = LaurentPoly({2: -1, -2: -1})


@lru_cache(maxsize=None)
def phi(k: int) -> LaurentPoly:
    """-A^(2k+2) - A^(-2k-2); the eigenvalue of a meridian loop on a k-colored strand."""
    if k < 0:
        raise ValueError(f"phi needs k >= 0, got {k}")
    return LaurentPoly({2 * k + 2: -1, -2 * k - 2: -1})


def reduce_by_delta(p: LaurentPoly) -> LaurentPoly:
    """Reduced bracket: exact quotient by delta."""
    try:
        return p.exact_div(_DELTA)
    except NotDivisible:
        raise NotDivisible(f"{p} is not divisible by delta") from None


# -- univariate gcd on the polynomial part --------------------------------------------


def _to_dense(p: LaurentPoly) -> list[int]:
    lo = p.min_exp()
    out = [0] * (p.max_exp() - lo + 1)
    for e, c in p.items():
        out[e - lo] = c
    return out


def _primitive(v: list[int]) -> list[int]:
    from math import gcd
    g = 0
    for c in v:
        g = gcd(g, c)
    if g == 0:
        return v
    if v[-1] < 0:
        g = -g
    return [c // g for c in v]


def _dense_gcd(a: list[int], b: list[int]) -> list[int]:
    # primitive pseudo-remainder sequence over Z, coefficient lists low->high
    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = trim(_primitive(a[:])), trim(_primitive(b[:]))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = a[:]
        lb = b[-1]
        while len(r) >= len(b):
            lr = r[-1]
            k = len(r) - len(b)
            r = [c * lb for c in r]
            for i, c in enumerate(b):
                r[i + k] -= lr * c
            trim(r)
            if not r:
                break
        a, b = b, trim(_primitive(r)) if r else []
    return _primitive(a)


def poly_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Primitive gcd in Z[A, A^-1], normalised to lowest exponent 0 and positive top coefficient."""
    if not p:
        return _normalize_unit(q)
    if not q:
        return _normalize_unit(p)
    from math import gcd
    g = _dense_gcd(_to_dense(p), _to_dense(q))
    cont = gcd(p.content(), q.content())
    return LaurentPoly({i: c * cont for i, c in enumerate(g) if c})


def _normalize_unit(p: LaurentPoly) -> LaurentPoly:
    if not p:
        return p
    p = p.shift(-p.min_exp())
    return -p if p.coeff(p.max_exp()) < 0 else p


class RationalFunction:
    """Element of Q(A) with Laurent numerator and denominator, kept in lowest terms.

    The denominator is normalised to lowest exponent 0 with positive top
    coefficient, so equal values have equal representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Scalar, den: Scalar = 1, *, _reduced: bool = False):
        num = LaurentPoly._coerce(num)
        den = LaurentPoly._coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if not num:
                den = ONE
            else:
                g = poly_gcd(num, den)
                num = num.exact_div(g)
                den = den.exact_div(g)
                k = den.min_exp()
                num, den = num.shift(-k), den.shift(-k)
                if den.coeff(den.max_exp()) < 0:
                    num, den = -num, -den
        self.num = num
        self.den = den

    @staticmethod
    def _coerce(x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, (int, LaurentPoly)):
            return RationalFunction(x, 1, _reduced=True) if isinstance(x, int) or True else x
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num ** n, self.den ** n, _reduced=True)

    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_laurent(self) -> bool:
        return self.den.is_unit()

    def to_laurent(self) -> LaurentPoly:
        """Clear to a Laurent polynomial; raises NotDivisible if not integral."""
        return self.num.exact_div(self.den)

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        if self.den.is_unit():
            return str(self.to_laurent())
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"

    @classmethod
    def parse(cls, text: str) -> "RationalFunction":
        text = text.strip()
        depth = 0
        for i, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "/" and depth == 0:
                num, den = text[:i].strip(), text[i + 1:].strip()
                return cls(LaurentPoly.parse(num.strip("()")), LaurentPoly.parse(den.strip("()")))
        return cls(LaurentPoly.parse(text.strip("()")))
