"""Laurent polynomials in t with rational exponents over F_q.

These model elements of k((t)) and its tame extensions k((t^{1/N})): finitely
many terms, exponents in (1/N)Z, valuation nu(t) = 1.  Only monomials have
exact inverses here; general division is confined to the places that can
prove it stays exact (see `ratfunc` for the fraction-free polynomial gcd).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable

from .errors import WittramError
from .fq import Fq, FqElem

_ZERO = Fraction(0)


class KElem:
    """Sum of c_e * t^e with e in (1/N)Z and c_e in F_q."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Fq, terms: dict[Fraction, FqElem] | None = None):
        self.field = field
        self.terms = {e: c for e, c in (terms or {}).items() if not c.is_zero()}

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, field: Fq) -> "KElem":
        return cls(field, {})

    @classmethod
    def const(cls, c: FqElem) -> "KElem":
        return cls(c.field, {_ZERO: c})

    @classmethod
    def t_power(cls, field: Fq, e) -> "KElem":
        return cls(field, {Fraction(e): field.one()})

    @classmethod
    def monomial(cls, c: FqElem, e) -> "KElem":
        return cls(c.field, {Fraction(e): c})

    # -- basic queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def valuation(self) -> Fraction:
        if not self.terms:
            raise WittramError("valuation of zero")
        return min(self.terms)

    def root_denominator(self) -> int:
        n = 1
        for e in self.terms:
            n = lcm(n, e.denominator)
        return n

    def leading_coeff(self) -> FqElem:
        return self.terms[self.valuation()]

    def coeff(self, e) -> FqElem:
        return self.terms.get(Fraction(e), self.field.zero())

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ZERO in self.terms)

    def const_value(self) -> FqElem:
        if not self.is_const():
            raise WittramError("not a constant")
        return self.terms.get(_ZERO, self.field.zero())

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other: "KElem") -> "KElem":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            terms[e] = c if s is None else s + c
        return KElem(self.field, terms)

    def __neg__(self) -> "KElem":
        return KElem(self.field, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "KElem") -> "KElem":
        return self + (-other)

    def __mul__(self, other: "KElem") -> "KElem":
        terms: dict[Fraction, FqElem] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                prod = c1 * c2
                s = terms.get(e)
                terms[e] = prod if s is None else s + prod
        return KElem(self.field, terms)

    def __pow__(self, n: int) -> "KElem":
        if n < 0:
            return self.inverse() ** (-n)
        result = KElem.const(self.field.one())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: FqElem) -> "KElem":
        if c.is_zero():
            return KElem.zero(self.field)
        return KElem(self.field, {e: v * c for e, v in self.terms.items()})

    def shift(self, e) -> "KElem":
        """Multiply by t^e."""
        e = Fraction(e)
        return KElem(self.field, {k + e: v for k, v in self.terms.items()})

    def inverse(self) -> "KElem":
        if not self.is_monomial():
            raise WittramError("only monomials in t are exactly invertible")
        ((e, c),) = self.terms.items()
        return KElem(self.field, {-e: c.inverse()})

    def pth_root(self) -> "KElem":
        """Inverse Frobenius; exponents pick up denominator p as needed."""
        p = self.field.p
        return KElem(self.field, {e / p: c.pth_root() for e, c in self.terms.items()})

    def frobenius(self) -> "KElem":
        p = self.field.p
        return KElem(self.field, {e * p: c ** p for e, c in self.terms.items()})

    # -- reduction helpers -------------------------------------------------------
    def residue(self) -> FqElem:
        """Constant-term coefficient (the image in k for valuation >= 0)."""
        if self.terms and self.valuation() < 0:
            raise WittramError("negative valuation has no residue")
        return self.coeff(0)

    def truncate_above(self, e) -> "KElem":
        e = Fraction(e)
        return KElem(self.field, {k: v for k, v in self.terms.items() if k <= e})

    # -- comparisons ----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, KElem)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.field, frozenset((e, c.coeffs) for e, c in self.terms.items())))

    def __repr__(self) -> str:
        return f"KElem({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            cs = str(c)
            needs_paren = "+" in cs or "*" in cs
            if e == 0:
                parts.append(f"({cs})" if needs_paren else cs)
                continue
            ts = "t" if e == 1 else (f"t^{e}" if e.denominator == 1 else f"t^({e})")
            if cs == "1":
                parts.append(ts)
            else:
                parts.append((f"({cs})" if needs_paren else cs) + "*" + ts)
        return "+".join(parts)


def kelem_sum(field: Fq, items: Iterable[KElem]) -> KElem:
    total = KElem.zero(field)
    for x in items:
        total = total + x
    return total
