"""Rational functions in one variable over F_q or over Laurent coefficients.

Fractions are kept in lowest terms.  Over F_q the denominator is monic; over
Laurent coefficients common content is stripped and the denominator's leading
coefficient is normalised to valuation 0 with constant term 1 (the best exact
analogue of monic when only monomials are invertible).

Local data at a pole (leading coefficients, truncated expansions) is returned
as *constant* rational functions, which keeps everything exact even when the
coefficient ring has inexact inverses.
"""

from __future__ import annotations

from .errors import NotAPthPower, WittramError, ZeroInput
from .fq import Fq
from .laurent import KElem
from .poly import Poly, Ring, kelem_divexact, kelem_gcd

INFINITY = "inf"  # marker for the place at infinity


class RatFunc:
    __slots__ = ("ring", "num", "den")

    def __init__(self, num: Poly, den: Poly, normalize: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.ring = num.ring
        if normalize:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_poly(cls, num: Poly) -> "RatFunc":
        return cls(num, Poly.one(num.ring), normalize=False)

    @classmethod
    def zero(cls, ring: Ring) -> "RatFunc":
        return cls.from_poly(Poly.zero(ring))

    @classmethod
    def one(cls, ring: Ring) -> "RatFunc":
        return cls.from_poly(Poly.one(ring))

    @classmethod
    def x(cls, ring: Ring) -> "RatFunc":
        return cls.from_poly(Poly.x(ring))

    @classmethod
    def const(cls, ring: Ring, c) -> "RatFunc":
        return cls.from_poly(Poly.const(ring, ring.lift(c)))

    # -- queries ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        """The ring element of a constant fraction (requires exact division)."""
        if not self.is_const():
            raise WittramError("not a constant")
        num, den = self.num.coeff(0), self.den.coeff(0)
        if self.ring.laurent:
            if den.is_monomial():
                return num * den.inverse()
            return kelem_divexact(num, den)
        return num * den.inverse()

    # -- arithmetic --------------------------------------------------------------
    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, normalize=False)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return (RatFunc.one(self.ring) / self) ** (-n)
        result = RatFunc.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def frobenius(self) -> "RatFunc":
        return RatFunc(self.num.frobenius(), self.den.frobenius(), normalize=False)

    # -- p-th powers ----------------------------------------------------------------
    def is_pth_power(self) -> bool:
        """True iff the formal derivative vanishes (perfect constant field)."""
        return self.derivative().is_zero()

    def pth_root(self) -> "RatFunc":
        if not self.is_pth_power():
            raise NotAPthPower("formal derivative is nonzero")
        p = self.ring.field.p
        num = self.num * self.den ** (p - 1)
        return RatFunc(num.pth_root(), self.den)

    # -- structure ---------------------------------------------------------------------
    def poly_and_proper(self) -> tuple[Poly, "RatFunc"]:
        """Polynomial part plus a proper fraction (works when den lead is a unit,
        which normalisation guarantees for field coefficients; over Laurent
        coefficients the denominator lead is 1+... and pseudo-steps stay exact
        only when the caller knows the split exists, so we use the unit path
        if possible and otherwise return a zero polynomial part)."""
        if self.num.degree() < self.den.degree():
            return Poly.zero(self.ring), self
        if self.ring.is_unit(self.den.lead()) or not self.ring.laurent:
            q, r = self.num.divmod(self.den)
            return q, RatFunc(r, self.den)
        # Laurent, non-unit lead: division by a 1+... lead is still exact
        # term by term only if each leading ratio divides; fall back to a
        # pseudo-quotient check.
        try:
            q = _laurent_divmod_quotient(self.num, self.den)
        except WittramError:
            return Poly.zero(self.ring), self
        return q, RatFunc(self.num - q * self.den, self.den)

    def pole_order(self, point) -> int:
        """Pole order at a finite ring point, or at INFINITY."""
        if point is INFINITY:
            return max(0, self.num.degree() - self.den.degree())
        if self.is_zero():
            return 0
        order = 0
        den = self.den
        while _zero(den.eval(point)):
            den = _deflate(den, point)
            order += 1
        return order

    def pole_support(self, require_all: bool = True) -> list:
        """Finite poles (ring points) plus INFINITY when there is a polynomial
        part of positive degree."""
        pts = [r for r, _ in self.den.roots(require_all=require_all)]
        if self.num.degree() > self.den.degree():
            pts.append(INFINITY)
        return pts

    def eval(self, point) -> "RatFunc":
        """Value at a finite point as a constant fraction (exact)."""
        dv = self.den.eval(point)
        if _zero(dv):
            raise ZeroDivisionError("evaluation at a pole")
        nv = self.num.eval(point)
        return RatFunc(Poly.const(self.ring, nv), Poly.const(self.ring, dv))

    def compose_shift(self, c) -> "RatFunc":
        """f(X + c)."""
        return RatFunc(self.num.compose_shift(c), self.den.compose_shift(c), normalize=False)

    def local_series(self, point, count: int) -> list["RatFunc"]:
        """First `count` coefficients a_0, a_1, ... of the expansion of
        f * (X-point)^m  in powers of s = X - point, where m = pole order.

        The coefficient of (X-point)^(-j) in f is a_{m-j}.  Coefficients are
        constant fractions.
        """
        m = self.pole_order(point)
        num = self.num.compose_shift(point)
        den = self.den.compose_shift(point)
        for _ in range(m):
            den = Poly(self.ring, {d - 1: c for d, c in den.coeffs.items() if d >= 1})
        # now den(0) != 0; series of num/den up to s^(count-1), as fractions
        d0 = den.coeff(0)
        coeffs: list[RatFunc] = []
        # a_k = (num_k - sum_{j=1..k} den_j * a_{k-j}) / den_0
        for k in range(count):
            acc_num = Poly.const(self.ring, num.coeff(k))
            acc = RatFunc(acc_num, Poly.one(self.ring), normalize=False)
            for j in range(1, k + 1):
                dj = den.coeff(j)
                if _zero(dj):
                    continue
                acc = acc - RatFunc.const(self.ring, dj) * coeffs[k - j]
            coeffs.append(acc / RatFunc.const(self.ring, d0))
        return coeffs

    def leading_at(self, point) -> "RatFunc":
        """Leading local coefficient at a pole: lim (X-point)^m * f."""
        m = self.pole_order(point)
        if m == 0:
            raise WittramError("not a pole")
        return self.local_series(point, 1)[0]

    # -- comparisons ---------------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc) or self.ring != other.ring:
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num!r} / {self.den!r})"


def _zero(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else not c


def _deflate(poly: Poly, point) -> Poly:
    """poly / (X - point), assuming point is a root (synthetic division)."""
    n = poly.degree()
    q = [poly.ring.zero()] * n
    rem = poly.coeff(n)
    for i in range(n - 1, -1, -1):
        q[i] = rem
        rem = poly.coeff(i) + rem * point
    if not _zero(rem):
        raise WittramError("deflation at a non-root")
    return Poly.from_coeff_list(poly.ring, q)


def _laurent_divmod_quotient(num: Poly, den: Poly) -> Poly:
    q: dict = {}
    r = num
    db = den.degree()
    lead = den.lead()
    while not r.is_zero() and r.degree() >= db:
        d = r.degree() - db
        c = kelem_divexact(r.lead(), lead)
        q[d] = c
        r = r - den.shift(d).scale(c)
    return Poly(num.ring, q)


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    ring = num.ring
    if num.is_zero():
        return num, Poly.one(ring)
    if not ring.laurent:
        g = num.gcd(den)
        if g.degree() > 0:
            num = num.divexact(g)
            den = den.divexact(g)
        inv = den.lead().inverse()
        return num.scale(inv), den.scale(inv)
    # Laurent coefficients: strip common content, remove the X-gcd, then
    # normalise the denominator lead by a monomial unit.
    num_p, cn = num.primitive()
    den_p, cd = den.primitive()
    cg = kelem_gcd(cn, cd)
    cn = kelem_divexact(cn, cg)
    cd = kelem_divexact(cd, cg)
    g = num_p.gcd(den_p)
    if g.degree() > 0:
        num_p = num_p.divexact(g)
        den_p = den_p.divexact(g)
    num = num_p.scale(cn)
    den = den_p.scale(cd)
    lead = den.lead()
    v = lead.valuation()
    unit = KElem.monomial(lead.terms[v].inverse(), -v)
    return num.scale(unit), den.scale(unit)


# ---------------------------------------------------------------------------
# Field-coefficient partial fractions (the classical, fully split case)


def partial_fractions(f: RatFunc):
    """Decompose f over F_q: polynomial part plus, for each finite pole P,
    the list [c_1, ..., c_m] with c_i the coefficient of (x-P)^(-i).

    Requires the denominator to split into linear factors over the field.
    """
    if f.ring.laurent:
        raise WittramError("partial fractions over t-Laurent coefficients "
                           "are reserved for the local-expansion API")
    poly_part, proper = f.poly_and_proper()
    poles = {}
    for point, mult in proper.den.roots(require_all=True):
        series = proper.local_series(point, mult)
        cs = []
        for i in range(1, mult + 1):
            c = series[mult - i]
            cs.append(c.const_value() if not c.is_zero() else f.ring.zero())
        poles[point] = cs
    return poly_part, poles


def recombine(ring: Ring, poly_part: Poly, poles: dict) -> RatFunc:
    """Inverse of partial_fractions, for round-trip checking."""
    total = RatFunc.from_poly(poly_part)
    one = Poly.one(ring)
    for point, cs in poles.items():
        lin = Poly(ring, {1: ring.one(), 0: -ring.lift(point)})
        for i, c in enumerate(cs, start=1):
            if _zero(c):
                continue
            total = total + RatFunc(Poly.const(ring, ring.lift(c)), lin ** i)
    return total
