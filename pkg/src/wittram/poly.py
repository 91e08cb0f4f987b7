"""Sparse univariate polynomials over F_q or over Laurent coefficients.

One class serves both coefficient rings.  Over F_q all the classical field
algorithms apply; over KElem coefficients (Laurent polynomials in t, which
form a non-field ring whose exact units are the monomials) gcds go through
a primitive pseudo-remainder sequence and divisions are checked exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import DegreeCapExceeded, IrreducibleDenominator, WittramError
from .fq import Fq, FqElem
from .laurent import KElem

DEGREE_CAP = 10 ** 5  # diagnostic only; catches runaway expression growth


class Ring:
    """Coefficient-ring adapter shared by all polynomials over it."""

    def __init__(self, field: Fq, laurent: bool):
        self.field = field
        self.laurent = laurent

    # constants -------------------------------------------------------------
    def zero(self):
        return KElem.zero(self.field) if self.laurent else self.field.zero()

    def one(self):
        return KElem.const(self.field.one()) if self.laurent else self.field.one()

    def from_int(self, n: int):
        c = self.field.from_int(n)
        return KElem.const(c) if self.laurent else c

    def lift(self, c):
        """Coerce an FqElem into this ring."""
        if self.laurent and isinstance(c, FqElem):
            return KElem.const(c)
        return c

    def is_unit(self, c) -> bool:
        if self.laurent:
            return (not c.is_zero()) and c.is_monomial()
        return not c.is_zero()

    def invert(self, c):
        if self.laurent:
            return c.inverse()  # raises unless monomial
        return c.inverse()

    def pth_root(self, c):
        return c.pth_root()

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.field == other.field
            and self.laurent == other.laurent
        )

    def __hash__(self):
        return hash((self.field, self.laurent))


# ---------------------------------------------------------------------------
# Laurent-coefficient helpers (gcd / exact division in k[t^(1/N)] Laurent ring)


def _kelem_dense(a: KElem, n: int) -> tuple[Fraction, list[FqElem]]:
    v = a.valuation()
    top = max(a.terms)
    size = int((top - v) * n) + 1
    cs = [a.field.zero()] * size
    for e, c in a.terms.items():
        cs[int((e - v) * n)] = c
    return v, cs


def _fqpoly_gcd(a: list[FqElem], b: list[FqElem], field: Fq) -> list[FqElem]:
    def trim(u):
        while u and u[-1].is_zero():
            u.pop()
        return u

    a, b = trim(a[:]), trim(b[:])
    while b:
        inv = b[-1].inverse()
        da, db = len(a) - 1, len(b) - 1
        while da >= db and a:
            c = a[-1] * inv
            shift = da - db
            for i, bc in enumerate(b):
                a[shift + i] = a[shift + i] - c * bc
            a = trim(a)
            da = len(a) - 1
        a, b = b, a
    return a


def kelem_gcd(a: KElem, b: KElem) -> KElem:
    """Gcd in the Laurent ring, normalised to valuation 0 and lowest coeff 1."""
    if a.is_zero() and b.is_zero():
        raise WittramError("gcd(0, 0)")
    if a.is_zero():
        return _unit_normalize(b)
    if b.is_zero():
        return _unit_normalize(a)
    n = lcm(a.root_denominator(), b.root_denominator())
    _, ca = _kelem_dense(a, n)
    _, cb = _kelem_dense(b, n)
    g = _fqpoly_gcd(ca, cb, a.field)
    terms = {Fraction(i, n): c for i, c in enumerate(g) if not c.is_zero()}
    return _unit_normalize(KElem(a.field, terms))


def _unit_normalize(a: KElem) -> KElem:
    v = a.valuation()
    lead = a.terms[v]
    return a.shift(-v).scale(lead.inverse())


def kelem_divexact(a: KElem, b: KElem) -> KElem:
    """a / b when exact; raises otherwise."""
    if a.is_zero():
        return a
    if b.is_monomial():
        return a * b.inverse()
    n = lcm(a.root_denominator(), b.root_denominator())
    va, ca = _kelem_dense(a, n)
    vb, cb = _kelem_dense(b, n)
    field = a.field
    inv = cb[-1].inverse()
    q = [field.zero()] * (len(ca) - len(cb) + 1)
    r = ca[:]
    if len(ca) < len(cb):
        raise WittramError("inexact Laurent division")
    for k in range(len(ca) - len(cb), -1, -1):
        c = r[k + len(cb) - 1] * inv
        q[k] = c
        if not c.is_zero():
            for i, bc in enumerate(cb):
                r[k + i] = r[k + i] - c * bc
    if any(not c.is_zero() for c in r):
        raise WittramError("inexact Laurent division")
    terms = {va - vb + Fraction(i, n): c for i, c in enumerate(q) if not c.is_zero()}
    return KElem(field, terms)


def kelem_divides(a: KElem, b: KElem) -> bool:
    try:
        kelem_divexact(b, a)
        return True
    except WittramError:
        return False


# ---------------------------------------------------------------------------


class Poly:
    """Sparse polynomial; `coeffs` maps degree -> nonzero coefficient."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs: dict | None = None):
        self.ring = ring
        self.coeffs = {d: c for d, c in (coeffs or {}).items() if not _is_zero(c)}
        if len(self.coeffs) > DEGREE_CAP:
            raise DegreeCapExceeded(f"polynomial with {len(self.coeffs)} terms")

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, ring: Ring) -> "Poly":
        return cls(ring, {})

    @classmethod
    def one(cls, ring: Ring) -> "Poly":
        return cls(ring, {0: ring.one()})

    @classmethod
    def x(cls, ring: Ring) -> "Poly":
        return cls(ring, {1: ring.one()})

    @classmethod
    def const(cls, ring: Ring, c) -> "Poly":
        return cls(ring, {0: c})

    @classmethod
    def from_coeff_list(cls, ring: Ring, cs) -> "Poly":
        return cls(ring, dict(enumerate(cs)))

    # -- queries ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 is the sentinel for the zero polynomial."""
        return max(self.coeffs) if self.coeffs else -1

    def lead(self):
        return self.coeffs[self.degree()]

    def coeff(self, d: int):
        return self.coeffs.get(d, self.ring.zero())

    def is_const(self) -> bool:
        return self.degree() <= 0

    # -- arithmetic --------------------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        cs = dict(self.coeffs)
        for d, c in other.coeffs.items():
            s = cs.get(d)
            cs[d] = c if s is None else s + c
        return Poly(self.ring, cs)

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        cs: dict = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                prod = c1 * c2
                s = cs.get(d)
                cs[d] = prod if s is None else s + prod
        return Poly(self.ring, cs)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise WittramError("negative polynomial power")
        result = Poly.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        if _is_zero(c):
            return Poly.zero(self.ring)
        return Poly(self.ring, {d: v * c for d, v in self.coeffs.items()})

    def shift(self, k: int) -> "Poly":
        """Multiply by X^k (k >= 0)."""
        return Poly(self.ring, {d + k: c for d, c in self.coeffs.items()})

    def derivative(self) -> "Poly":
        # degree multiples of p vanish in characteristic p
        p = self.ring.field.p
        cs = {}
        for d, c in self.coeffs.items():
            if d > 0 and d % p != 0:
                cs[d - 1] = c * self.ring.from_int(d)
        return Poly(self.ring, cs)

    def eval(self, point):
        """Sparse Horner evaluation at a coefficient-ring point."""
        if not self.coeffs:
            return self.ring.zero()
        degs = sorted(self.coeffs, reverse=True)
        result = self.coeffs[degs[0]]
        prev = degs[0]
        for d in degs[1:]:
            result = result * _ring_pow(point, prev - d) + self.coeffs[d]
            prev = d
        if prev > 0:
            result = result * _ring_pow(point, prev)
        return result

    def compose_shift(self, c) -> "Poly":
        """f(X + c), by repeated synthetic division by (X - c)."""
        if self.is_zero():
            return self
        n = self.degree()
        cur = [self.coeff(i) for i in range(n + 1)]
        out = []
        while cur:
            q = [self.ring.zero()] * (len(cur) - 1)
            rem = cur[-1]
            for i in range(len(cur) - 2, -1, -1):
                q[i] = rem
                rem = cur[i] + rem * c
            out.append(rem)
            cur = q
        return Poly.from_coeff_list(self.ring, out)

    def frobenius(self) -> "Poly":
        """Entrywise p-th power, with exponents multiplied by p."""
        p = self.ring.field.p
        return Poly(self.ring, {d * p: _ring_pow(c, p) for d, c in self.coeffs.items()})

    def pth_root(self) -> "Poly":
        p = self.ring.field.p
        cs = {}
        for d, c in self.coeffs.items():
            if d % p != 0:
                raise WittramError("polynomial is not a p-th power")
            cs[d // p] = self.ring.pth_root(c)
        return Poly(self.ring, cs)

    # -- division ------------------------------------------------------------------
    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Division with invertible leading coefficient of the divisor."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        inv = self.ring.invert(other.lead())
        q: dict = {}
        r = self
        db = other.degree()
        while not r.is_zero() and r.degree() >= db:
            d = r.degree() - db
            c = r.lead() * inv
            q[d] = q.get(d, self.ring.zero()) + c
            r = r - other.shift(d).scale(c)
        return Poly(self.ring, q), r

    def divexact(self, other: "Poly") -> "Poly":
        """Exact division; works over Laurent coefficients whenever it divides."""
        if self.is_zero():
            return self
        if self.ring.is_unit(other.lead()):
            q, r = self.divmod(other)
            if not r.is_zero():
                raise WittramError("inexact polynomial division")
            return q
        # leading coefficient not a unit: long division with checked
        # coefficient-exact steps (valid when divisibility holds in R[X])
        q: dict = {}
        r = self
        db = other.degree()
        lead = other.lead()
        while not r.is_zero() and r.degree() >= db:
            d = r.degree() - db
            c = kelem_divexact(r.lead(), lead)
            q[d] = c
            r = r - other.shift(d).scale(c)
        if not r.is_zero():
            raise WittramError("inexact polynomial division")
        return Poly(self.ring, q)

    def pseudo_rem(self, other: "Poly") -> "Poly":
        if other.is_zero():
            raise ZeroDivisionError
        r = self
        db = other.degree()
        lead = other.lead()
        while not r.is_zero() and r.degree() >= db:
            d = r.degree() - db
            r = r.scale(lead) - other.shift(d).scale(r.lead())
        return r

    # -- content / gcd ----------------------------------------------------------------
    def content(self) -> KElem:
        """Laurent-coefficient content, unit-normalised."""
        cs = list(self.coeffs.values())
        g = cs[0]
        for c in cs[1:]:
            g = kelem_gcd(g, c)
            if g.is_const():
                break
        return _unit_normalize(g)

    def primitive(self) -> tuple["Poly", KElem]:
        if self.is_zero():
            return self, KElem.const(self.ring.field.one())
        c = self.content()
        return Poly(self.ring, {d: kelem_divexact(v, c) for d, v in self.coeffs.items()}), c

    def gcd(self, other: "Poly") -> "Poly":
        """Monic-normalised gcd (field coefficients) or primitive gcd (Laurent)."""
        if self.is_zero():
            return other.normalize_lead()
        if other.is_zero():
            return self.normalize_lead()
        if not self.ring.laurent:
            a, b = self, other
            while not b.is_zero():
                _, r = a.divmod(b)
                a, b = b, r
            return a.normalize_lead()
        a, _ = self.primitive()
        b, _ = other.primitive()
        if a.degree() < b.degree():
            a, b = b, a
        while not b.is_zero():
            r = a.pseudo_rem(b)
            if not r.is_zero():
                r, _ = r.primitive()
            a, b = b, r
        return a.normalize_lead()

    def normalize_lead(self) -> "Poly":
        """Scale so the leading coefficient is 1 (field) or a 1+... unit times
        no monomial (Laurent: valuation 0, constant term 1)."""
        if self.is_zero():
            return self
        lead = self.lead()
        if not self.ring.laurent:
            return self.scale(lead.inverse())
        v = lead.valuation()
        c0 = lead.terms[v]
        unit = KElem.monomial(c0.inverse(), -v)
        return self.scale(unit)

    # -- squarefree / roots ------------------------------------------------------------
    def squarefree_split(self) -> list[tuple["Poly", int]]:
        """Pairwise-coprime squarefree factors with multiplicities (char p aware)."""
        f = self
        if f.is_zero():
            raise WittramError("squarefree split of zero")
        out: dict[int, Poly] = {}
        self._squarefree(f, 1, out)
        return [(g, m) for m, g in sorted(out.items())]

    def _squarefree(self, f: "Poly", mult: int, out: dict[int, "Poly"]) -> None:
        p = self.ring.field.p
        if f.is_const():
            return
        df = f.derivative()
        if df.is_zero():
            self._squarefree(f.pth_root(), mult * p, out)
            return
        g = f.gcd(df)
        w = f.divexact(g)
        i = 1
        while not w.is_const():
            y = w.gcd(g)
            factor = w.divexact(y)
            if not factor.is_const():
                key = mult * i
                out[key] = out[key] * factor if key in out else factor
            w = y
            g = g.divexact(y)
            i += 1
        if not g.is_const():
            # what is left is a p-th power; the derivative-zero branch above
            # picks up the extra factor of p in the multiplicity
            self._squarefree(g, mult, out)

    def roots(self, require_all: bool = False) -> list[tuple[object, int]]:
        """Roots in the coefficient ring, with multiplicities.

        With require_all, raises IrreducibleDenominator unless the polynomial
        splits completely into linear factors over the ring.
        """
        if self.is_const():
            return []
        found: list[tuple[object, int]] = []
        for g, m in self.squarefree_split():
            if g.is_const():
                continue
            if self.ring.laurent:
                rs = _newton_roots(g)
            else:
                rs = _fq_roots(g)
            found.extend((r, m) for r in rs)
            if require_all and len(rs) < g.degree():
                raise IrreducibleDenominator(
                    f"factor of degree {g.degree()} has only {len(rs)} rational roots"
                )
        return found

    # -- comparisons -----------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Poly) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, frozenset((d, _hashable(c)) for d, c in self.coeffs.items())))

    def __repr__(self):
        return f"Poly({self.coeffs})"


def _is_zero(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else not c


def _hashable(c):
    return c


def _ring_pow(c, n: int):
    return c ** n


def _fq_roots(g: Poly) -> list:
    """Brute-force roots of a squarefree polynomial over F_q, by deflation."""
    field = g.ring.field
    roots = []
    for a in field.elements():
        if g.eval(a).is_zero():
            roots.append(a)
            if len(roots) == g.degree():
                break
    return roots


_NEWTON_DEPTH = 128


def _newton_roots(g: Poly) -> list[KElem]:
    """Exact roots in the Laurent ring of a squarefree polynomial.

    Classical Newton-polygon recursion; a branch terminates when the current
    center is an exact root.  Roots that are genuinely infinite t-series are
    not representable and simply are not returned.
    """
    field = g.ring.field
    roots: list[KElem] = []

    def descend(f: Poly, center: KElem, floor: Fraction | None, depth: int) -> None:
        if depth > _NEWTON_DEPTH:
            raise IrreducibleDenominator("root finding exceeded recursion depth")
        h = f.compose_shift(center)
        if h.coeff(0).is_zero():
            roots.append(center)
            # deflate by W; siblings sharing this prefix live in the quotient
            h = Poly(h.ring, {d - 1: c for d, c in h.coeffs.items() if d >= 1})
            if h.coeff(0).is_zero():
                return  # cannot happen for squarefree input
        # Newton polygon of h: points (i, val(h_i))
        pts = sorted((d, c.valuation()) for d, c in h.coeffs.items())
        if len(pts) < 2:
            return
        # lower convex hull from i=0 upward
        hull = [pts[0]]
        for pt in pts[1:]:
            while len(hull) >= 2:
                (x1, y1), (x2, y2) = hull[-2], hull[-1]
                if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                    hull.pop()
                else:
                    break
            hull.append(pt)
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            v = Fraction(y1 - y2, x2 - x1)  # valuation of roots on this segment
            if floor is not None and v <= floor:
                continue
            # residual polynomial over F_q: coefficients on the segment
            residual: dict[int, FqElem] = {}
            for d, c in h.coeffs.items():
                if x1 <= d <= x2:
                    want = y1 - (d - x1) * v
                    cc = c.coeff(want)
                    if not cc.is_zero():
                        residual[(d - x1)] = cc
            rpoly = Poly(Ring(field, False), residual)
            for gamma in _fq_roots_nonzero(rpoly, field):
                descend(f, center + KElem.monomial(gamma, v), v, depth + 1)

    descend(g, KElem.zero(field), None, 0)
    return roots


def _fq_roots_nonzero(g: Poly, field: Fq) -> list[FqElem]:
    out = []
    for a in field.elements():
        if a.is_zero():
            continue
        if g.eval(a).is_zero():
            out.append(a)
    return out
