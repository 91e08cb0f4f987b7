"""Rational differential forms f(x)dx over F_q(x) and the Cartier operator.

The dx is implicit: a form is represented by its rational coefficient.  The
order at infinity of f dx is deg(den) - deg(num) - 2.  The Cartier operator
is computed through the identity C(u^p w) = u C(w) after writing
f = (g h^(p-1)) / h^p, and its kernel is exactly the exact forms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadShape, NotExact, PoleCollision, ShapeMismatch
from .poly import Poly, Ring
from .ratfunc import INFINITY, RatFunc, partial_fractions


class DiffForm:
    """The differential f dx, with f kept in lowest terms."""

    __slots__ = ("f",)

    def __init__(self, f: RatFunc):
        self.f = f

    @property
    def ring(self) -> Ring:
        return self.f.ring

    def is_zero(self) -> bool:
        return self.f.is_zero()

    def __add__(self, other: "DiffForm") -> "DiffForm":
        return DiffForm(self.f + other.f)

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        return DiffForm(self.f - other.f)

    def __neg__(self) -> "DiffForm":
        return DiffForm(-self.f)

    def scale(self, c) -> "DiffForm":
        return DiffForm(self.f * RatFunc.const(self.ring, c))

    def ord_at(self, point) -> int:
        """Order of vanishing at a point; poles count negative.  At infinity
        the dx contributes -2."""
        if point is INFINITY:
            return self.f.den.degree() - self.f.num.degree() - 2
        m = self.f.pole_order(point)
        if m > 0:
            return -m
        # order of vanishing of the numerator
        order = 0
        num = self.f.num
        while not num.is_zero() and _zero(num.eval(point)):
            num = _deflate(num, point)
            order += 1
        return order

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffForm) and self.f == other.f

    def __hash__(self):
        return hash(self.f)

    def __repr__(self):
        return f"DiffForm({self.f!r})"


def _zero(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else not c


def _deflate(poly: Poly, point) -> Poly:
    n = poly.degree()
    q = [poly.ring.zero()] * n
    rem = poly.coeff(n)
    for i in range(n - 1, -1, -1):
        q[i] = rem
        rem = poly.coeff(i) + rem * point
    return Poly.from_coeff_list(poly.ring, q)


def cartier(omega: DiffForm) -> DiffForm:
    """The Cartier operator: 1/p-semilinear, kernel = exact forms,
    fixes dx/x."""
    ring = omega.ring
    p = ring.field.p
    if omega.is_zero():
        return omega
    g, h = omega.f.num, omega.f.den
    u = g * h ** (p - 1)
    # C(sum u_j x^j dx) keeps j = p-1 mod p, takes p-th roots of coefficients
    cs = {}
    for d, c in u.coeffs.items():
        if d % p == p - 1:
            cs[(d - p + 1) // p] = ring.pth_root(c)
    return DiffForm(RatFunc(Poly(ring, cs), h))


def is_exact(omega: DiffForm) -> bool:
    return cartier(omega).is_zero()


def antiderivative(omega: DiffForm) -> RatFunc:
    """h with dh = omega, normalised to zero constant term.

    Defined exactly on the kernel of the Cartier operator; term-by-term
    integration of the partial fractions never divides by p there."""
    if not is_exact(omega):
        raise NotExact("Cartier image is nonzero")
    ring = omega.ring
    p = ring.field.p
    poly_part, poles = partial_fractions(omega.f)
    total = RatFunc.zero(ring)
    for d, c in poly_part.coeffs.items():
        if (d + 1) % p == 0:
            raise NotExact(f"monomial x^{d} dx is not exact")
        total = total + RatFunc.from_poly(
            Poly(ring, {d + 1: c * ring.from_int(d + 1).inverse()})
        )
    for point, cs in poles.items():
        lin = Poly(ring, {1: ring.one(), 0: -ring.lift(point)})
        for i, c in enumerate(cs, start=1):
            if _zero(c):
                continue
            if i == 1 or (i - 1) % p == 0:
                raise NotExact(f"pole term of order {i} is not integrable")
            coeff = c * ring.from_int(1 - i).inverse()
            total = total + RatFunc(Poly.const(ring, coeff), lin ** (i - 1))
    return total


def product_form(omega: DiffForm):
    """(c, [(point, order), ...]) when omega = c dx / prod (x-d_i)^(i_i);
    None if the numerator is not constant."""
    if omega.is_zero() or omega.f.num.degree() != 0:
        return None
    poles = omega.f.den.roots(require_all=True)
    total = sum(m for _, m in poles)
    if total != omega.f.den.degree():
        return None
    # denominator is monic by normalisation, so the constant is the numerator
    return omega.f.num.coeff(0), poles


def cartier_solve(omega: DiffForm, a: int, pole_order_hint=None) -> DiffForm:
    """A solution w' of C(w') = omega with prescribed pole bumps.

    For omega = c dx / prod(x - d_i)^(i_i) with r >= 2 distinct finite poles,
    the solution has pole orders p*i_1 - p + a + 1 at d_1, p*i_2 - p + 1 at
    d_2, and p*i_i elsewhere, scaled by c^p / (-d_1 - d_2)^(p-a-1).
    The result is re-checked by applying the Cartier operator.
    """
    ring = omega.ring
    p = ring.field.p
    if not 1 <= a <= p - 1:
        raise BadShape(f"a = {a} outside 1..p-1")
    shape = product_form(omega)
    if shape is None:
        raise BadShape("expected c dx / product of linear powers")
    c, poles = shape
    if pole_order_hint is not None:
        poles = pole_order_hint
    if len(poles) < 2:
        raise BadShape("need at least two distinct poles")
    d1, i1 = poles[0]
    d2, i2 = poles[1]
    if p - a - 1 > 0 and _zero(d1 + d2):
        raise PoleCollision("d1 = -d2 degenerates the scaling constant")
    den = Poly.one(ring)
    for idx, (pt, order) in enumerate(poles):
        if idx == 0:
            new_order = p * order - p + a + 1
        elif idx == 1:
            new_order = p * order - p + 1
        else:
            new_order = p * order
        lin = Poly(ring, {1: ring.one(), 0: -ring.lift(pt)})
        den = den * lin ** new_order
    scale = (c ** p) * ((-d1 - d2) ** (p - a - 1)).inverse() if p - a - 1 > 0 else c ** p
    result = DiffForm(RatFunc(Poly.const(ring, scale), den))
    check = cartier(result)
    if check != omega:
        raise BadShape("postcondition C(w') = w failed")
    return result


def solve_cartier_with_orders(omega: DiffForm, orders: list[tuple]) -> DiffForm:
    """Scaled product-form solution of C(w') = omega with the exact pole
    orders given as (point, order) pairs; the shape must map to a multiple
    of omega under the Cartier operator."""
    ring = omega.ring
    p = ring.field.p
    den = Poly.one(ring)
    for pt, order in orders:
        lin = Poly(ring, {1: ring.one(), 0: -ring.lift(pt)})
        den = den * lin ** order
    base = DiffForm(RatFunc(Poly.one(ring), den))
    image = cartier(base)
    if image.is_zero():
        raise BadShape("prescribed orders give an exact form")
    ratio = omega.f / image.f
    if not ratio.is_const():
        raise BadShape("prescribed orders are incompatible with the target")
    lam = ratio.const_value()
    return base.scale(lam ** p)


@dataclass
class CartierRuleReport:
    valid: bool
    findings: list[str]
    branches: list[str]  # per level > 1: "equality" or "strict" or "skipped"


def check_cartier_rules(datum: list[tuple]) -> CartierRuleReport:
    """Check the level-to-level degeneration rules on a ramification datum
    [(depth_1, omega_1), ..., (depth_n, omega_n)]:
    C(omega_1) = 0; depth_i >= p*depth_{i-1}, with Cartier image omega_{i-1}
    at equality and zero at strict inequality."""
    findings = []
    branches = []
    if not datum:
        return CartierRuleReport(True, [], [])
    first_delta, first_omega = datum[0]
    p = None
    if first_omega is not None:
        p = first_omega.ring.field.p
        if first_delta > 0 and not cartier(first_omega).is_zero():
            findings.append("level 1: C(omega_1) != 0")
    for i in range(1, len(datum)):
        delta_prev, omega_prev = datum[i - 1]
        delta, omega = datum[i]
        if omega is not None and p is None:
            p = omega.ring.field.p
        if delta == 0 and delta_prev == 0:
            branches.append("skipped")
            continue
        if p is None:
            branches.append("skipped")
            continue
        if delta < p * delta_prev:
            findings.append(
                f"level {i + 1}: depth {delta} < p * {delta_prev}"
            )
            branches.append("invalid")
            continue
        if delta == p * delta_prev and delta_prev > 0:
            branches.append("equality")
            if cartier(omega) != omega_prev:
                findings.append(f"level {i + 1}: C(omega) != previous omega at equality")
        else:
            branches.append("strict")
            if not cartier(omega).is_zero():
                findings.append(f"level {i + 1}: C(omega) != 0 at strict inequality")
    return CartierRuleReport(valid=not findings, findings=findings, branches=branches)


def constant_coefficient(omega: DiffForm, poles: list):
    """(global constant or None, per-pole leading partial-fraction coefficients).

    The global constant exists when the form is c dx / prod over exactly the
    listed poles; leading coefficients exist whenever each listed point is a
    pole (else ShapeMismatch)."""
    leading = []
    for pt in poles:
        m = omega.f.pole_order(pt)
        if m == 0:
            raise ShapeMismatch(f"{pt} is not a pole of the form")
        leading.append(omega.f.leading_at(pt).const_value())
    shape = product_form(omega)
    c_v = None
    if shape is not None:
        c, found = shape
        found_pts = [pt for pt, _ in found]
        if len(found_pts) == len(poles) and all(
            any(a == b for b in found_pts) for a in poles
        ):
            c_v = c
    return c_v, leading
