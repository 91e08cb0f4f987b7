"""Truncated p-typical Witt vectors over rational-function rings.

Entries are rational functions (over F_q, or over Laurent coefficients for
covers of the t-adic disc).  Sums and products evaluate the universal Witt
polynomials; Frobenius is the entrywise p-th power since the base has
characteristic p.

`reduce` brings a vector into the canonical shape in its Artin-Schreier-Witt
class: every partial-fraction term at a finite pole has prime-to-p order, the
polynomial part at infinity has prime-to-p degrees, and the level-1 constant
term is zero.  The p-power corrections are applied lowest entry first; each
one leaves the lower entries untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadLevel,
    IterationLimit,
    LengthMismatch,
    NotReduced,
    PoleOutsideSupport,
)
from .poly import Poly, Ring
from .ratfunc import INFINITY, RatFunc
from .wittpoly import witt_prod_polys, witt_repr_of_int, witt_sum_polys


class WittVec:
    """Length-n Witt vector; `entries` is a tuple of RatFunc over one ring."""

    __slots__ = ("ring", "entries")

    def __init__(self, ring: Ring, entries):
        self.ring = ring
        self.entries = tuple(entries)
        if not self.entries:
            raise LengthMismatch("empty Witt vector")

    # -- constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, ring: Ring, n: int) -> "WittVec":
        return cls(ring, [RatFunc.zero(ring)] * n)

    @classmethod
    def from_int(cls, ring: Ring, n: int, value: int) -> "WittVec":
        coords = witt_repr_of_int(ring.field.p, n, value)
        return cls(ring, [RatFunc.const(ring, ring.from_int(c)) for c in coords])

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    # -- ring operations -----------------------------------------------------------
    def _check(self, other: "WittVec") -> None:
        if self.n != other.n:
            raise LengthMismatch(f"lengths {self.n} and {other.n}")
        if self.ring != other.ring:
            raise LengthMismatch("Witt vectors over different rings")

    def __add__(self, other: "WittVec") -> "WittVec":
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        polys = witt_sum_polys(self.ring.field.p, self.n)
        return WittVec(self.ring, _evaluate(polys, self.entries + other.entries, self.ring))

    def __neg__(self) -> "WittVec":
        p = self.ring.field.p
        if p != 2:
            return WittVec(self.ring, [-e for e in self.entries])
        return self * WittVec.from_int(self.ring, self.n, -1)

    def __sub__(self, other: "WittVec") -> "WittVec":
        return self + (-other)

    def __mul__(self, other: "WittVec") -> "WittVec":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return WittVec.zero(self.ring, self.n)
        polys = witt_prod_polys(self.ring.field.p, self.n)
        return WittVec(self.ring, _evaluate(polys, self.entries + other.entries, self.ring))

    def frobenius(self) -> "WittVec":
        p = self.ring.field.p
        return WittVec(self.ring, [e ** p for e in self.entries])

    def verschiebung(self) -> "WittVec":
        return WittVec(self.ring, (RatFunc.zero(self.ring),) + self.entries[:-1])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WittVec)
            and self.n == other.n
            and all(a == b for a, b in zip(self.entries, other.entries))
        )

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"WittVec({list(self.entries)!r})"


def _evaluate(polys, args, ring: Ring):
    """Evaluate universal polynomials at rational-function arguments."""
    if all(f.is_const() for f in args):
        fast = _try_evaluate_const(polys, args, ring)
        if fast is not None:
            return fast
    power_cache: list[dict[int, RatFunc]] = [dict() for _ in args]

    def arg_pow(i: int, e: int) -> RatFunc:
        cache = power_cache[i]
        got = cache.get(e)
        if got is None:
            got = args[i] ** e
            cache[e] = got
        return got

    out = []
    for poly in polys:
        acc = RatFunc.zero(ring)
        for exps, coeff in poly.items():
            term = RatFunc.const(ring, ring.from_int(coeff))
            for i, e in enumerate(exps):
                if e:
                    term = term * arg_pow(i, e)
            acc = acc + term
        out.append(acc)
    return out


def _try_evaluate_const(polys, args, ring: Ring):
    """Fast path for constant entries: coefficient arithmetic, no fractions.
    Returns None when a constant fraction cannot be resolved exactly."""
    field = ring.field
    if field.m == 1 and not ring.laurent:
        vals = [f.num.coeff(0).coeffs[0] if not f.is_zero() else 0 for f in args]
        p = field.p
        caches: list[dict[int, int]] = [dict() for _ in vals]

        def ipow(i, e):
            got = caches[i].get(e)
            if got is None:
                got = pow(vals[i], e, p)
                caches[i][e] = got
            return got

        out = []
        for poly in polys:
            acc = 0
            for exps, coeff in poly.items():
                term = coeff
                for i, e in enumerate(exps):
                    if e:
                        term = term * ipow(i, e) % p
                        if term == 0:
                            break
                acc = (acc + term) % p
            out.append(RatFunc.const(ring, field.from_int(acc)))
        return out
    try:
        vals = [None if f.is_zero() else f.const_value() for f in args]
    except Exception:
        return None
    caches2: list[dict] = [dict() for _ in vals]

    def cpow(i, e):
        got = caches2[i].get(e)
        if got is None:
            got = vals[i] ** e
            caches2[i][e] = got
        return got

    out = []
    for poly in polys:
        acc = None
        for exps, coeff in poly.items():
            term = ring.from_int(coeff)
            dead = False
            for i, e in enumerate(exps):
                if e:
                    if vals[i] is None:
                        dead = True
                        break
                    term = term * cpow(i, e)
            if dead:
                continue
            acc = term if acc is None else acc + term
        value = acc if acc is not None else ring.zero()
        out.append(RatFunc.const(ring, value))
    return out


def witt_add(a: WittVec, b: WittVec) -> WittVec:
    return a + b


def witt_sub(a: WittVec, b: WittVec) -> WittVec:
    return a - b


def witt_mul(a: WittVec, b: WittVec) -> WittVec:
    return a * b


def wp(a: WittVec) -> WittVec:
    """The Artin-Schreier-Witt isogeny F - id."""
    return a.frobenius() - a


def truncate_power(a: WittVec, i: int) -> WittVec:
    """First i entries: the defining vector of the p^(n-i)-th power subcover."""
    if not 1 <= i <= a.n:
        raise BadLevel(f"level {i} outside 1..{a.n}")
    return WittVec(a.ring, a.entries[:i])


# ---------------------------------------------------------------------------
# reduction to canonical (prime-to-p pole orders) form


@dataclass
class ReduceReport:
    steps: int
    dropped_constant: object  # ring element removed from entry 1, or None


def _single_entry_vec(ring: Ring, n: int, position: int, f: RatFunc) -> WittVec:
    entries = [RatFunc.zero(ring)] * n
    entries[position - 1] = f
    return WittVec(ring, entries)


def _pdiv_indices(f: RatFunc, p: int):
    """Largest index j with p | j and a nonzero (x-P)^(-j) term, per pole;
    also the infinity (polynomial part) analogue.  Returns list of
    (point, j, coeff_fraction)."""
    hits = []
    for point in f.pole_support(require_all=True):
        if point is INFINITY:
            q, _ = f.poly_and_proper()
            for d in sorted(q.coeffs, reverse=True):
                if d > 0 and d % p == 0:
                    hits.append((INFINITY, d, RatFunc.const(f.ring, q.coeffs[d])))
                    break
            continue
        m = f.pole_order(point)
        series = f.local_series(point, m)
        for j in range(m, 0, -1):
            if j % p == 0 and not series[m - j].is_zero():
                hits.append((point, j, series[m - j]))
                break
    return hits


def is_reduced(a: WittVec) -> bool:
    p = a.ring.field.p
    for idx, f in enumerate(a.entries, start=1):
        if f.is_zero():
            continue
        if _pdiv_indices(f, p):
            return False
        q, _ = f.poly_and_proper()
        if idx == 1 and not _zero(q.coeff(0)):
            return False
    return True


def reduce_vector(a: WittVec, max_steps: int | None = None):
    """Canonical representative of the class of `a`.

    Returns (reduced, witness, dropped, report) with
        reduced = a + wp(witness) - (dropped, 0, ..., 0).
    The dropped constant is the level-1 constant term (recorded, not part of
    the witness; it twists the class by an everywhere-unramified character).
    """
    ring = a.ring
    p = ring.field.p
    n = a.n
    if max_steps is None:
        max_steps = 200 + 40 * n * sum(
            max((f.den.degree(), 1)) + max(f.num.degree(), 0) for f in a.entries
        )
    work = a
    witness = WittVec.zero(ring, n)
    steps = 0
    for position in range(1, n + 1):
        while True:
            f = work.entries[position - 1]
            if f.is_zero():
                break
            hits = _pdiv_indices(f, p)
            if not hits:
                break
            point, j, coeff = hits[0]
            steps += 1
            if steps > max_steps:
                raise IterationLimit(
                    f"reduction exceeded {max_steps} steps at entry {position}"
                )
            u = (-coeff).pth_root()
            if point is INFINITY:
                corr = u * RatFunc.from_poly(Poly.x(ring) ** (j // p))
            else:
                lin = Poly(ring, {1: ring.one(), 0: -ring.lift(point)})
                corr = u / RatFunc.from_poly(lin ** (j // p))
            b = _single_entry_vec(ring, n, position, corr)
            work = work + wp(b)
            witness = witness + b
    # normalise the level-1 constant to zero
    q, _ = work.entries[0].poly_and_proper()
    dropped = None
    if not _zero(q.coeff(0)):
        dropped = q.coeff(0)
        gamma = WittVec(
            ring,
            [RatFunc.const(ring, dropped)] + [RatFunc.zero(ring)] * (n - 1),
        )
        work = work - gamma
        # the subtraction can reintroduce p-power terms in higher entries
        if not is_reduced(work):
            inner, w2, d2, rep = reduce_vector(work, max_steps=max_steps)
            if d2 is not None:
                raise IterationLimit("constant normalisation did not settle")
            witness = witness + w2
            work = inner
            steps += rep.steps
    if not is_reduced(work):
        raise IterationLimit("reduction did not reach canonical form")
    return work, witness, dropped, ReduceReport(steps=steps, dropped_constant=dropped)


def _zero(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else not c


# ---------------------------------------------------------------------------
# partition by pole support (Verschiebung recursion)


def _split_poles(f: RatFunc, points) -> tuple[RatFunc, RatFunc]:
    """Write f = f_A + f_B with f_A the principal parts at the given points."""
    ring = f.ring
    part = RatFunc.zero(ring)
    for point in points:
        m = f.pole_order(point)
        if m == 0:
            continue
        series = f.local_series(point, m)
        lin = Poly(ring, {1: ring.one(), 0: -ring.lift(point)})
        for j in range(1, m + 1):
            c = series[m - j]
            if c.is_zero():
                continue
            part = part + c / RatFunc.from_poly(lin ** j)
    return part, f - part


def partition(a: WittVec, points) -> tuple[WittVec, WittVec]:
    """Split a = a_A + a_B with poles of a_A inside `points`, poles of a_B
    outside (constants and the infinity part go to the B side)."""
    ring = a.ring
    support = set()
    for f in a.entries:
        support.update(pt for pt in f.pole_support(require_all=True) if pt is not INFINITY)
    for pt in points:
        if not any(_eq_point(pt, s) for s in support):
            raise PoleOutsideSupport(f"{pt} is not a pole of the vector")
    return _partition_rec(a, list(points))


def _eq_point(a, b) -> bool:
    return a == b


def _partition_rec(a: WittVec, points) -> tuple[WittVec, WittVec]:
    ring = a.ring
    n = a.n
    fa, fb = _split_poles(a.entries[0], points)
    head_a = _single_entry_vec(ring, n, 1, fa)
    head_b = _single_entry_vec(ring, n, 1, fb)
    if n == 1:
        return head_a, head_b
    rest = (a - head_a) - head_b  # = V(r) for some length n-1 vector r
    assert rest.entries[0].is_zero()
    tail = WittVec(ring, rest.entries[1:])
    ta, tb = _partition_rec(tail, points)
    pad = (RatFunc.zero(ring),)
    va = WittVec(ring, pad + ta.entries)
    vb = WittVec(ring, pad + tb.entries)
    return head_a + va, head_b + vb
