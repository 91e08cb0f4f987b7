"""Independent oracles for the test suite.

The Witt-arithmetic oracles go through ghost components of integer lifts:
sympy's exact Q(x) arithmetic for rational-function entries over a prime
field, and a small hand-rolled Z[g] layer for constants in an extension
field.  Neither touches the library's universal-polynomial machinery.
"""

from __future__ import annotations

import sympy

from wittram.fq import Fq, FqElem
from wittram.poly import Poly, Ring
from wittram.ratfunc import RatFunc
from wittram.witt import WittVec

_x = sympy.Symbol("x")


def _lift_ratfunc(f: RatFunc):
    num = sum(int(c.coeffs[0]) * _x ** d for d, c in f.num.coeffs.items())
    den = sum(int(c.coeffs[0]) * _x ** d for d, c in f.den.coeffs.items())
    return sympy.Rational(1) * num / den


def _ghost(entries, p, n):
    return [
        sum(p ** j * entries[j] ** (p ** (k - j)) for j in range(k + 1))
        for k in range(n)
    ]


def _unghost(ghost, p, n):
    out = []
    for k in range(n):
        acc = ghost[k] - sum(p ** j * out[j] ** (p ** (k - j)) for j in range(k))
        out.append(sympy.cancel(acc / p ** k))
    return out


def _reduce_mod_p(expr, ring: Ring) -> RatFunc:
    p = ring.field.p
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    num_poly = sympy.Poly(num, _x, domain="ZZ")
    den_poly = sympy.Poly(den, _x, domain="ZZ")
    # primitive parts keep the denominator nonzero mod p
    _, num_poly = num_poly.primitive()
    _, den_poly = den_poly.primitive()

    def to_poly(sp):
        cs = {}
        for (d,), c in sp.terms():
            cs[d] = ring.field.from_int(int(c) % p)
        return Poly(ring, cs)

    den_red = to_poly(den_poly)
    if den_red.is_zero():
        raise AssertionError("oracle denominator vanished mod p")
    return RatFunc(to_poly(num_poly), den_red)


def ghost_witt_op(a: WittVec, b: WittVec, op: str) -> WittVec:
    """Witt sum/product of prime-field rational vectors via integer-lift
    ghost components (sympy exact arithmetic)."""
    ring = a.ring
    p = ring.field.p
    assert ring.field.m == 1 and not ring.laurent
    n = a.n
    ga = _ghost([_lift_ratfunc(f) for f in a.entries], p, n)
    gb = _ghost([_lift_ratfunc(f) for f in b.entries], p, n)
    if op == "add":
        gs = [u + v for u, v in zip(ga, gb)]
    elif op == "mul":
        gs = [u * v for u, v in zip(ga, gb)]
    else:
        raise ValueError(op)
    entries = [_reduce_mod_p(e, ring) for e in _unghost(gs, p, n)]
    return WittVec(ring, entries)


# ---------------------------------------------------------------------------
# Z[g] ghost oracle for constants in F_{p^m}


class _Zg:
    """Elements of Z[g]/(modulus lift), with plain integer coefficients."""

    def __init__(self, field: Fq):
        self.field = field
        self.mod = [int(c) for c in field.modulus]
        self.m = field.m

    def lift(self, c: FqElem):
        return [int(v) for v in c.coeffs]

    def _trim(self, a):
        while a and a[-1] == 0:
            a.pop()
        return a

    def add(self, a, b):
        out = [0] * max(len(a), len(b))
        for i, v in enumerate(a):
            out[i] += v
        for i, v in enumerate(b):
            out[i] += v
        return self._trim(out)

    def scale(self, a, k):
        return self._trim([v * k for v in a])

    def mul(self, a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            for j, v in enumerate(b):
                out[i + j] += u * v
        # reduce modulo the monic modulus, over Z
        dm = self.m
        while len(out) - 1 >= dm:
            c = out[-1]
            shift = len(out) - 1 - dm
            for i, mi in enumerate(self.mod):
                out[shift + i] -= c * mi
            out = self._trim(out)
            if not out:
                break
        return self._trim(out)

    def pow(self, a, e):
        result = [1]
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def divexact(self, a, k):
        out = []
        for v in a:
            assert v % k == 0, "ghost recursion division failed"
            out.append(v // k)
        return out

    def to_field(self, a) -> FqElem:
        return self.field.from_coeffs([v % self.field.p for v in a])


def zg_witt_op(a_coeffs, b_coeffs, field: Fq, op: str):
    """Witt sum/product of constant vectors over F_{p^m} via the Z[g] ghost
    route.  Inputs/outputs are lists of FqElem."""
    zg = _Zg(field)
    p = field.p
    n = len(a_coeffs)

    def ghost(entries):
        lifted = [zg.lift(c) for c in entries]
        out = []
        for k in range(n):
            acc = []
            for j in range(k + 1):
                acc = zg.add(acc, zg.scale(zg.pow(lifted[j], p ** (k - j)), p ** j))
            out.append(acc)
        return out

    ga, gb = ghost(a_coeffs), ghost(b_coeffs)
    if op == "add":
        gs = [zg.add(u, v) for u, v in zip(ga, gb)]
    else:
        gs = [zg.mul(u, v) for u, v in zip(ga, gb)]
    out = []
    for k in range(n):
        acc = gs[k]
        for j in range(k):
            acc = zg.add(acc, zg.scale(zg.pow(out[j], p ** (k - j)), -(p ** j)))
        out.append(zg.divexact(acc, p ** k))
    return [zg.to_field(v) for v in out]
