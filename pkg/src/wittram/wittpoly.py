"""Universal p-typical Witt sum/product polynomials.

Generated once per (p, n) by the ghost-component recursion over the integers,
where the divisions by p are exact, then reduced mod p and cached.  All
intermediate arithmetic is done modulo p^n, which is enough precision for the
final mod-p answer and keeps coefficients small.

Variables are ordered x_1..x_n, y_1..y_n; a polynomial is a dict mapping
exponent tuples of length 2n to nonzero integer coefficients.
"""

from __future__ import annotations

import functools

IntPoly = dict[tuple[int, ...], int]


def _pmul(a: IntPoly, b: IntPoly, mod: int) -> IntPoly:
    out: IntPoly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(i + j for i, j in zip(ea, eb))
            c = (out.get(e, 0) + ca * cb) % mod
            if c:
                out[e] = c
            elif e in out:
                del out[e]
    return out


def _padd(a: IntPoly, b: IntPoly, mod: int) -> IntPoly:
    out = dict(a)
    for e, c in b.items():
        s = (out.get(e, 0) + c) % mod
        if s:
            out[e] = s
        elif e in out:
            del out[e]
    return out


def _pscale(a: IntPoly, k: int, mod: int) -> IntPoly:
    out = {}
    for e, c in a.items():
        s = (c * k) % mod
        if s:
            out[e] = s
    return out


def _ppow(a: IntPoly, e: int, mod: int) -> IntPoly:
    result: IntPoly = {(0,) * _arity(a): 1} if a else {}
    base = a
    while e:
        if e & 1:
            result = _pmul(result, base, mod)
        e >>= 1
        if e:
            base = _pmul(base, base, mod)
    return result


def _arity(a: IntPoly) -> int:
    for e in a:
        return len(e)
    return 0


def _var(index: int, arity: int, power: int = 1) -> IntPoly:
    e = [0] * arity
    e[index] = power
    return {tuple(e): 1}


def _divexact_p(a: IntPoly, pk: int, mod: int) -> IntPoly:
    """Divide by p^k an integer polynomial known modulo mod = p^n * p^k'.

    Representatives are taken in [0, mod); divisibility is guaranteed by the
    ghost recursion."""
    out = {}
    for e, c in a.items():
        if c % pk != 0:
            raise ArithmeticError("ghost recursion division is not exact")
        q = c // pk
        if q:
            out[e] = q
    return out


def _structure_polys(p: int, n: int, combine) -> list[IntPoly]:
    """Shared recursion for sum (combine=add) and product (combine=mul)."""
    arity = 2 * n
    mod = p ** n
    # ghost components of x and y as polynomials
    polys: list[IntPoly] = []
    for k in range(1, n + 1):
        # w_k(z) = sum_{j<=k} p^{j-1} z_j^{p^{k-j}}
        wx: IntPoly = {}
        wy: IntPoly = {}
        for j in range(1, k + 1):
            wx = _padd(wx, _pscale(_var(j - 1, arity, p ** (k - j)), p ** (j - 1), mod), mod)
            wy = _padd(wy, _pscale(_var(n + j - 1, arity, p ** (k - j)), p ** (j - 1), mod), mod)
        target = combine(wx, wy, mod)
        acc: IntPoly = {}
        for i in range(1, k):
            acc = _padd(acc, _pscale(_ppow(polys[i - 1], p ** (k - i), mod), p ** (i - 1), mod), mod)
        num = _padd(target, _pscale(acc, -1, mod), mod)
        polys.append(_divexact_p(num, p ** (k - 1), mod))
    # reduce mod p
    out = []
    for poly in polys:
        out.append({e: c % p for e, c in poly.items() if c % p})
    return out


@functools.lru_cache(maxsize=None)
def witt_sum_polys(p: int, n: int) -> tuple[IntPoly, ...]:
    return tuple(_structure_polys(p, n, _padd))


@functools.lru_cache(maxsize=None)
def witt_prod_polys(p: int, n: int) -> tuple[IntPoly, ...]:
    return tuple(_structure_polys(p, n, _pmul))


@functools.lru_cache(maxsize=None)
def witt_repr_of_int(p: int, n: int, value: int) -> tuple[int, ...]:
    """Witt coordinates over F_p of an integer (W_n(F_p) = Z/p^n).

    Decoded with Teichmueller representatives; used for constants like -1.
    """
    mod = p ** n
    x = value % mod
    coords = []
    for _ in range(n):
        a = x % p
        teich = a
        for _ in range(n):
            teich = pow(teich, p, mod)
        x = (x - teich) // p % (mod)
        # inverse Frobenius on F_p is the identity
        coords.append(a)
    return tuple(coords)
