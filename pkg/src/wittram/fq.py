"""Prime-power finite fields F_{p^m} with a fixed, reproducible modulus.

Elements are coefficient tuples modulo a monic irreducible polynomial of
degree m over F_p.  Unless the caller supplies a modulus, the
lexicographically least monic irreducible (ordered by the coefficient
tuple c_0, ..., c_{m-1}) is used, so element encodings are stable across
runs and machines.
"""

from __future__ import annotations

import functools
from typing import Iterator, Sequence

from .errors import FieldError, NotAPthPower


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# F_p[x] helpers on plain int lists (used only for modulus search)

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return _fp_rem(res, mod, p)


def _fp_rem(a: list[int], mod: list[int], p: int) -> list[int]:
    a = a[:]
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        a = _fp_trim(a)
        if len(a) - 1 < dm:
            break
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _fp_trim(a)
    return _fp_trim(a)


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _fp_trim(a[:]), _fp_trim(b[:])
    while b:
        a, b = b, _fp_rem(a, b, p)
    return a


def _fp_powmod_x(e: int, mod: list[int], p: int) -> list[int]:
    """x^e mod (mod) over F_p."""
    result = [1]
    base = _fp_rem([0, 1], mod, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, mod, p)
        base = _fp_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _fp_is_irreducible(f: list[int], p: int) -> bool:
    m = len(f) - 1
    if m < 1:
        return False
    # x^{p^m} == x mod f, and x^{p^{m/l}} != x for prime divisors l of m
    xq = _fp_powmod_x(p ** m, f, p)
    if _fp_trim(xq[:]) != [0, 1]:
        return False
    for l in range(2, m + 1):
        if m % l == 0 and is_prime(l):
            h = _fp_powmod_x(p ** (m // l), f, p)
            h = _fp_trim([(c - d) % p for c, d in zip(h + [0] * 2, [0, 1] + [0] * len(h))])
            if len(_fp_gcd(h, f, p)) - 1 != 0:
                return False
    return True


def _least_irreducible(p: int, m: int) -> tuple[int, ...]:
    if m == 1:
        return (0, 1)
    # enumerate monic degree-m polynomials in lex order of (c_0, ..., c_{m-1})
    total = p ** m
    for code in range(total):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(c % p)
            c //= p
        f = coeffs + [1]
        if _fp_is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")


# ---------------------------------------------------------------------------


class FqElem:
    """Element of F_{p^m}, represented by its coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "Fq", coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    # -- ring structure ----------------------------------------------------
    def __add__(self, other: "FqElem") -> "FqElem":
        f = self.field
        return FqElem(f, tuple((a + b) % f.p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FqElem") -> "FqElem":
        f = self.field
        return FqElem(f, tuple((a - b) % f.p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FqElem":
        f = self.field
        return FqElem(f, tuple((-a) % f.p for a in self.coeffs))

    def __mul__(self, other: "FqElem") -> "FqElem":
        f = self.field
        if f.m == 1:
            return FqElem(f, ((self.coeffs[0] * other.coeffs[0]) % f.p,))
        prod = [0] * (2 * f.m - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] = (prod[i + j] + a * b) % f.p
        return FqElem(f, f._reduce(prod))

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in F_q")
        # Fermat: x^{q-2}; q is small enough for this to be cheap.
        return self ** (self.field.q - 2)

    def __truediv__(self, other: "FqElem") -> "FqElem":
        return self * other.inverse()

    def __pow__(self, e: int) -> "FqElem":
        f = self.field
        if e < 0:
            return self.inverse() ** (-e)
        result = f.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def pth_root(self) -> "FqElem":
        """Inverse Frobenius; always exists since F_q is perfect."""
        f = self.field
        if f.m == 1:
            return self
        return self ** (f.p ** (f.m - 1))

    # -- predicates / hashing ----------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FqElem)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs))

    def __repr__(self) -> str:
        return f"FqElem({self})"

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("g" if c == 1 else f"{c}*g")
            else:
                parts.append(f"g^{i}" if c == 1 else f"{c}*g^{i}")
        if not parts:
            return "0"
        return "+".join(parts)


class Fq:
    """Field context F_{p^m}; construct elements through this object."""

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be >= 1")
        if p ** m > 2 ** 16 and modulus is None:
            raise FieldError("built-in modulus table is limited to q <= 2^16")
        self.p = p
        self.m = m
        self.q = p ** m
        if modulus is None:
            self.modulus = _least_irreducible(p, m)
        else:
            mod = tuple(int(c) % p for c in modulus)
            if len(mod) != m + 1 or mod[-1] != 1:
                raise FieldError("modulus must be monic of degree m")
            if not _fp_is_irreducible(list(mod), p):
                raise FieldError("modulus is not irreducible over F_p")
            self.modulus = mod
        self._zero = FqElem(self, (0,) * m)
        self._one = FqElem(self, (1,) + (0,) * (m - 1))

    def _reduce(self, coeffs: list[int]) -> tuple[int, ...]:
        rem = _fp_rem(coeffs, list(self.modulus), self.p)
        rem = rem + [0] * (self.m - len(rem))
        return tuple(rem)

    # -- constructors --------------------------------------------------------
    def zero(self) -> FqElem:
        return self._zero

    def one(self) -> FqElem:
        return self._one

    def gen(self) -> FqElem:
        if self.m == 1:
            raise FieldError("prime field has no extension generator g")
        return FqElem(self, (0, 1) + (0,) * (self.m - 2))

    def from_int(self, n: int) -> FqElem:
        return FqElem(self, (n % self.p,) + (0,) * (self.m - 1))

    def from_coeffs(self, coeffs: Sequence[int]) -> FqElem:
        cs = [int(c) % self.p for c in coeffs]
        if len(cs) > self.m:
            return FqElem(self, self._reduce(cs))
        return FqElem(self, tuple(cs + [0] * (self.m - len(cs))))

    def elements(self) -> Iterator[FqElem]:
        """All field elements in lexicographic coefficient order."""
        for code in range(self.q):
            coeffs = []
            c = code
            for _ in range(self.m):
                coeffs.append(c % self.p)
                c //= self.p
            yield FqElem(self, tuple(coeffs))

    def extension(self, r: int) -> "Fq":
        """The degree-m*r field with the canonical modulus."""
        return field(self.p, self.m * r)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Fq) and (self.p, self.m, self.modulus) == (
            other.p,
            other.m,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        return f"Fq({self.p}^{self.m})" if self.m > 1 else f"Fq({self.p})"


@functools.lru_cache(maxsize=None)
def field(p: int, m: int = 1) -> Fq:
    """Shared field context with the canonical modulus."""
    return Fq(p, m)
