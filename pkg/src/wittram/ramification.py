"""Branching data of cyclic p-power covers.

Upper ramification breaks are read off a reduced defining Witt vector by
u_i = max{ p^(i-l) * (pole order of entry l) : l <= i }; conductors are
breaks plus one.  A conductor matrix is valid when every row satisfies the
two congruence conditions for one-point covers, and splitting a one-point
cover's jumps produces the canonical multi-point matrix whose column sums
are jumps plus one.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import InvalidDatum, InvalidJumps, NotReduced
from .ratfunc import INFINITY
from .witt import WittVec, is_reduced


@dataclass
class BranchingDatum:
    points: list
    matrix: list[list[int]]  # r rows, n columns of conductors (0 = unramified)

    def column_sums(self) -> list[int]:
        if not self.matrix:
            return []
        n = len(self.matrix[0])
        return [sum(row[i] for row in self.matrix) for i in range(n)]


@dataclass
class JumpProfile:
    points: list
    breaks: list[list[int]]  # -1 at unramified levels
    inertia_exponents: list[int]  # m_j: inertia group Z/p^(m_j)


@dataclass
class DatumReport:
    valid: bool
    violations: list[str]
    essential_jumps: list[tuple[int, int]]  # (row, level) pairs, 1-based


def _pole_orders(vec: WittVec):
    """Per point: list of pole orders of each entry (degree in x at infinity)."""
    keys: list = []
    orders: list[list[int]] = []

    def index_of(pt) -> int:
        for i, known in enumerate(keys):
            if known == pt:
                return i
        keys.append(pt)
        orders.append([0] * vec.n)
        return len(keys) - 1

    for level, f in enumerate(vec.entries):
        if f.is_zero():
            continue
        for pt in f.pole_support(require_all=True):
            orders[index_of(pt)][level] = f.pole_order(pt)
    return keys, orders


def branching_datum(vec: WittVec) -> tuple[BranchingDatum, JumpProfile]:
    """Branching datum and jump profile of the cover defined by a reduced vector."""
    if not is_reduced(vec):
        raise NotReduced("run reduce first")
    p = vec.ring.field.p
    n = vec.n
    points, all_orders = _pole_orders(vec)
    matrix = []
    breaks = []
    inertia = []
    for orders in all_orders:
        first = next(i for i, o in enumerate(orders) if o > 0)
        row_breaks = [-1] * n
        row_cond = [0] * n
        for i in range(first, n):
            u = max(
                p ** (i - l) * orders[l]
                for l in range(i + 1)
                if orders[l] > 0
            )
            row_breaks[i] = u
            row_cond[i] = u + 1
        matrix.append(row_cond)
        breaks.append(row_breaks)
        inertia.append(n - (first + 1) + 1)
    datum = BranchingDatum(points=points, matrix=matrix)
    profile = JumpProfile(points=points, breaks=breaks, inertia_exponents=inertia)
    return datum, profile


def validate_datum(matrix: list[list[int]], p: int) -> DatumReport:
    """Check the one-point-cover congruence conditions row by row."""
    violations = []
    essential = []
    for j, row in enumerate(matrix, start=1):
        if any(e < 0 or int(e) != e for e in row):
            violations.append(f"row {j}: entries must be nonnegative integers")
            continue
        nonzero = [i for i, e in enumerate(row) if e != 0]
        if not nonzero:
            violations.append(f"row {j}: all levels unramified")
            continue
        first = nonzero[0]
        if any(row[i] == 0 for i in range(first, len(row))):
            violations.append(f"row {j}: conductor drops back to 0 after level {first + 1}")
            continue
        if row[first] % p == 1:
            violations.append(
                f"row {j}: first conductor {row[first]} is 1 mod {p}"
            )
        # at the first ramified level the jump is measured from zero
        if row[first] - 1 >= p:
            essential.append((j, first + 1))
        for i in range(first + 1, len(row)):
            e, prev = row[i], row[i - 1]
            minimal = p * prev - p + 1
            if e < minimal:
                violations.append(
                    f"row {j} level {i + 1}: {e} < p*{prev}-p+1 = {minimal}"
                )
                continue
            if e == minimal and e % p != 1:
                violations.append(
                    f"row {j} level {i + 1}: minimal conductor {e} must be 1 mod {p}"
                )
            if e > minimal:
                if e % p == 1:
                    violations.append(
                        f"row {j} level {i + 1}: {e} is 1 mod {p} but not minimal"
                    )
                increment = e - minimal
                if increment >= p:
                    essential.append((j, i + 1))
    return DatumReport(valid=not violations, violations=violations, essential_jumps=essential)


@dataclass
class GenusProfile:
    genera: list[int]  # genus of the level-l subcover, l = 1..n
    differents: list[list[int]]  # per level: per-point different degrees


def genus_profile(datum: BranchingDatum, p: int) -> GenusProfile:
    report = validate_datum(datum.matrix, p)
    if not report.valid:
        raise InvalidDatum("; ".join(report.violations))
    if not datum.matrix or all(row[0] == 0 for row in datum.matrix):
        raise InvalidDatum("level-1 column is zero: no cover")
    n = len(datum.matrix[0])
    genera = []
    differents = []
    for l in range(1, n + 1):
        dl = []
        for row in datum.matrix:
            dl.append(sum(row[i] * (p ** (i + 1) - p ** i) for i in range(l)))
        total = sum(dl)
        two_g = 2 * (1 - p ** l) + total
        if two_g % 2 != 0 or two_g < 0:
            raise InvalidDatum(f"level {l}: inconsistent genus value {two_g}/2")
        genera.append(two_g // 2)
        differents.append(dl)
    return GenusProfile(genera=genera, differents=differents)


def oss_split(jumps: list[int], p: int) -> list[list[int]]:
    """Split the upper jumps of a one-point cover into the canonical
    several-point conductor matrix (first row accumulates the prime-to-p
    residues; each essential level j contributes q_j rows (0,..,0,p,p^2,...)).
    Column sums equal jump+1."""
    n = len(jumps)
    if n == 0:
        raise InvalidJumps("empty jump sequence")
    prev = 0
    eps, qs = [], []
    for i, jump in enumerate(jumps):
        if jump <= 0 or jump < p * prev:
            raise InvalidJumps(f"level {i + 1}: jump {jump} below p * previous")
        diff = jump - p * prev
        q, e = divmod(diff, p)
        if e == 0 and q != 0:
            raise InvalidJumps(
                f"level {i + 1}: jump {jump} divisible by p must equal p * previous"
            )
        eps.append(e)
        qs.append(q)
        prev = jump
    rows = []
    s = 0
    first = []
    for i in range(n):
        s = p * s + eps[i]
        first.append(s + 1 if s > 0 else 0)
    rows.append(first)
    for j in range(n):
        if qs[j] > 0 and eps[j] > 0:
            template = [0] * j + [p ** (i + 1) for i in range(n - j)]
            rows.extend([list(template) for _ in range(qs[j])])
    sums = [sum(r[i] for r in rows) for i in range(n)]
    expect = [jump + 1 for jump in jumps]
    if sums != expect:
        raise InvalidJumps(f"column sums {sums} != jumps+1 {expect}")
    report = validate_datum(rows, p)
    if not report.valid:
        raise InvalidJumps("split produced an invalid matrix: " + "; ".join(report.violations))
    return rows


def synthesize_vector(ring, matrix: list[list[int]], points) -> WittVec:
    """A defining Witt vector realising a valid conductor matrix: entry i is
    the sum of a_{j,i}/(x - P_j)^(e_{j,i}-1) with a = 1 unless the conductor
    is 1 mod p (then 0)."""
    from .poly import Poly
    from .ratfunc import RatFunc

    p = ring.field.p
    n = len(matrix[0])
    entries = []
    for i in range(n):
        acc = RatFunc.zero(ring)
        for row, pt in zip(matrix, points):
            e = row[i]
            if e == 0 or e % p == 1:
                continue
            lin = Poly(ring, {1: ring.one(), 0: -ring.lift(pt)})
            acc = acc + RatFunc(Poly.one(ring), lin ** (e - 1))
        entries.append(acc)
    return WittVec(ring, entries)
