"""Gauss valuations and refined Swan conductors on the t-adic disc.

A place is a pair (z, r) with z a center in the open unit disc and r >= 0
the tree coordinate; the attached Gauss valuation has nu(X - z) = p*r and
nu(t) = 1.  The depth of a character at a place is read off a best Witt
vector as -(1/p) * min_i p^(n-i) * nu(entry_i); when positive, the
differential conductor is the sum of the reduced forms
[a^i]^(p^(n-i)-1) d[a^i] over the positions attaining the minimum, and its
pole orders at 0 and infinity give the one-sided slopes of the depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .differential import DiffForm
from .errors import (
    BranchOutsideDisc,
    GridTooCoarse,
    HypothesisViolation,
    IterationLimit,
    WittramError,
    ZeroInput,
)
from .fq import Fq
from .laurent import KElem
from .poly import Poly, Ring
from .ratfunc import INFINITY, RatFunc
from .witt import WittVec, is_reduced, reduce_vector, wp


@dataclass(frozen=True)
class Place:
    """Center z (Laurent element, nu(z) > 0 or zero) and tree coordinate r."""

    z: KElem
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        if self.r < 0:
            raise WittramError("negative place coordinate")


@dataclass
class SwanDatum:
    depth: Fraction
    diff: DiffForm | None  # present iff depth > 0
    reduction: WittVec | None  # reduced residue vector, present iff depth = 0
    boundary: tuple[int, int]  # slopes toward 0-bar and infinity-bar
    dropped_constant: object = None  # constant removed when reducing the residue


# ---------------------------------------------------------------------------
# Gauss reduction


def _poly_gauss(poly: Poly, z: KElem, pr: Fraction, res_ring: Ring):
    """Valuation and residue of a Laurent-coefficient polynomial under
    X = z + t^pr * x.  Returns (valuation, Fq(x)-polynomial)."""
    shifted = poly.compose_shift(z)
    best = None
    for d, c in shifted.coeffs.items():
        v = c.valuation() + pr * d
        if best is None or v < best:
            best = v
    red = {}
    for d, c in shifted.coeffs.items():
        coeff = c.coeff(best - pr * d)
        if not coeff.is_zero():
            red[d] = coeff
    return best, Poly(res_ring, red)


def gauss_reduce(f: RatFunc, place: Place) -> tuple[Fraction, RatFunc]:
    """nu_{pr,z}(f) and the image of t^(-nu) f in k(x)."""
    if f.is_zero():
        raise ZeroInput("Gauss reduction of zero")
    field = f.ring.field
    res_ring = Ring(field, False)
    pr = place.r * field.p
    vn, rn = _poly_gauss(f.num, place.z, pr, res_ring)
    vd, rd = _poly_gauss(f.den, place.z, pr, res_ring)
    return vn - vd, RatFunc(rn, rd)


def lift_residue(h: RatFunc, place: Place, ring: Ring) -> RatFunc:
    """A lift of h(x) under x = t^(-pr) (X - z)."""
    field = ring.field
    pr = place.r * field.p

    def lift_poly(poly: Poly) -> Poly:
        cs = {}
        for d, c in poly.coeffs.items():
            cs[d] = KElem.monomial(c, -pr * d)
        return Poly(ring, cs).compose_shift(-place.z)

    return RatFunc(lift_poly(h.num), lift_poly(h.den))


# ---------------------------------------------------------------------------
# best representatives


def _witt_values(vec: WittVec, place: Place):
    """(value, relevant list, per-entry data) where value = min p^(n-i) nu_i."""
    p = vec.ring.field.p
    n = vec.n
    data = []
    best = None
    for i, f in enumerate(vec.entries, start=1):
        if f.is_zero():
            data.append(None)
            continue
        val, red = gauss_reduce(f, place)
        scaled = val * p ** (n - i)
        data.append((val, red, scaled))
        if best is None or scaled < best:
            best = scaled
    relevant = [
        i + 1
        for i, d in enumerate(data)
        if d is not None and d[2] == best
    ]
    return best, relevant, data


def bestify(vec: WittVec, place: Place, max_steps: int | None = None):
    """Greedy descent to a best representative at the place.

    Returns (best_vector, witness) with best = vec + wp(witness); the loop
    subtracts wp of the obvious p-th-root correction at the lowest relevant
    position whose reduction is a p-th power.
    """
    ring = vec.ring
    p = ring.field.p
    n = vec.n
    if max_steps is None:
        size = sum(max(f.den.degree(), 1) + max(f.num.degree(), 0) for f in vec.entries)
        max_steps = 60 + 10 * n * size
    work = vec
    witness = WittVec.zero(ring, n)
    for _ in range(max_steps):
        value, relevant, data = _witt_values(work, place)
        if value is None or value >= 0:
            return work, witness
        target = None
        for i in relevant:
            val, red, _ = data[i - 1]
            if not red.is_pth_power():
                return work, witness
            target = target if target is not None else i
        i = target
        val, red, _ = data[i - 1]
        u = (-red).pth_root()
        corr = lift_residue(u, place, ring) * RatFunc.const(
            ring, KElem.t_power(ring.field, val / p)
        )
        b_entries = [RatFunc.zero(ring)] * n
        b_entries[i - 1] = corr
        b = WittVec(ring, b_entries)
        work = work + wp(b)
        witness = witness + b
    raise IterationLimit(
        f"bestify did not stabilise within {max_steps} steps at {place}"
    )


# ---------------------------------------------------------------------------
# refined Swan conductor at a place


def _classical_boundary(red: WittVec) -> tuple[int, int]:
    """Classical Swan conductors of a reduced residue vector toward 0-bar
    and infinity-bar."""
    p = red.ring.field.p
    n = red.n
    zero_pt = red.ring.field.zero()
    sw0 = 0
    swinf = 0
    for i, f in enumerate(red.entries, start=1):
        if f.is_zero():
            continue
        m0 = f.pole_order(zero_pt)
        if m0:
            sw0 = max(sw0, p ** (n - i) * m0)
        minf = f.pole_order(INFINITY)
        if minf:
            swinf = max(swinf, p ** (n - i) * minf)
    return sw0, swinf


def swan(vec: WittVec, place: Place, max_steps: int | None = None) -> SwanDatum:
    """Depth and differential (or reduction) of the character at the place."""
    best, _ = bestify(vec, place, max_steps=max_steps)
    value, relevant, data = _witt_values(best, place)
    p = vec.ring.field.p
    n = vec.n
    res_ring = Ring(vec.ring.field, False)
    if value is None or value >= 0:
        # unramified: read the residue vector and reduce it classically
        entries = []
        for i, f in enumerate(best.entries, start=1):
            if f.is_zero():
                entries.append(RatFunc.zero(res_ring))
                continue
            val, red, _ = data[i - 1]
            entries.append(red if val == 0 else RatFunc.zero(res_ring))
        residue = WittVec(res_ring, entries)
        reduced, _, dropped, _ = reduce_vector(residue)
        sw0, swinf = _classical_boundary(reduced)
        return SwanDatum(
            depth=Fraction(0),
            diff=None,
            reduction=reduced,
            boundary=(sw0, swinf),
            dropped_constant=dropped,
        )
    depth = Fraction(-value, p)
    omega = RatFunc.zero(res_ring)
    for i in relevant:
        _, red, _ = data[i - 1]
        omega = omega + red ** (p ** (n - i) - 1) * red.derivative()
    if omega.is_zero():
        raise IterationLimit("relevant reductions cancelled: vector is not best")
    form = DiffForm(omega)
    zero_pt = res_ring.field.zero()
    boundary = (-form.ord_at(zero_pt) - 1, -form.ord_at(INFINITY) - 1)
    return SwanDatum(depth=depth, diff=form, reduction=None, boundary=boundary)


# ---------------------------------------------------------------------------
# depth profiles


@dataclass
class ProfileSegment:
    start: Fraction
    end: Fraction
    start_depth: Fraction
    slope: int

    def depth_at(self, r: Fraction) -> Fraction:
        return self.start_depth + self.slope * (Fraction(r) - self.start)


@dataclass
class DepthProfile:
    interval: tuple[Fraction, Fraction]
    breakpoints: list[Fraction]
    segments: list[ProfileSegment]

    def depth_at(self, r) -> Fraction:
        r = Fraction(r)
        for seg in self.segments:
            if seg.start <= r <= seg.end:
                return seg.depth_at(r)
        raise WittramError("place outside the profile interval")

    def kinks(self) -> list[Fraction]:
        return self.breakpoints[1:-1]


def _branch_points(vec: WittVec) -> list[KElem]:
    pts: list[KElem] = []
    for f in vec.entries:
        for pt in f.pole_support(require_all=True):
            if pt is INFINITY:
                continue
            if not any(pt == q for q in pts):
                pts.append(pt)
    return pts


def _slopes(datum: SwanDatum) -> tuple[int, int]:
    """(left derivative, right derivative) of the depth at the sampled place."""
    sw0, swinf = datum.boundary
    return -swinf, sw0


def depth_profile(
    vec: WittVec,
    z: KElem,
    r1,
    r2,
    grid: int = 8,
    max_bisect: int = 24,
) -> DepthProfile:
    """Piecewise-linear depth along [r1, r2] at centers z, with kinks located
    exactly and certified by the one-sided slopes of the differential."""
    r1, r2 = Fraction(r1), Fraction(r2)
    if not r1 < r2:
        raise WittramError("need r1 < r2")
    p = vec.ring.field.p
    branch = _branch_points(vec)

    def on_circle(r: Fraction) -> bool:
        for b in branch:
            d = b - z
            if d.is_zero():
                continue
            if d.valuation() == p * r:
                return True
        return False

    samples = [r1 + Fraction(k, grid) for k in range(int((r2 - r1) * grid) + 1)]
    if samples[-1] != r2:
        samples.append(r2)
    for r in samples[1:-1]:
        if on_circle(r):
            raise GridTooCoarse(f"branch point on the sampled circle r = {r}")

    cache: dict[Fraction, SwanDatum] = {}

    def at(r: Fraction) -> SwanDatum:
        if r not in cache:
            cache[r] = swan(vec, Place(z, r))
        return cache[r]

    segments: list[ProfileSegment] = []

    def build(a: Fraction, b: Fraction, depth_budget: int) -> None:
        da, db = at(a), at(b)
        la, ra = _slopes(da)
        lb, rb = _slopes(db)
        if ra == lb and db.depth - da.depth == ra * (b - a):
            segments.append(ProfileSegment(a, b, da.depth, ra))
            return
        if depth_budget <= 0:
            raise GridTooCoarse(f"could not certify the profile on [{a}, {b}]")
        # candidate single kink from the two one-sided lines
        denom = ra - lb
        if denom != 0:
            rstar = (db.depth - lb * b - da.depth + ra * a) / denom
            if a < rstar < b and not on_circle(rstar):
                ds = at(rstar)
                ls, rs = _slopes(ds)
                if (
                    ds.depth == da.depth + ra * (rstar - a)
                    and ds.depth == db.depth + lb * (rstar - b)
                    and ls == ra
                    and rs == lb
                ):
                    segments.append(ProfileSegment(a, rstar, da.depth, ra))
                    segments.append(ProfileSegment(rstar, b, ds.depth, rs))
                    return
        mid = (a + b) / 2
        if on_circle(mid):
            mid = (2 * a + b) / 3
            if on_circle(mid):
                raise GridTooCoarse("bisection landed on branch circles")
        build(a, mid, depth_budget - 1)
        build(mid, b, depth_budget - 1)

    for a, b in zip(samples, samples[1:]):
        build(a, b, max_bisect)

    # merge collinear neighbours
    merged: list[ProfileSegment] = []
    for seg in segments:
        if merged and merged[-1].slope == seg.slope and merged[-1].end == seg.start:
            merged[-1] = ProfileSegment(
                merged[-1].start, seg.end, merged[-1].start_depth, seg.slope
            )
        else:
            merged.append(seg)
    breakpoints = [merged[0].start] + [s.end for s in merged]
    return DepthProfile(interval=(r1, r2), breakpoints=breakpoints, segments=merged)


# ---------------------------------------------------------------------------
# kink detection for order-p characters (two-sided valuation comparison)


def kink_mu(
    F: RatFunc,
    r0,
    m: int,
    s,
    N: int,
    tail: int = 8,
):
    """Largest kink of the depth of the order-p character of F on (0, s],
    computed from the normalised annulus coefficients; returns the kink in
    the tree coordinate together with the c_k data.
    """
    r0, s = Fraction(r0), Fraction(s)
    ring = F.ring
    field = ring.field
    p = field.p
    if not 0 < s < r0:
        raise HypothesisViolation("need 0 < s < r0")
    if m <= 1 or m % p == 0:
        raise HypothesisViolation("slope bound m must be > 1 and prime to p")
    # D1: branch locus inside D[p r0], with 0 a branch point, no pole at inf
    poly_part, _ = F.poly_and_proper()
    if poly_part.degree() > 0:
        raise HypothesisViolation("pole at infinity")
    poles = [pt for pt in F.pole_support(require_all=True) if pt is not INFINITY]
    if not any(pt.is_zero() for pt in poles):
        raise HypothesisViolation("0 must be a branch point")
    for pt in poles:
        if not pt.is_zero() and pt.valuation() < p * r0:
            raise HypothesisViolation(f"branch point {pt} outside D[p r0]")
    vec = WittVec(ring, [F])
    datum0 = swan(vec, Place(KElem.zero(field), r0))
    delta = datum0.depth
    if p * N < Fraction(delta, 1) / (r0 - s):
        raise HypothesisViolation("p N < depth / (r0 - s)")
    # D2, D3 sampled
    for r in (s, (s + r0) / 2, r0):
        d = swan(vec, Place(KElem.zero(field), r))
        if d.depth <= 0:
            raise HypothesisViolation(f"depth vanishes at r = {r}")
        # left derivative of the depth is -boundary[1]
        if -d.boundary[1] > m:
            raise HypothesisViolation(f"left slope exceeds {m} at r = {r}")
    # annulus coefficients a_i of F = sum a_i X^(-i)
    imax = max(p * N, m) + tail
    zero_const = RatFunc.zero(ring)
    a = [zero_const] * (imax + 1)
    a[0] = RatFunc.const(ring, poly_part.coeff(0)) if not poly_part.is_zero() else zero_const
    for pt in poles:
        k = F.pole_order(pt)
        series = F.local_series(pt, k)
        for j in range(1, k + 1):
            cj = series[k - j]
            if cj.is_zero():
                continue
            if pt.is_zero():
                a[j] = a[j] + cj
                continue
            power = RatFunc.one(ring)
            ptc = RatFunc.const(ring, pt)
            binom = 1
            for l in range(0, imax - j + 1):
                if l > 0:
                    binom = binom * (j - 1 + l) // l
                    power = power * ptc
                coeff = ring.from_int(binom)
                if not coeff.is_zero():
                    a[j + l] = a[j + l] + cj * RatFunc.const(ring, coeff) * power
    # solve the b_j downward
    b = [zero_const] * (N + 1)
    for j in range(N, 0, -1):
        rhs = -a[p * j]
        if p * j <= N:
            rhs = rhs + b[p * j]
        b[j] = rhs.pth_root()
    c = {}
    for k in range(1, m + 1):
        ck = a[k]
        if k % p == 0 and k // p <= N:
            ck = ck + b[k // p] ** p
        if k <= N:
            ck = ck - b[k]
        c[k] = ck
    if c[m].is_zero():
        raise HypothesisViolation("c_m vanished; slope bound not attained")

    def val(cf: RatFunc) -> Fraction:
        return cf.num.coeff(0).valuation() - cf.den.coeff(0).valuation()

    mu = Fraction(0)
    vm = val(c[m])
    for k in range(1, m):
        if c[k].is_zero():
            continue
        cand = Fraction(vm - val(c[k]), m - k)
        if cand > mu:
            mu = cand
    return mu / p, c


# ---------------------------------------------------------------------------
# good reduction certificates


@dataclass
class GoodReductionCertificate:
    etale: bool
    good: bool
    depth: Fraction
    generic_points: list
    generic_matrix: list[list[int]]
    generic_sum: int
    special_conductor: int | None
    special_levels: list[int] | None
    reduction: WittVec | None


def _point_sort_key(pt: KElem):
    if pt.is_zero():
        return (0, 0, "")
    return (1, -pt.valuation(), str(pt))


def check_good_reduction(vec: WittVec, max_steps: int | None = None) -> GoodReductionCertificate:
    """Certify etale / good reduction of the cover of the open unit disc."""
    from .ramification import branching_datum

    for f in vec.entries:
        if f.num.degree() > f.den.degree():
            raise BranchOutsideDisc("pole at infinity")
        for pt in f.pole_support(require_all=True):
            if pt is INFINITY:
                raise BranchOutsideDisc("pole at infinity")
            if not pt.is_zero() and pt.valuation() <= 0:
                raise BranchOutsideDisc(f"branch point {pt} outside the open disc")
    reduced, _, _, _ = reduce_vector(vec)
    datum, _ = branching_datum(reduced)
    order = sorted(range(len(datum.points)), key=lambda i: _point_sort_key(datum.points[i]))
    points = [datum.points[i] for i in order]
    matrix = [datum.matrix[i] for i in order]
    generic_sum = sum(row[-1] for row in matrix)
    sd = swan(vec, Place(KElem.zero(vec.ring.field), Fraction(0)), max_steps=max_steps)
    etale = sd.depth == 0
    special_conductor = None
    special_levels = None
    reduction = None
    good = False
    if etale:
        reduction = sd.reduction
        special_conductor = sd.boundary[0] + 1
        if not all(f.is_zero() for f in reduction.entries):
            sdatum, _ = branching_datum(reduction)
            if sdatum.matrix:
                special_levels = [max(row[i] for row in sdatum.matrix) for i in range(vec.n)]
        good = generic_sum == special_conductor
    return GoodReductionCertificate(
        etale=etale,
        good=good,
        depth=sd.depth,
        generic_points=points,
        generic_matrix=matrix,
        generic_sum=generic_sum,
        special_conductor=special_conductor,
        special_levels=special_levels,
        reduction=reduction,
    )
