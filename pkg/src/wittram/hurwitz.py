"""Hurwitz trees: decorated combinatorial trees carrying degeneration data.

A tree records, for a cyclic p-power cover of the open t-adic disc, the
cluster geometry of its branch points together with per-vertex depth and
differential conductors, per-edge thicknesses and slopes, per-leaf
conductors, monodromy exponents, and (for an etale root) the reduced
degeneration.  The validator re-checks every axiom with exact arithmetic:

  H1 positive depth off the root          H5 slope = ord_inf(omega_target)+1
  H2 no zeros/poles on the punctured part H6 depth increment = (p-1) eps d
  H3 pole orders match across edges       H7 leaf conductor = pole order
  H4 root degree matches the trunk        H8 monodromy containment/branching

plus the slope identity d_e = (sum of conductors beyond e) - 1 and, on
request, the compatibility of constant coefficients along every edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .differential import DiffForm, cartier, check_cartier_rules, solve_cartier_with_orders
from .errors import (
    InseparableBranchPoints,
    LevelTooLow,
    ModeUnavailable,
    NoSuchEdge,
    RecipeDegenerate,
    WittramError,
)
from .fq import Fq
from .laurent import KElem
from .poly import Poly, Ring
from .ratfunc import RatFunc
from .witt import WittVec, is_reduced


@dataclass
class Vertex:
    id: str
    depth: Fraction
    diff: DiffForm | None
    monodromy: int


@dataclass
class Edge:
    id: str
    source: str
    target: str
    thickness: Fraction
    slope: int
    point: object  # reduction of the target cluster on the source component


@dataclass
class Leaf:
    id: str
    vertex: str
    conductor: int
    position: object  # KElem or symbolic label
    point: object  # reduction on its component
    monodromy: int = 1


@dataclass
class TreeReport:
    valid: bool
    findings: list[str]


class HurwitzTree:
    def __init__(self, p: int, n: int, res_field: Fq, is_subtree: bool = False):
        self.p = p
        self.n = n
        self.field = res_field
        self.vertices: dict[str, Vertex] = {}
        self.edges: dict[str, Edge] = {}
        self.leaves: dict[str, Leaf] = {}
        self.root_id: str | None = None
        self.trunk_id: str | None = None
        self.degeneration: WittVec | None = None
        self.is_subtree = is_subtree

    # -- construction helpers -------------------------------------------------
    def add_vertex(self, vid, depth, diff, monodromy) -> Vertex:
        v = Vertex(vid, Fraction(depth), diff, monodromy)
        self.vertices[vid] = v
        return v

    def add_edge(self, eid, source, target, thickness, slope, point) -> Edge:
        e = Edge(eid, source, target, Fraction(thickness), slope, point)
        self.edges[eid] = e
        return e

    def add_leaf(self, lid, vertex, conductor, position, point, monodromy=1) -> Leaf:
        b = Leaf(lid, vertex, conductor, position, point, monodromy)
        self.leaves[lid] = b
        return b

    # -- structure queries -----------------------------------------------------
    def child_edges(self, vid) -> list[Edge]:
        return [e for e in self.edges.values() if e.source == vid]

    def vertex_leaves(self, vid) -> list[Leaf]:
        return [b for b in self.leaves.values() if b.vertex == vid]

    def parent_edge(self, vid) -> Edge | None:
        for e in self.edges.values():
            if e.target == vid:
                return e
        return None

    def preorder(self) -> list[str]:
        out = []

        def walk(vid):
            out.append(vid)
            for e in self.child_edges(vid):
                walk(e.target)

        walk(self.root_id)
        return out

    def leaves_beyond(self, eid) -> list[Leaf]:
        e = self.edges[eid]
        found = []

        def walk(vid):
            found.extend(self.vertex_leaves(vid))
            for ce in self.child_edges(vid):
                walk(ce.target)

        walk(e.target)
        return found

    def leaf_order(self) -> list[str]:
        """Leaves in preorder of their vertices, insertion order within."""
        out = []
        for vid in self.preorder():
            out.extend(b.id for b in self.vertex_leaves(vid))
        return out

    def conductor(self) -> int:
        return sum(b.conductor for b in self.leaves.values())

    def depth_at(self, vid) -> Fraction:
        return self.vertices[vid].depth

    def copy_shell(self) -> "HurwitzTree":
        t = HurwitzTree(self.p, self.n, self.field, self.is_subtree)
        t.root_id = self.root_id
        t.trunk_id = self.trunk_id
        return t


# ---------------------------------------------------------------------------


def _epart(omega: DiffForm, point) -> DiffForm:
    """Principal part of the form at the point."""
    ring = omega.ring
    m = omega.f.pole_order(point)
    series = omega.f.local_series(point, m)
    lin = Poly(ring, {1: ring.one(), 0: -ring.lift(point)})
    acc = RatFunc.zero(ring)
    for j in range(1, m + 1):
        c = series[m - j]
        if not c.is_zero():
            acc = acc + c / RatFunc.from_poly(lin ** j)
    return DiffForm(acc)


def _leading_coeff(omega: DiffForm, point):
    return omega.f.leading_at(point).const_value()


def _product_constant(omega: DiffForm):
    from .differential import product_form

    shape = product_form(omega)
    return None if shape is None else shape[0]


def _degeneration_stats(p: int, vec: WittVec):
    """(l, d_l, d) of a root degeneration: degree and leading coefficient of
    the top entry, and the trunk degree max p^(n-l) deg(f^l)."""
    zero_pt = vec.ring.field.zero()
    n = vec.n
    degs = []
    for f in vec.entries:
        degs.append(f.pole_order(zero_pt) if not f.is_zero() else 0)
    d = 0
    for i, deg in enumerate(degs, start=1):
        if deg:
            d = max(d, p ** (n - i) * deg)
    top = vec.entries[-1]
    if top.is_zero() or degs[-1] == 0:
        return 0, None, d
    lead = top.leading_at(zero_pt).const_value()
    return degs[-1], lead, d


def validate_tree(tree: HurwitzTree, check_compat: bool = False) -> TreeReport:
    findings: list[str] = []
    p = tree.p
    root = tree.vertices[tree.root_id]
    trunk = tree.edges[tree.trunk_id] if tree.trunk_id else None

    def fail(axiom: str, msg: str):
        findings.append(f"{axiom}: {msg}")

    skip_root = tree.is_subtree

    # H1: nonzero depth off the root
    for vid, v in tree.vertices.items():
        if vid == tree.root_id:
            continue
        if v.depth <= 0:
            fail("H1", f"{vid} has depth {v.depth}")
        if v.diff is None:
            fail("H1", f"{vid} is missing its differential")

    # H2: poles/zeros of the vertex differential confined to marked points
    for vid, v in tree.vertices.items():
        if vid == tree.root_id or v.diff is None:
            continue
        pts = [e.point for e in tree.child_edges(vid)] + [
            b.point for b in tree.vertex_leaves(vid)
        ]
        if v.diff.f.num.degree() > 0:
            fail("H2", f"{vid}: differential has zeros off the marked points")
        try:
            den_roots = v.diff.f.den.roots(require_all=True)
        except WittramError:
            fail("H2", f"{vid}: differential denominator does not split")
            continue
        for rt, _ in den_roots:
            if not any(rt == q for q in pts):
                fail("H2", f"{vid}: pole at unmarked point {rt}")

    # H3 / H5 / Remark 4.2 on edges; H6 depth increments
    for eid, e in tree.edges.items():
        tv = tree.vertices[e.target]
        sv = tree.vertices[e.source]
        if tv.diff is None:
            continue
        ord_inf = tv.diff.ord_at("inf")
        if e.slope != ord_inf + 1:
            fail("H5", f"{eid}: slope {e.slope} != ord_inf(omega_target)+1 = {ord_inf + 1}")
        beyond = sum(b.conductor for b in tree.leaves_beyond(eid))
        if e.slope != beyond - 1:
            fail("slope-sum", f"{eid}: slope {e.slope} != sum of conductors - 1 = {beyond - 1}")
        if eid != tree.trunk_id or (sv.diff is not None):
            if sv.diff is not None:
                pole = sv.diff.f.pole_order(e.point)
                if pole != ord_inf + 2:
                    fail(
                        "H3",
                        f"{eid}: source pole order {pole} != ord_inf(target)+2 = {ord_inf + 2}",
                    )
        expected = sv.depth + (p - 1) * e.thickness * e.slope
        if tv.depth != expected:
            fail("H6", f"{eid}: target depth {tv.depth} != {expected}")

    # H4: root degeneration degree matches the trunk differential
    if not skip_root and trunk is not None:
        tv = tree.vertices[trunk.target]
        if root.depth == 0:
            if tree.degeneration is None:
                fail("H4", "etale root without a degeneration vector")
            else:
                if not is_reduced(tree.degeneration):
                    fail("H4", "root degeneration is not reduced")
                _, _, d = _degeneration_stats(p, tree.degeneration)
                if tv.diff is not None and d != tv.diff.ord_at("inf") + 1:
                    fail("H4", f"degeneration degree {d} != ord_inf+1 at {trunk.target}")
        else:
            if root.diff is None:
                fail("H4", "radical root needs a differential")

    # H7: leaf conductors are pole orders
    for b in tree.leaves.values():
        v = tree.vertices[b.vertex]
        if v.diff is None:
            continue
        pole = v.diff.f.pole_order(b.point)
        if pole != b.conductor:
            fail("H7", f"{b.id}: pole order {pole} != conductor {b.conductor}")

    # H8: monodromy containment and branching
    for vid, v in tree.vertices.items():
        child_ms = [tree.vertices[e.target].monodromy for e in tree.child_edges(vid)]
        child_ms += [b.monodromy for b in tree.vertex_leaves(vid)]
        if any(m > v.monodromy for m in child_ms):
            fail("H8", f"{vid}: child monodromy exceeds the vertex monodromy")
        if vid == tree.root_id:
            if not skip_root:
                kids = tree.child_edges(vid)
                if len(kids) != 1 or tree.vertex_leaves(vid):
                    fail("H8", "root must have exactly the trunk as successor")
                elif tree.vertices[kids[0].target].monodromy != v.monodromy:
                    fail("H8", "trunk target must carry the full monodromy")
            continue
        if child_ms:
            index_sum = sum(p ** (v.monodromy - m) for m in child_ms)
            if index_sum <= 1:
                fail("H8", f"{vid}: branching index sum {index_sum} <= 1")

    if check_compat:
        findings.extend(_check_compat(tree))

    return TreeReport(valid=not findings, findings=findings)


def _check_compat(tree: HurwitzTree) -> list[str]:
    findings = []
    p = tree.p
    for eid, e in tree.edges.items():
        sv = tree.vertices[e.source]
        tv = tree.vertices[e.target]
        if tv.diff is None:
            continue
        c_target = _product_constant(tv.diff)
        if e.source == tree.root_id and sv.depth == 0:
            if tree.degeneration is None:
                continue
            l, d_l, _ = _degeneration_stats(p, tree.degeneration)
            prefix = tree.degeneration.entries[:-1]
            prev_d = 0
            for i, f in enumerate(prefix, start=1):
                if not f.is_zero():
                    prev_d = max(
                        prev_d,
                        p ** (tree.n - 1 - i) * f.pole_order(tree.field.zero()),
                    )
            iota_prev = prev_d + 1 if prev_d else 0
            iota_n = tree.conductor()
            if tree.n >= 1 and l < p * iota_prev - p:
                continue  # compatibility at the root is not required
            if l == 0 or d_l is None:
                findings.append("compat: root degeneration has no leading term")
                continue
            if iota_n != l + 1:
                findings.append(
                    f"compat: conductor {iota_n} != degeneration degree + 1 = {l + 1}"
                )
                continue
            if c_target is None:
                findings.append(f"compat: {e.target} differential is not in product form")
                continue
            lhs = c_target * tree.field.from_int(iota_n - 1)
            rhs = d_l * tree.field.from_int(l)
            if lhs != rhs:
                findings.append(
                    f"compat: root rule fails at {e.target}: c*(iota-1) != l*d_l"
                )
            continue
        if sv.diff is None or sv.depth == 0:
            continue
        c_source = _leading_coeff(sv.diff, e.point)
        if c_target is None:
            findings.append(f"compat: {e.target} differential is not in product form")
            continue
        if c_source != c_target:
            findings.append(
                f"compat: e-part constant at {e.source} differs from constant at {e.target}"
            )
    return findings


# ---------------------------------------------------------------------------
# tree from a cover


def tree_from_cover(vec: WittVec, max_steps: int | None = None) -> HurwitzTree:
    from .disc import Place, check_good_reduction, swan
    from .ramification import branching_datum
    from .witt import reduce_vector

    cert = check_good_reduction(vec, max_steps=max_steps)
    if not cert.etale:
        raise WittramError("cover does not have etale reduction")
    points = cert.generic_points
    matrix = cert.generic_matrix
    if len(points) != len({str(pt) for pt in points}):
        raise InseparableBranchPoints("coincident branch points")
    n = vec.n
    p = vec.ring.field.p
    res_field = vec.ring.field
    tree = HurwitzTree(p, n, res_field)

    first_level = [next(i for i, e in enumerate(row) if e) for row in matrix]
    leaf_mono = [n - j for j in first_level]  # n - J + 1 with J = first_level+1

    # cluster recursion in the tree coordinate (valuations divided by p)
    ids = {"v": 0, "e": 0, "b": 0}

    def fresh(kind):
        ids[kind] += 1
        return f"{kind}{ids[kind]}"

    def cluster_depth(idxs) -> Fraction:
        best = None
        for i in idxs:
            for j in idxs:
                if i < j:
                    d = points[i] - points[j]
                    if d.is_zero():
                        raise InseparableBranchPoints("coincident branch points")
                    v = Fraction(d.valuation(), p)
                    if best is None or v < best:
                        best = v
        return best

    def reduce_point(pt: KElem, center: KElem, r: Fraction):
        diff = pt - center
        if diff.is_zero():
            return res_field.zero()
        return diff.coeff(p * r)

    def build(idxs, parent_vid, parent_r, eid_hint):
        if len(idxs) == 1:
            i = idxs[0]
            lid = fresh("b")
            pt = reduce_point(points[i], centers[parent_vid], parent_r)
            tree.add_leaf(lid, parent_vid, matrix[i][-1], points[i], pt, leaf_mono[i])
            return
        r = cluster_depth(idxs)
        center = points[idxs[0]]
        vid = fresh("v")
        datum = swan(vec, Place(center, r), max_steps=max_steps)
        mono = max(leaf_mono[i] for i in idxs)
        tree.add_vertex(vid, datum.depth, datum.diff, mono)
        centers[vid] = center
        radii[vid] = r
        eid = fresh("e")
        beyond = sum(matrix[i][-1] for i in idxs)
        if parent_vid is None:
            pt = None
        else:
            pt = reduce_point(center, centers[parent_vid], parent_r)
        tree.add_edge(eid, parent_vid if parent_vid else tree.root_id, vid,
                      r - parent_r if parent_vid else r,
                      beyond - 1,
                      pt if parent_vid else res_field.zero())
        if parent_vid is None:
            tree.trunk_id = eid
        # split into subclusters: equivalence by valuation > p*r
        groups = []
        used = set()
        for i in idxs:
            if i in used:
                continue
            group = [i]
            used.add(i)
            for j in idxs:
                if j in used:
                    continue
                d = points[i] - points[j]
                if Fraction(d.valuation(), p) > r:
                    group.append(j)
                    used.add(j)
            groups.append(group)
        for group in groups:
            build(group, vid, r, None)

    centers: dict = {}
    radii: dict = {}
    tree.root_id = "v0"
    if len(points) < 1:
        raise WittramError("no branch points")
    if len(points) == 1:
        # degenerate tree: trunk plus one leaf
        tree.add_vertex("v0", Fraction(0), None, n)
        vid = fresh("v")
        pt0 = points[0]
        r = pt0.valuation() if not pt0.is_zero() else Fraction(1)
        r = Fraction(r, p) if not pt0.is_zero() else Fraction(1)
        datum = swan(vec, Place(pt0, r), max_steps=max_steps)
        tree.add_vertex(vid, datum.depth, datum.diff, leaf_mono[0])
        eid = fresh("e")
        tree.add_edge(eid, "v0", vid, r, matrix[0][-1] - 1, res_field.zero())
        tree.trunk_id = eid
        centers[vid] = pt0
        lid = fresh("b")
        tree.add_leaf(lid, vid, matrix[0][-1], pt0, res_field.zero(), leaf_mono[0])
        tree.degeneration = cert.reduction
        return tree
    root_mono = max(leaf_mono)
    tree.add_vertex("v0", Fraction(0), None, root_mono)
    centers["v0"] = KElem.zero(res_field)
    build(list(range(len(points))), None, Fraction(0), None)
    tree.degeneration = cert.reduction
    return tree


# ---------------------------------------------------------------------------
# quotient tree (level n -> n-1)


def quotient_tree(tree: HurwitzTree, level_conductors: dict) -> HurwitzTree:
    """The level-(n-1) tree: erase Z/p leaves and Z/p-target edges, smooth
    pass-through vertices, then re-derive depths and differentials from the
    root outward so the level rules hold."""
    if tree.n < 2:
        raise LevelTooLow("quotient of a level-1 tree")
    p = tree.p
    out = HurwitzTree(p, tree.n - 1, tree.field)
    out.root_id = tree.root_id

    keep_leaf = {lid: b for lid, b in tree.leaves.items() if b.monodromy > 1}
    for lid in keep_leaf:
        if lid not in level_conductors:
            raise WittramError(f"missing level conductor for {lid}")

    # which vertices survive: monodromy > 1 and still carrying structure
    def surviving_subtree(vid) -> bool:
        v = tree.vertices[vid]
        if v.monodromy <= 1:
            return False
        if any(b.monodromy > 1 for b in tree.vertex_leaves(vid)):
            return True
        return any(surviving_subtree(e.target) for e in tree.child_edges(vid))

    # build a skeleton: (vertex id, merged thickness from surviving parent)
    def walk(vid, parent_new, acc_thickness, via_edge):
        kids = [e for e in tree.child_edges(vid) if surviving_subtree(e.target)]
        leaves = [b for b in tree.vertex_leaves(vid) if b.monodromy > 1]
        passthrough = (
            vid != tree.root_id
            and len(kids) + len(leaves) == 1
            and len(kids) == 1
        )
        if passthrough:
            e = kids[0]
            walk(e.target, parent_new, acc_thickness + e.thickness, via_edge)
            return
        v = tree.vertices[vid]
        out.add_vertex(vid, Fraction(0), None, max(1, v.monodromy - 1))
        if parent_new is not None:
            eid = via_edge
            out.add_edge(eid, parent_new, vid, acc_thickness, 0, tree.edges[via_edge].point if via_edge in tree.edges else None)
        for b in leaves:
            out.add_leaf(b.id, vid, level_conductors[b.id], b.position, b.point,
                         max(1, b.monodromy - 1))
        for e in kids:
            walk(e.target, vid, e.thickness, e.id)

    root_kids = [e for e in tree.child_edges(tree.root_id) if surviving_subtree(e.target)]
    if len(root_kids) != 1:
        raise WittramError("quotient tree must keep a single trunk")
    v0 = tree.vertices[tree.root_id]
    out.add_vertex(tree.root_id, v0.depth, None, max(1, v0.monodromy - 1))
    e0 = root_kids[0]
    # find first non-passthrough target below the root
    walk(e0.target, tree.root_id, e0.thickness, e0.id)
    out.trunk_id = next(e.id for e in out.edges.values() if e.source == tree.root_id)
    # fix the trunk's stored point
    out.edges[out.trunk_id].point = tree.field.zero()

    # slopes from the new conductors
    for e in out.edges.values():
        e.slope = sum(b.conductor for b in out.leaves_beyond(e.id)) - 1

    # degeneration prefix at an etale root
    if v0.depth == 0:
        if tree.degeneration is None:
            raise WittramError("etale root without degeneration")
        out.degeneration = WittVec(
            tree.degeneration.ring, tree.degeneration.entries[: tree.n - 1]
        )

    # depths and differentials from the root outward
    _assign_quotient_data(tree, out)
    return out


def _assign_quotient_data(tree: HurwitzTree, out: HurwitzTree) -> None:
    p = out.p
    res_ring = Ring(out.field, False)

    def product_diff(vid, constant) -> DiffForm:
        den = Poly.one(res_ring)
        for e in out.child_edges(vid):
            beyond = sum(b.conductor for b in out.leaves_beyond(e.id))
            lin = Poly(res_ring, {1: res_ring.one(), 0: -res_ring.lift(e.point)})
            den = den * lin ** beyond
        for b in out.vertex_leaves(vid):
            lin = Poly(res_ring, {1: res_ring.one(), 0: -res_ring.lift(b.point)})
            den = den * lin ** b.conductor
        return DiffForm(RatFunc(Poly.const(res_ring, constant), den))

    def reference_constant(eid) -> object:
        e = out.edges[eid]
        sv = out.vertices[e.source]
        if e.source == out.root_id and sv.depth == 0:
            l, d_l, _ = _degeneration_stats(p, out.degeneration) if out.degeneration else (0, None, 0)
            iota = out.conductor()
            if l and d_l is not None and l == iota - 1:
                return d_l * out.field.from_int(l) / out.field.from_int(iota - 1)
            return out.field.one()
        if sv.diff is not None:
            return _leading_coeff(sv.diff, e.point)
        return out.field.one()

    for vid in out.preorder():
        if vid == out.root_id:
            continue
        e = out.parent_edge(vid)
        old = tree.vertices[vid]
        image = cartier(old.diff) if old.diff is not None else None
        if image is not None and not image.is_zero():
            out.vertices[vid].depth = old.depth / p
            out.vertices[vid].diff = image
        else:
            sv = out.vertices[e.source]
            out.vertices[vid].depth = sv.depth + (p - 1) * e.thickness * e.slope
            out.vertices[vid].diff = product_diff(vid, reference_constant(e.id))


# ---------------------------------------------------------------------------
# extension predicate


@dataclass
class ExtendReport:
    extends: bool
    findings: list[str]
    branches: dict  # vertex id -> "equality" / "strict"


def _leaf_by_position(tree: HurwitzTree):
    return {str(b.position): b for b in tree.leaves.values()}


def _shape_signature(tree: HurwitzTree, keep_positions: set[str]):
    """Nested partition of the kept leaves with accumulated thicknesses."""

    def walk(vid, acc):
        parts = []
        here = [
            str(b.position)
            for b in tree.vertex_leaves(vid)
            if str(b.position) in keep_positions
        ]
        for e in tree.child_edges(vid):
            sub = walk(e.target, e.thickness)
            if sub is not None:
                parts.append(sub)
        if not parts and not here:
            return None
        if not here and len(parts) == 1:
            # pass-through vertex: merge thicknesses
            inner = parts[0]
            return (acc + inner[0], inner[1], inner[2])
        return (acc, tuple(sorted(here)), tuple(sorted(parts, key=repr)))

    return walk(tree.root_id, Fraction(0))


def _vertex_match(tp: HurwitzTree, tn: HurwitzTree):
    """Pair vertices by the set of succeeding old-leaf positions."""
    old_positions = {str(b.position) for b in tp.leaves.values()}

    def leafset(tree, vid):
        out = set()

        def walk(w):
            for b in tree.vertex_leaves(w):
                if str(b.position) in old_positions:
                    out.add(str(b.position))
            for e in tree.child_edges(w):
                walk(e.target)

        walk(vid)
        return frozenset(out)

    prev_sets = {vid: leafset(tp, vid) for vid in tp.vertices}
    next_sets = {vid: leafset(tn, vid) for vid in tn.vertices}
    pairs = {}
    for vid, s in prev_sets.items():
        if vid == tp.root_id:
            pairs[vid] = tn.root_id
            continue
        candidates = [
            w
            for w, s2 in next_sets.items()
            if s2 == s and w != tn.root_id and not _is_passthrough_for(tn, w, s)
        ]
        if len(candidates) == 1:
            pairs[vid] = candidates[0]
        elif candidates:
            # the deepest candidate corresponds to the original vertex
            def height(tree, wid):
                d = 0
                while wid != tree.root_id:
                    wid = tree.parent_edge(wid).source
                    d += 1
                return d

            pairs[vid] = max(candidates, key=lambda w: height(tn, w))
        else:
            pairs[vid] = None
    return pairs


def _is_passthrough_for(tree, vid, leafset) -> bool:
    """True when the vertex only forwards the given leaf set to one child."""
    here = {str(b.position) for b in tree.vertex_leaves(vid)} & leafset
    if here:
        return False
    count = 0
    for e in tree.child_edges(vid):
        sub = set()

        def walk(w):
            for b in tree.vertex_leaves(w):
                sub.add(str(b.position))
            for e2 in tree.child_edges(w):
                walk(e2.target)

        walk(e.target)
        if sub & leafset:
            count += 1
    return count == 1 and len(tree.vertex_leaves(vid)) + len(tree.child_edges(vid)) > count


def check_extends(tp: HurwitzTree, tn: HurwitzTree) -> ExtendReport:
    findings = []
    branches = {}
    p = tp.p
    if tn.n != tp.n + 1:
        findings.append(f"levels {tp.n} -> {tn.n} are not consecutive")
        return ExtendReport(False, findings, branches)

    old_leaves = _leaf_by_position(tp)
    new_leaves = _leaf_by_position(tn)
    missing = set(old_leaves) - set(new_leaves)
    if missing:
        findings.append(f"leaves missing in the extension: {sorted(missing)}")
        return ExtendReport(False, findings, branches)

    # (1) shape refinement on the common leaves
    sig_prev = _shape_signature(tp, set(old_leaves))
    sig_next = _shape_signature(tn, set(old_leaves))
    if sig_prev != sig_next:
        findings.append("decorated tree is not a refinement of the old shape")

    # (2) depth/differential rules at shared vertices
    pairs = _vertex_match(tp, tn)
    for vid, wid in pairs.items():
        if vid == tp.root_id:
            continue
        if wid is None:
            findings.append(f"no matching vertex for {vid}")
            continue
        vp = tp.vertices[vid]
        vn = tn.vertices[wid]
        report = check_cartier_rules([(vp.depth, vp.diff), (vn.depth, vn.diff)])
        if not report.valid:
            findings.extend(f"{vid}: {msg}" for msg in report.findings)
        if report.branches:
            branches[vid] = report.branches[0]
        # (3) monodromy exponent +1 on shared vertices
        if vn.monodromy != vp.monodromy + 1:
            findings.append(f"{vid}: monodromy {vp.monodromy} -> {vn.monodromy}")

    for pos, b in old_leaves.items():
        nb = new_leaves[pos]
        if nb.monodromy != b.monodromy + 1:
            findings.append(f"leaf {pos}: monodromy {b.monodromy} -> {nb.monodromy}")

    # (4) genuinely new vertices and leaves carry exactly Z/p; subdivision
    # points of old edges instead inherit the containment monodromy (that is
    # what the worked split-trunk extensions do)
    matched = {wid for wid in pairs.values() if wid}
    old_pos = set(old_leaves)
    for wid, v in tn.vertices.items():
        if wid == tn.root_id or wid in matched:
            continue

        def has_old_beyond(w):
            for b in tn.vertex_leaves(w):
                if str(b.position) in old_pos:
                    return True
            return any(has_old_beyond(e.target) for e in tn.child_edges(w))

        if has_old_beyond(wid):
            continue
        if v.monodromy != 1:
            findings.append(f"new vertex {wid} has monodromy exponent {v.monodromy}")
    for pos, nb in new_leaves.items():
        if pos in old_leaves:
            continue
        if nb.monodromy != 1:
            findings.append(f"new leaf {pos} has monodromy exponent {nb.monodromy}")

    # (5) degeneration prefix at etale roots
    dp = tp.vertices[tp.root_id].depth
    dn = tn.vertices[tn.root_id].depth
    if dp == 0 and dn == 0:
        if tp.degeneration is None or tn.degeneration is None:
            findings.append("etale roots must carry degenerations")
        else:
            prefix = tn.degeneration.entries[: tp.n]
            if any(a != b for a, b in zip(prefix, tp.degeneration.entries)):
                findings.append("root degeneration is not a Witt-prefix extension")
    return ExtendReport(extends=not findings, findings=findings, branches=branches)


# ---------------------------------------------------------------------------
# the three extension constructors


def extend_tree(
    tree: HurwitzTree, mode: str, a: int | None = None, designated: str | None = None
) -> HurwitzTree:
    """Extend a level-(n-1) tree to level n.

    mode = "minimal":      conductor p*iota - p + 1
    mode = "additive":     conductor p*iota - p + 1 + a   (p does not divide a)
    mode = "ness":         conductor p*iota - p + 1 + a with a = a' + p*u,
                           realised with a split trunk and u+1 new p-leaves,
                           so no level jump is essential.

    `designated` names the leaf whose conductor absorbs the non-p-divisible
    part (the construction allows any choice; the default is the first leaf
    in preorder).
    """
    p = tree.p
    if designated is None:
        designated = tree.leaf_order()[0]
    if designated not in tree.leaves:
        raise ModeUnavailable(f"no leaf named {designated}")
    if mode == "minimal":
        return _extend_plain(tree, 0, designated)
    if mode == "additive":
        if a is None or a <= 0 or a % p == 0:
            raise ModeUnavailable("additive mode needs a positive a prime to p")
        return _extend_plain(tree, a, designated)
    if mode == "ness":
        if a is None or a <= 0 or a % p == 0:
            raise ModeUnavailable("ness mode needs a positive a prime to p")
        return _extend_ness(tree, a, designated)
    raise ModeUnavailable(f"unknown mode {mode}")


def _new_conductors(tree: HurwitzTree, bump_leaf: str, bump: int) -> dict:
    """bump = 0 for minimal at the designated leaf; else additive-a."""
    p = tree.p
    out = {}
    for lid, b in tree.leaves.items():
        if lid == bump_leaf:
            out[lid] = p * b.conductor - p + 1 + bump
        else:
            out[lid] = p * b.conductor
    return out


def _depths_by_chain(tree: HurwitzTree, out: HurwitzTree, root_depth: Fraction):
    out.vertices[out.root_id].depth = root_depth
    p = out.p
    for vid in out.preorder():
        if vid == out.root_id:
            continue
        e = out.parent_edge(vid)
        sv = out.vertices[e.source]
        out.vertices[vid].depth = sv.depth + (p - 1) * e.thickness * e.slope


def _extend_plain(tree: HurwitzTree, a: int, b1: str) -> HurwitzTree:
    """Shared construction for minimal (a = 0) and additive (a > 0) modes."""
    p = tree.p
    n = tree.n + 1
    res_ring = Ring(tree.field, False)
    conductors = _new_conductors(tree, b1, a)

    out = HurwitzTree(p, n, tree.field)
    out.root_id = tree.root_id
    out.trunk_id = tree.trunk_id
    for vid, v in tree.vertices.items():
        out.add_vertex(vid, Fraction(0), None, v.monodromy + 1)
    for eid, e in tree.edges.items():
        out.add_edge(eid, e.source, e.target, e.thickness, 0, e.point)
    for lid, b in tree.leaves.items():
        out.add_leaf(lid, b.vertex, conductors[lid], b.position, b.point, b.monodromy + 1)
    for e in out.edges.values():
        e.slope = sum(b.conductor for b in out.leaves_beyond(e.id)) - 1

    root = tree.vertices[tree.root_id]
    _depths_by_chain(tree, out, p * root.depth)

    # root degeneration / differential
    iota_n = out.conductor()
    if root.depth == 0:
        if tree.degeneration is None:
            raise ModeUnavailable("etale root without degeneration")
        ring = tree.degeneration.ring
        if a == 0:
            top = RatFunc.zero(ring)
        else:
            l = iota_n - 1
            top = RatFunc(Poly.one(ring), Poly.x(ring) ** l)
        out.degeneration = WittVec(ring, tree.degeneration.entries + (top,))
    else:
        raise ModeUnavailable("extension of radical-root trees is not supported")

    # differentials: Cartier solutions where the depth doubles exactly,
    # exact compatible product forms elsewhere
    for vid in out.preorder():
        if vid == out.root_id:
            continue
        old_v = tree.vertices[vid]
        new_v = out.vertices[vid]
        orders = _vertex_orders(out, vid)
        if new_v.depth == p * old_v.depth and old_v.diff is not None:
            new_v.diff = solve_cartier_with_orders(old_v.diff, orders)
        else:
            constant = _incoming_constant(out, vid, iota_n)
            new_v.diff = _product_form(res_ring, orders, constant)
    return out


def _vertex_orders(out: HurwitzTree, vid) -> list[tuple]:
    orders = []
    for e in out.child_edges(vid):
        beyond = sum(b.conductor for b in out.leaves_beyond(e.id))
        orders.append((e.point, beyond))
    for b in out.vertex_leaves(vid):
        orders.append((b.point, b.conductor))
    return orders


def _incoming_constant(out: HurwitzTree, vid, iota_n: int):
    e = out.parent_edge(vid)
    sv = out.vertices[e.source]
    if e.source == out.root_id and sv.depth == 0:
        l, d_l, _ = _degeneration_stats(out.p, out.degeneration)
        if l and d_l is not None and l == iota_n - 1:
            return d_l * out.field.from_int(l) / out.field.from_int(iota_n - 1)
        return out.field.one()
    return _leading_coeff(sv.diff, e.point)


def _product_form(res_ring: Ring, orders: list[tuple], constant) -> DiffForm:
    den = Poly.one(res_ring)
    for pt, order in orders:
        lin = Poly(res_ring, {1: res_ring.one(), 0: -res_ring.lift(pt)})
        den = den * lin ** order
    return DiffForm(RatFunc(Poly.const(res_ring, constant), den))


def _extend_ness(tree: HurwitzTree, a: int, b1: str) -> HurwitzTree:
    p = tree.p
    n = tree.n + 1
    res_ring = Ring(tree.field, False)
    u, a_prime = divmod(a, p)
    if a_prime == 0:
        raise ModeUnavailable("ness needs a prime to p")
    root = tree.vertices[tree.root_id]
    if root.depth != 0:
        raise ModeUnavailable("ness extension needs an etale root")
    if tree.degeneration is None:
        raise ModeUnavailable("etale root without degeneration")
    trunk = tree.edges[tree.trunk_id]
    v1 = trunk.target
    kids = tree.child_edges(v1)
    if len(kids) < 2:
        raise RecipeDegenerate("ness needs at least two directions at the top vertex")

    def subtree_leaves(eid):
        return [b.id for b in tree.leaves_beyond(eid)]

    # designated directions: the one containing b1, then the next one
    dir1 = next((e for e in kids if b1 in subtree_leaves(e.id)), None)
    if dir1 is None:
        raise RecipeDegenerate("designated leaf must sit beyond the top vertex")
    rest = [e for e in kids if e.id != dir1.id]
    dir2 = rest[0]

    # leaf conductors: additive(a'-1) on dir1 (minimal when a' = 1), minimal
    # on dir2 (its first leaf in order), p* elsewhere
    conductors = {}
    dir2_first = next(lid for lid in tree.leaf_order() if lid in subtree_leaves(dir2.id))
    for lid, b in tree.leaves.items():
        if lid == b1:
            conductors[lid] = p * b.conductor - p + a_prime
        elif lid == dir2_first:
            conductors[lid] = p * b.conductor - p + 1
        else:
            conductors[lid] = p * b.conductor
    # leaves directly at v1 (not under dir1/dir2) already got p*; fine.

    out = HurwitzTree(p, n, tree.field)
    out.root_id = tree.root_id
    for vid, v in tree.vertices.items():
        out.add_vertex(vid, Fraction(0), None, v.monodromy + 1)
    for eid, e in tree.edges.items():
        if eid == tree.trunk_id:
            continue
        out.add_edge(eid, e.source, e.target, e.thickness, 0, e.point)
    for lid, b in tree.leaves.items():
        out.add_leaf(lid, b.vertex, conductors[lid], b.position, b.point, b.monodromy + 1)

    # split trunk: v0 --e0a--> w --e0b--> v1, with u+1 new p-leaves at w
    w = "w_split"
    out.add_vertex(w, Fraction(0), None, root.monodromy + 1)
    new_positions = []
    for j in range(1, u + 2):
        pt = tree.field.from_int(j)
        lid = f"b_new{j}"
        out.add_leaf(lid, w, p, f"new{j}", pt, 1)
        new_positions.append(pt)
    out.add_edge("e0a", tree.root_id, w, Fraction(0), 0, tree.field.zero())
    out.add_edge("e0b", w, v1, Fraction(0), 0, tree.field.zero())
    out.trunk_id = "e0a"

    for e in out.edges.values():
        e.slope = sum(b.conductor for b in out.leaves_beyond(e.id)) - 1

    iota_n = out.conductor()
    c_v1 = sum(conductors[lid] for lid in tree.leaves)  # conductors of old leaves
    d1 = iota_n - 1
    d2 = c_v1 - 1
    if d1 == d2:
        raise RecipeDegenerate("trunk split is degenerate")
    delta_v1 = p * tree.vertices[v1].depth
    eps_total = trunk.thickness
    eps1 = (Fraction(delta_v1, p - 1) - d2 * eps_total) / (d1 - d2)
    eps2 = eps_total - eps1
    if not (0 < eps1 < eps_total):
        raise RecipeDegenerate(f"split thickness {eps1} outside (0, {eps_total})")
    out.edges["e0a"].thickness = eps1
    out.edges["e0b"].thickness = eps2

    _depths_by_chain(tree, out, Fraction(0))

    # differentials
    for vid in out.preorder():
        if vid == out.root_id or vid == w:
            continue
        old_v = tree.vertices[vid]
        new_v = out.vertices[vid]
        orders = _vertex_orders(out, vid)
        if new_v.depth == p * old_v.depth and old_v.diff is not None:
            new_v.diff = solve_cartier_with_orders(old_v.diff, orders)
        else:
            parent = out.parent_edge(vid)
            if parent.source == w:
                raise RecipeDegenerate("top vertex must extend by depth p")
            constant = _leading_coeff(out.vertices[parent.source].diff, parent.point)
            new_v.diff = _product_form(res_ring, orders, constant)

    # w's differential: compatible with v1 from below
    c_v1_new = _product_constant(out.vertices[v1].diff)
    prod = tree.field.one()
    for pt in new_positions:
        prod = prod * ((-pt) ** p)
    c_w = c_v1_new * prod
    orders_w = _vertex_orders(out, w)
    out.vertices[w].diff = _product_form(res_ring, orders_w, c_w)

    # root degeneration: degree iota_n - 1 with the root-rule coefficient
    ring = tree.degeneration.ring
    l = iota_n - 1
    d_l = c_w * tree.field.from_int(iota_n - 1) / tree.field.from_int(l)
    top = RatFunc(
        Poly.const(ring, ring.lift(d_l)), Poly.x(ring) ** l
    )
    out.degeneration = WittVec(ring, tree.degeneration.entries + (top,))
    return out


# ---------------------------------------------------------------------------
# subtrees


def subtree(tree: HurwitzTree, eid: str) -> HurwitzTree:
    """The decorated subtree beyond s(e), rooted at s(e) with the e-part of
    its differential; root/trunk axioms are skipped by validators."""
    if eid not in tree.edges:
        raise NoSuchEdge(eid)
    e = tree.edges[eid]
    out = HurwitzTree(tree.p, tree.n, tree.field, is_subtree=True)
    out.root_id = e.source
    out.trunk_id = eid
    sv = tree.vertices[e.source]
    root_diff = _epart(sv.diff, e.point) if sv.diff is not None else None
    out.add_vertex(e.source, sv.depth, root_diff, sv.monodromy)

    def copy_below(vid):
        v = tree.vertices[vid]
        out.add_vertex(vid, v.depth, v.diff, v.monodromy)
        for b in tree.vertex_leaves(vid):
            out.add_leaf(b.id, vid, b.conductor, b.position, b.point, b.monodromy)
        for ce in tree.child_edges(vid):
            out.add_edge(ce.id, ce.source, ce.target, ce.thickness, ce.slope, ce.point)
            copy_below(ce.target)

    out.add_edge(eid, e.source, e.target, e.thickness, e.slope, e.point)
    copy_below(e.target)
    return out


# ---------------------------------------------------------------------------
# DOT export


def to_dot(tree: HurwitzTree) -> str:
    lines = ["digraph hurwitz {"]
    order = {vid: i for i, vid in enumerate(tree.preorder())}
    for vid in tree.preorder():
        v = tree.vertices[vid]
        omega = "-" if v.diff is None else _render_form(v.diff)
        lines.append(
            f'  "{vid}" [label="{vid}: depth={v.depth}, omega={omega}"];'
        )
    for eid in sorted(tree.edges, key=lambda e: order[tree.edges[e].target]):
        e = tree.edges[eid]
        lines.append(
            f'  "{e.source}" -> "{e.target}" [label="eps={e.thickness}, d={e.slope}"];'
        )
    leaf_ids = tree.leaf_order()
    for lid in leaf_ids:
        b = tree.leaves[lid]
        lines.append(f'  "{lid}" [shape=box, label="[{b.conductor}]"];')
        lines.append(f'  "{b.vertex}" -> "{lid}";')
    lines.append("}")
    return "\n".join(lines)


def _render_form(omega: DiffForm) -> str:
    from .expr import render_ratfunc

    return render_ratfunc(omega.f) + " dx"
