"""Batch command-line front end.

Each subcommand reads a JSON job from a file argument (or stdin), merges the
command-line flags, and writes a deterministic JSON document to stdout
(dot-export writes DOT text).  Exit codes: 0 computed, 1 computed with a
negative verdict, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import errors
from .differential import DiffForm, cartier, cartier_solve, check_cartier_rules
from .disc import Place, check_good_reduction, depth_profile, kink_mu, swan
from .expr import (
    Parser,
    render_fraction,
    render_ratfunc,
    render_witt,
)
from .fq import Fq, field
from .hurwitz import (
    HurwitzTree,
    check_extends,
    extend_tree,
    quotient_tree,
    to_dot,
    tree_from_cover,
    validate_tree,
)
from .laurent import KElem
from .poly import Ring
from .ramification import (
    BranchingDatum,
    branching_datum,
    genus_profile,
    oss_split,
    validate_datum,
)
from .witt import WittVec, reduce_vector, wp


def _field_from_job(job) -> Fq:
    p = int(job["p"])
    q = int(job.get("q", p))
    m = 0
    qq = q
    while qq > 1:
        if qq % p:
            raise errors.FieldError(f"q = {q} is not a power of p = {p}")
        qq //= p
        m += 1
    return field(p, max(m, 1))


def _parsers(job):
    f = _field_from_job(job)
    return Parser(f, laurent=True), Parser(f, laurent=False), f


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _swan_doc(datum):
    doc = {
        "depth": render_fraction(datum.depth),
        "boundary": list(datum.boundary),
    }
    if datum.diff is not None:
        doc["differential"] = render_ratfunc(datum.diff.f, "x")
    if datum.reduction is not None:
        doc["reduction"] = render_witt(datum.reduction, "x")
    if datum.dropped_constant is not None:
        doc["dropped_constant"] = str(datum.dropped_constant)
    return doc


def tree_to_doc(tree: HurwitzTree) -> dict:
    doc = {
        "p": tree.p,
        "q": tree.field.q,
        "n": tree.n,
        "root": tree.root_id,
        "trunk": tree.trunk_id,
        "subtree": tree.is_subtree,
        "vertices": [],
        "edges": [],
        "leaves": [],
        "degeneration": None,
    }
    for vid in tree.preorder():
        v = tree.vertices[vid]
        doc["vertices"].append(
            {
                "id": vid,
                "depth": render_fraction(v.depth),
                "diff": None if v.diff is None else render_ratfunc(v.diff.f, "x"),
                "monodromy": v.monodromy,
            }
        )
    for eid in sorted(tree.edges):
        e = tree.edges[eid]
        doc["edges"].append(
            {
                "id": eid,
                "source": e.source,
                "target": e.target,
                "thickness": render_fraction(e.thickness),
                "slope": e.slope,
                "point": None if e.point is None else str(e.point),
            }
        )
    for lid in tree.leaf_order():
        b = tree.leaves[lid]
        position = str(b.position)
        doc["leaves"].append(
            {
                "id": lid,
                "vertex": b.vertex,
                "conductor": b.conductor,
                "position": position,
                "point": str(b.point),
                "monodromy": b.monodromy,
            }
        )
    if tree.degeneration is not None:
        doc["degeneration"] = [
            render_ratfunc(f, "x") for f in tree.degeneration.entries
        ]
    return doc


def tree_from_doc(doc: dict) -> HurwitzTree:
    f = _field_from_job(doc)
    res_parser = Parser(f, laurent=False)
    k_parser = Parser(f, laurent=True)
    tree = HurwitzTree(int(doc["p"]), int(doc["n"]), f, bool(doc.get("subtree", False)))
    tree.root_id = doc["root"]
    tree.trunk_id = doc.get("trunk")

    def parse_point(s):
        if s is None:
            return None
        return res_parser.parse(s).const_value()

    def parse_position(s):
        try:
            value = k_parser.parse(s)
            if value.is_const():
                return value.const_value()
        except errors.WittramError:
            pass
        return s

    for vdoc in doc["vertices"]:
        diff = None
        if vdoc.get("diff"):
            diff = DiffForm(res_parser.parse(vdoc["diff"]))
        tree.add_vertex(
            vdoc["id"], Fraction(vdoc["depth"]), diff, int(vdoc["monodromy"])
        )
    for edoc in doc["edges"]:
        tree.add_edge(
            edoc["id"],
            edoc["source"],
            edoc["target"],
            Fraction(edoc["thickness"]),
            int(edoc["slope"]),
            parse_point(edoc.get("point")),
        )
    for ldoc in doc["leaves"]:
        tree.add_leaf(
            ldoc["id"],
            ldoc["vertex"],
            int(ldoc["conductor"]),
            parse_position(ldoc["position"]),
            parse_point(ldoc["point"]),
            int(ldoc.get("monodromy", 1)),
        )
    if doc.get("degeneration"):
        ring = Ring(f, False)
        entries = [res_parser.parse(s) for s in doc["degeneration"]]
        tree.degeneration = WittVec(ring, entries)
    return tree


# ---------------------------------------------------------------------------
# command implementations; each returns (document, exit_code)


def _cmd_reduce(job):
    kp, rp, f = _parsers(job)
    parser = kp if job.get("over", "K") == "K" else rp
    vec = parser.parse_witt(job["witt"])
    var = "X" if parser.ring.laurent else "x"
    reduced, witness, dropped, report = reduce_vector(vec)
    doc = {
        "reduced": render_witt(reduced, var),
        "witness": render_witt(witness, var),
        "dropped_constant": None if dropped is None else str(dropped),
        "steps": report.steps,
    }
    return doc, 0


def _cmd_branching_datum(job):
    kp, rp, f = _parsers(job)
    parser = kp if job.get("over", "k") == "K" else rp
    vec = parser.parse_witt(job["witt"])
    reduced, _, _, _ = reduce_vector(vec)
    datum, profile = branching_datum(reduced)
    doc = {
        "points": [str(pt) for pt in datum.points],
        "matrix": datum.matrix,
        "breaks": profile.breaks,
        "inertia_exponents": profile.inertia_exponents,
    }
    return doc, 0


def _cmd_genus(job):
    p = int(job["p"])
    matrix = job["matrix"]
    datum = BranchingDatum(points=[f"P{i}" for i in range(len(matrix))], matrix=matrix)
    gp = genus_profile(datum, p)
    report = validate_datum(matrix, p)
    doc = {
        "genera": gp.genera,
        "differents": gp.differents,
        "valid": report.valid,
        "essential_jumps": [list(x) for x in report.essential_jumps],
    }
    return doc, 0


def _cmd_validate_datum(job):
    report = validate_datum(job["matrix"], int(job["p"]))
    doc = {
        "valid": report.valid,
        "violations": report.violations,
        "essential_jumps": [list(x) for x in report.essential_jumps],
    }
    return doc, 0 if report.valid else 1


def _cmd_oss_split(job):
    rows = oss_split([int(j) for j in job["jumps"]], int(job["p"]))
    return {"matrix": rows}, 0


def _cmd_swan(job):
    kp, _, f = _parsers(job)
    vec = kp.parse_witt(job["witt"])
    out = []
    for z_src, r_src in job["places"]:
        z = kp.parse(z_src).const_value()
        place = Place(z, Fraction(r_src))
        datum = swan(vec, place)
        entry = {"z": str(z), "r": render_fraction(place.r)}
        entry.update(_swan_doc(datum))
        out.append(entry)
    return {"places": out}, 0


def _cmd_profile(job, grid=None):
    kp, _, f = _parsers(job)
    vec = kp.parse_witt(job["witt"])
    z = kp.parse(job.get("z", "0")).const_value()
    prof = depth_profile(
        vec,
        z,
        Fraction(job["r1"]),
        Fraction(job["r2"]),
        grid=grid or int(job.get("grid", 8)),
    )
    doc = {
        "interval": [render_fraction(prof.interval[0]), render_fraction(prof.interval[1])],
        "breakpoints": [render_fraction(b) for b in prof.breakpoints],
        "segments": [
            {
                "start": render_fraction(s.start),
                "end": render_fraction(s.end),
                "start_depth": render_fraction(s.start_depth),
                "slope": s.slope,
            }
            for s in prof.segments
        ],
    }
    return doc, 0


def _cmd_kink(job):
    kp, _, f = _parsers(job)
    fexpr = kp.parse(job["f"])
    mu, cs = kink_mu(
        fexpr,
        Fraction(job["r0"]),
        int(job["m"]),
        Fraction(job["s"]),
        int(job["N"]),
    )
    doc = {
        "mu": render_fraction(mu),
        "coefficients": {
            str(k): render_ratfunc(c, "X") for k, c in sorted(cs.items())
        },
    }
    return doc, 0


def _cmd_check_good(job):
    kp, _, f = _parsers(job)
    vec = kp.parse_witt(job["witt"])
    cert = check_good_reduction(vec)
    doc = {
        "etale": cert.etale,
        "good": cert.good,
        "depth": render_fraction(cert.depth),
        "generic_points": [str(pt) for pt in cert.generic_points],
        "generic_matrix": cert.generic_matrix,
        "generic_sum": cert.generic_sum,
        "special_conductor": cert.special_conductor,
        "special_levels": cert.special_levels,
        "reduction": None if cert.reduction is None else render_witt(cert.reduction, "x"),
    }
    return doc, 0 if cert.good else 1


def _cmd_tree_from_cover(job):
    kp, _, f = _parsers(job)
    vec = kp.parse_witt(job["witt"])
    tree = tree_from_cover(vec)
    return tree_to_doc(tree), 0


def _cmd_validate_tree(job, compat=False):
    tree = tree_from_doc(job["tree"])
    report = validate_tree(tree, check_compat=compat or bool(job.get("compat", False)))
    return {"valid": report.valid, "findings": report.findings}, 0 if report.valid else 1


def _cmd_quotient_tree(job):
    tree = tree_from_doc(job["tree"])
    conductors = {k: int(v) for k, v in job["level_conductors"].items()}
    return tree_to_doc(quotient_tree(tree, conductors)), 0


def _cmd_check_extends(job):
    prev = tree_from_doc(job["prev"])
    nxt = tree_from_doc(job["next"])
    report = check_extends(prev, nxt)
    return (
        {
            "extends": report.extends,
            "findings": report.findings,
            "branches": report.branches,
        },
        0 if report.extends else 1,
    )


def _cmd_extend_tree(job):
    tree = tree_from_doc(job["tree"])
    out = extend_tree(
        tree,
        job["mode"],
        a=None if job.get("a") is None else int(job["a"]),
        designated=job.get("designated"),
    )
    return tree_to_doc(out), 0


def _cmd_cartier(job):
    _, rp, f = _parsers(job)
    form = DiffForm(rp.parse(job["form"]))
    image = cartier(form)
    return {"cartier": render_ratfunc(image.f, "x")}, 0


def _cmd_cartier_solve(job):
    _, rp, f = _parsers(job)
    form = DiffForm(rp.parse(job["form"]))
    sol = cartier_solve(form, int(job["a"]))
    return {"solution": render_ratfunc(sol.f, "x")}, 0


def _cmd_dot_export(job):
    tree = tree_from_doc(job["tree"])
    return to_dot(tree), 0


COMMANDS = {
    "reduce": _cmd_reduce,
    "branching-datum": _cmd_branching_datum,
    "genus": _cmd_genus,
    "validate-datum": _cmd_validate_datum,
    "oss-split": _cmd_oss_split,
    "swan": _cmd_swan,
    "profile": _cmd_profile,
    "kink": _cmd_kink,
    "check-good": _cmd_check_good,
    "tree-from-cover": _cmd_tree_from_cover,
    "validate-tree": _cmd_validate_tree,
    "quotient-tree": _cmd_quotient_tree,
    "check-extends": _cmd_check_extends,
    "extend-tree": _cmd_extend_tree,
    "cartier": _cmd_cartier,
    "cartier-solve": _cmd_cartier_solve,
    "dot-export": _cmd_dot_export,
}


def run(job: dict):
    """Execute a job document; returns (document_or_text, exit_code)."""
    cmd = job.get("cmd")
    if cmd not in COMMANDS:
        raise errors.WittramError(f"unknown command {cmd!r}")
    handler = COMMANDS[cmd]
    if cmd == "profile":
        return handler(job, grid=job.get("_grid_flag"))
    if cmd == "validate-tree":
        return handler(job, compat=bool(job.get("_compat_flag", False)))
    return handler(job)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="wittram",
        description="exact ramification calculus for cyclic p-power covers",
    )
    ap.add_argument("cmd", choices=sorted(COMMANDS))
    ap.add_argument("job", nargs="?", help="JSON job file (default: stdin)")
    ap.add_argument("--p", type=int, help="characteristic")
    ap.add_argument("--q", type=int, help="field size (power of p)")
    ap.add_argument("--n", type=int, help="Witt length")
    ap.add_argument("--root-denominator", type=int, dest="root_denominator",
                    help="declared t-root denominator (informational)")
    ap.add_argument("--grid", type=int, help="profile grid resolution")
    ap.add_argument("--compat", action="store_true", help="check tree compatibility")
    args = ap.parse_args(argv)

    try:
        if args.job:
            with open(args.job, "r", encoding="utf-8") as fh:
                job = json.load(fh)
        else:
            job = json.load(sys.stdin)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2

    job["cmd"] = args.cmd
    for key in ("p", "q", "n"):
        value = getattr(args, key)
        if value is not None:
            job[key] = value
    if args.grid is not None:
        job["_grid_flag"] = args.grid
    if args.compat:
        job["_compat_flag"] = True

    try:
        doc, code = run(job)
    except errors.WittramError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"input error: {exc!r}\n")
        return 2
    if isinstance(doc, str):
        sys.stdout.write(doc if doc.endswith("\n") else doc + "\n")
    else:
        sys.stdout.write(_dump(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
