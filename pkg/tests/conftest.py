from fractions import Fraction

import pytest

from wittram.differential import DiffForm
from wittram.expr import Parser
from wittram.fq import field
from wittram.hurwitz import HurwitzTree
from wittram.laurent import KElem
from wittram.poly import Poly, Ring
from wittram.ratfunc import RatFunc
from wittram.witt import WittVec


@pytest.fixture(scope="session")
def F2():
    return field(2)


@pytest.fixture(scope="session")
def F5():
    return field(5)


@pytest.fixture(scope="session")
def F49():
    return field(7, 2)


def parse_k(f, src):
    return Parser(f, laurent=True).parse(src)


def parse_res(f, src):
    return Parser(f, laurent=False).parse(src)


def witt_k(f, src):
    return Parser(f, laurent=True).parse_witt(src)


def witt_res(f, src):
    return Parser(f, laurent=False).parse_witt(src)


Z4_COVER = (
    "[1/(X^2*(X-t^8)),"
    " (1+t^2)^2/(X^3*(X-t^8)^2*(X-t^2)^2*(X-t^2*(1+t^2))^2)]"
)
# the same vector without the unit on entry 2; étale but fails the
# different criterion (kept for the documenting test)
Z4_COVER_PLAIN = (
    "[1/(X^2*(X-t^8)),"
    " 1/(X^3*(X-t^8)^2*(X-t^2)^2*(X-t^2*(1+t^2))^2)]"
)

ORDER5_COVER = "[(X+2*t^10)/(X^5*(X-t^10)^2*(X-t^5)^5)]"

ETALE_NOT_GOOD = "[1/(X*(X-t^5))]"


@pytest.fixture(scope="session")
def z4_cover(F2):
    return witt_k(F2, Z4_COVER)


@pytest.fixture(scope="session")
def z4_cover_plain(F2):
    return witt_k(F2, Z4_COVER_PLAIN)


@pytest.fixture(scope="session")
def order5_cover(F5):
    return witt_k(F5, ORDER5_COVER)


@pytest.fixture(scope="session")
def mutant_cover(F5):
    return witt_k(F5, ETALE_NOT_GOOD)


def build_t1_p7(F49):
    """The level-1 tree with conductor 30 and leaves [6],[5],[5],[3],[4],[7]
    used by the extension fixtures: depths (29, 47, 57, 39), thickness 1/6
    on every edge, exactness-forcing root a = 2 + 2g (g^2 = -1)."""
    R = Ring(F49, False)
    x = Poly.x(R)
    g = F49.gen()
    one = F49.one()
    zero = F49.zero()
    a = F49.from_int(2) + F49.from_int(2) * g

    def lin(pt):
        return Poly(R, {1: R.one(), 0: -pt})

    def form(constant, orders):
        den = Poly.one(R)
        for pt, o in orders:
            den = den * lin(pt) ** o
        return DiffForm(RatFunc(Poly.const(R, constant), den))

    t = HurwitzTree(7, 1, F49)
    t.root_id = "v0"
    t.trunk_id = "e0"
    m1 = -one
    t.add_vertex("v0", 0, None, 1)
    t.add_vertex("v1", 29, form(one, [(zero, 19), (one, 11)]), 1)
    t.add_vertex("vA", 47, form(m1, [(zero, 11), (one, 5), (a, 3)]), 1)
    t.add_vertex("vB", 57, form(m1 / (a ** 3), [(zero, 5), (one, 6)]), 1)
    t.add_vertex("vC", 39, form(one, [(zero, 7), (one, 4)]), 1)
    t.add_edge("e0", "v0", "v1", Fraction(1, 6), 29, zero)
    t.add_edge("e1", "v1", "vA", Fraction(1, 6), 18, zero)
    t.add_edge("e2", "vA", "vB", Fraction(1, 6), 10, zero)
    t.add_edge("e3", "v1", "vC", Fraction(1, 6), 10, one)
    t.add_leaf("L6", "vB", 6, "P6", one)
    t.add_leaf("L5b", "vB", 5, "P5b", zero)
    t.add_leaf("L5a", "vA", 5, "P5a", one)
    t.add_leaf("L3", "vA", 3, "P3", a)
    t.add_leaf("L7", "vC", 7, "P7", zero)
    t.add_leaf("L4", "vC", 4, "P4", one)
    t.degeneration = WittVec(R, [RatFunc(Poly.one(R), Poly.x(R) ** 29)])
    return t


@pytest.fixture()
def t1_p7(F49):
    return build_t1_p7(F49)
