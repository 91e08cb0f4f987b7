"""Exact ramification calculus for cyclic p-power covers of the line and of
the t-adic disc in characteristic p: truncated Witt vectors, branching data,
refined Swan conductors, Cartier-operator identities, Hurwitz trees, and
good-reduction certificates for equal-characteristic deformations.
"""

from . import errors
from .differential import (
    DiffForm,
    antiderivative,
    cartier,
    cartier_solve,
    check_cartier_rules,
    constant_coefficient,
    is_exact,
)
from .disc import (
    DepthProfile,
    Place,
    SwanDatum,
    bestify,
    check_good_reduction,
    depth_profile,
    gauss_reduce,
    kink_mu,
    swan,
)
from .expr import Parser, render_fraction, render_ratfunc, render_witt
from .fq import Fq, FqElem, field
from .hurwitz import (
    HurwitzTree,
    check_extends,
    extend_tree,
    quotient_tree,
    subtree,
    to_dot,
    tree_from_cover,
    validate_tree,
)
from .laurent import KElem
from .poly import Poly, Ring
from .ramification import (
    BranchingDatum,
    JumpProfile,
    branching_datum,
    genus_profile,
    oss_split,
    synthesize_vector,
    validate_datum,
)
from .ratfunc import INFINITY, RatFunc, partial_fractions, recombine
from .witt import (
    WittVec,
    is_reduced,
    partition,
    reduce_vector,
    truncate_power,
    witt_add,
    witt_mul,
    witt_sub,
    wp,
)

__version__ = "0.1.0"
