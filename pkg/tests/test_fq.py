import itertools

import pytest
from hypothesis import given, settings, strategies as st

from wittram.errors import FieldError
from wittram.fq import Fq, field, is_prime


SMALL_FIELDS = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1)]


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, m):
    """Full axiom check on every field with q = p^m <= 16 (and a few primes)."""
    f = field(p, m)
    if f.q > 16:
        pytest.skip("exhaustive check reserved for q <= 16")
    elems = list(f.elements())
    assert len(elems) == f.q
    zero, one = f.zero(), f.one()
    for a in elems:
        assert a + zero == a
        assert a * one == a
        assert a + (-a) == zero
        if not a.is_zero():
            assert a * a.inverse() == one
            assert a.pth_root() ** p == a
    for a, b in itertools.product(elems, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
    for a, b, c in itertools.product(elems[: min(len(elems), 8)], repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_canonical_modulus_is_deterministic():
    assert field(2, 2).modulus == (1, 1, 1)
    assert field(7, 2).modulus == (1, 0, 1)  # x^2 + 1, since -1 is not a square mod 7
    assert Fq(7, 2).modulus == field(7, 2).modulus


def test_user_modulus_checked():
    with pytest.raises(FieldError):
        Fq(2, 2, modulus=[1, 0, 1])  # x^2 + 1 = (x+1)^2 over F_2
    custom = Fq(2, 3, modulus=[1, 1, 0, 1])
    assert custom.gen() ** 3 == custom.gen() + custom.one()


def test_frobenius_table_f4():
    f = field(2, 2)
    g = f.gen()
    # Frobenius on F_4 swaps g and g+1; p-th roots undo it
    assert g ** 2 == g + f.one()
    assert (g + f.one()) ** 2 == g
    assert g.pth_root() == g + f.one()
    assert (g + f.one()).pth_root() == g


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 48), st.integers(0, 48), st.integers(0, 48))
def test_f49_matches_integer_model_on_prime_subfield(i, j, k):
    f = field(7, 2)
    a, b, c = (f.from_int(v) for v in (i, j, k))
    assert a * (b + c) == a * b + a * c


def test_is_prime():
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
