from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import primerange

from projline.errors import ContextMismatch, DivisionByZero, NotEnumerable, NotPrime, UsageError
from projline.scalars import FieldContext, Scalar, enumerate_scalars, nonzero_scalars, scalar_arith

PRIMES = [2, 3, 5, 7, 11, 13, 101, 2**31 - 1]

fields = st.sampled_from(PRIMES).map(FieldContext.prime)
integers = st.integers(min_value=-(10**12), max_value=10**12)


def test_residues_are_canonical(gf5):
    assert Scalar(gf5, 7).value == 2
    assert Scalar(gf5, -1).value == 4
    assert Scalar(gf5, 7) == Scalar(gf5, 2)
    assert hash(Scalar(gf5, 7)) == hash(Scalar(gf5, 12))


def test_fraction_maps_into_prime_field(gf5):
    assert Scalar(gf5, Fraction(1, 2)).value == 3
    with pytest.raises(DivisionByZero):
        Scalar(gf5, Fraction(1, 5))


def test_rationals_are_reduced(rationals):
    x = Scalar(rationals, Fraction(2, 4))
    assert x.value == Fraction(1, 2)
    assert str(x) == "1/2"
    assert str(rationals.scalar(3)) == "3/1"


def test_parse_and_print(gf5, rationals):
    assert Scalar.from_string(gf5, "3/4").value == 2
    assert str(Scalar.from_string(gf5, "-1")) == "4"
    assert Scalar.from_string(rationals, "-6/8").value == Fraction(-3, 4)
    with pytest.raises(UsageError):
        Scalar.from_string(gf5, "x")
    with pytest.raises(DivisionByZero):
        Scalar.from_string(gf5, "1/0")


@pytest.mark.parametrize("modulus", [0, 1, 4, 9, 2**31, 2**31 + 11])
def test_field_needs_prime_modulus(modulus):
    with pytest.raises(NotPrime):
        FieldContext.prime(modulus)


def test_field_parse():
    assert FieldContext.parse("7") == FieldContext.prime(7)
    assert FieldContext.parse("rational") == FieldContext.rational()
    assert str(FieldContext.prime(7)) == "GF(7)"
    with pytest.raises(UsageError):
        FieldContext.parse("seven")


def test_division_by_zero_is_a_zero_division_error(gf7):
    with pytest.raises(ZeroDivisionError):
        gf7.one / gf7.zero
    with pytest.raises(DivisionByZero):
        gf7.zero.inverse()


def test_contexts_do_not_mix(gf5, gf7):
    with pytest.raises(ContextMismatch):
        gf5.one + gf7.one
    with pytest.raises(ContextMismatch):
        scalar_arith("mul", gf5.one, gf7.one)


def test_scalar_arith(gf7):
    x, y = gf7.scalar(3), gf7.scalar(5)
    assert scalar_arith("add", x, y).value == 1
    assert scalar_arith("sub", x, y).value == 5
    assert scalar_arith("mul", x, y).value == 1
    assert scalar_arith("div", x, y) == x * y.inverse()
    assert scalar_arith("neg", x).value == 4
    assert scalar_arith("inv", x).value == 5
    assert scalar_arith("eq", x, gf7.scalar(10)) is True
    with pytest.raises(UsageError):
        scalar_arith("pow", x, y)


def test_fermat(gf7):
    for x in nonzero_scalars(gf7):
        assert x ** 6 == gf7.one
        assert x ** -1 == x.inverse()


def test_enumeration(gf5, rationals):
    assert [x.value for x in enumerate_scalars(gf5)] == [0, 1, 2, 3, 4]
    assert len(nonzero_scalars(gf5)) == 4
    with pytest.raises(NotEnumerable):
        enumerate_scalars(rationals)


@given(fields, integers, integers, integers)
def test_field_axioms(ctx, a, b, c):
    x, y, z = ctx.scalar(a), ctx.scalar(b), ctx.scalar(c)
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == ctx.zero
    assert x - y == x + (-y)
    if not x.is_zero:
        assert x * x.inverse() == ctx.one
        assert (y / x) * x == y


@given(integers, st.integers(min_value=1, max_value=10**6), integers)
def test_rational_field_axioms(a, d, b):
    ctx = FieldContext.rational()
    x, y = ctx.scalar(Fraction(a, d)), ctx.scalar(b)
    assert (x + y) - y == x
    if not x.is_zero:
        assert x * x.inverse() == ctx.one


SMALL_PRIMES = list(primerange(2, 102))


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_inverse_exhaustive(p):
    ctx = FieldContext.prime(p)
    for x in nonzero_scalars(ctx):
        assert x * x.inverse() == ctx.one
        assert ctx.one / x == x.inverse()


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_distributivity_exhaustive(p):
    ctx = FieldContext.prime(p)
    elements = enumerate_scalars(ctx)
    for x in elements:
        for y in elements:
            for z in elements:
                assert x * (y + z) == x * y + x * z
