from fractions import Fraction

import pytest
from hypothesis import given

from bolano import (
    ComplexSymbolUnsupported,
    ParseError,
    Scalar,
    SymbolAtom,
    UnsupportedPower,
    rational_from_decimal,
    scalar_conjugate,
    sym,
)
from util import scalars_st


def test_rational_from_decimal():
    assert rational_from_decimal("0.5") == Fraction(1, 2)
    assert rational_from_decimal("2") == 2
    assert rational_from_decimal("0.125") == Fraction(1, 8)
    with pytest.raises(ParseError):
        rational_from_decimal("abc")
    with pytest.raises(ParseError):
        rational_from_decimal("1.2.3")


def test_symbol_equality_is_by_name():
    assert SymbolAtom("x") == SymbolAtom("x", assumed_real=False)
    assert hash(SymbolAtom("x")) == hash(SymbolAtom("x", assumed_real=False))
    assert SymbolAtom("x") != SymbolAtom("y")
    with pytest.raises(ValueError):
        SymbolAtom("")


def test_zero_and_merge():
    x = sym("x")
    assert (x - x).is_zero
    assert Scalar.rational(0).is_zero
    assert x + x == x * 2
    assert Scalar.term(1, 0, {"x": 0}) == Scalar.one()


def test_i_power_folding():
    i = Scalar.imaginary()
    assert i * i == Scalar.rational(-1)
    assert i * i * i * i == Scalar.one()
    assert i**3 == -i
    x = sym("x")
    assert i * i * x + x == Scalar.zero()


def test_phase_multipliers_add():
    p = Scalar.phase("theta", 1)
    q = Scalar.phase("theta", -1)
    assert p * q == Scalar.one()
    assert p * p == Scalar.phase("theta", 2)
    assert Scalar.phase("theta", 0) == Scalar.one()


def test_conjugate_examples():
    # conj(3) = 3
    assert scalar_conjugate(Scalar.rational(3)) == Scalar.rational(3)
    # conj(i g e^{i theta}) = -i g e^{-i theta}
    s = Scalar.imaginary() * sym("g") * Scalar.phase("theta", 1)
    expected = -(Scalar.imaginary()) * sym("g") * Scalar.phase("theta", -1)
    assert scalar_conjugate(s) == expected
    # involution on x^{3/2} i
    t = Scalar.symbol("x", Fraction(3, 2)) * Scalar.imaginary()
    assert scalar_conjugate(scalar_conjugate(t)) == t


def test_conjugate_rejects_complex_symbols():
    z = Scalar.symbol(SymbolAtom("z", assumed_real=False))
    with pytest.raises(ComplexSymbolUnsupported):
        z.conjugate()


def test_powers():
    x = sym("x")
    assert x**0 == Scalar.one()
    assert x**3 == x * x * x
    assert x ** Fraction(1, 2) * x ** Fraction(1, 2) == x
    assert Scalar.rational(12) ** -1 == Scalar.rational(Fraction(1, 12))
    assert Scalar.rational(4) ** Fraction(1, 2) == Scalar.rational(2)
    with pytest.raises(UnsupportedPower):
        (x + 1) ** Fraction(1, 2)
    with pytest.raises(UnsupportedPower):
        Scalar.rational(2) ** Fraction(1, 2)
    with pytest.raises(UnsupportedPower):
        Scalar.imaginary() ** Fraction(1, 2)
    with pytest.raises(UnsupportedPower):
        (x + 1) ** -1


def test_subs_one():
    s = sym("hbar") * sym("x") + sym("hbar") ** -1 * sym("y")
    assert s.subs_one("hbar") == sym("x") + sym("y")
    with pytest.raises(ValueError):
        Scalar.phase("hbar", 1).subs_one("hbar")


@given(scalars_st(), scalars_st(), scalars_st())
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a + (-a) == Scalar.zero()


@given(scalars_st(), scalars_st())
def test_conjugation_is_multiplicative(a, b):
    assert scalar_conjugate(a * b) == scalar_conjugate(a) * scalar_conjugate(b)
    assert scalar_conjugate(scalar_conjugate(a)) == a


def test_division():
    x = sym("x")
    assert x / 2 == x * Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        x / 0
