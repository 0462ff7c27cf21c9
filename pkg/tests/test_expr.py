from fractions import Fraction

import pytest
from hypothesis import given

from bolano import (
    LadderOp,
    LadderPoly,
    LadderTerm,
    NonIntegerLadderPower,
    NormalPoly,
    Scalar,
    UnsupportedBounds,
    dagger,
    expand,
    expand_finite_range,
    ladder_pair,
    merge_word,
    sym,
)
from bolano.expr import Add, Ladder, Mul, Num, Pow, Ranged, Sym
from util import polys_st, word_poly

b, bd = ladder_pair("")
b1, bd1 = ladder_pair("1")
b2, bd2 = ladder_pair("2")


def test_merge_word():
    op = LadderOp(False, "1")
    cr = LadderOp(True, "1")
    assert merge_word([(op, 1), (op, 2), (cr, 1)]) == ((op, 3), (cr, 1))
    assert merge_word([(op, 0)]) == ()
    with pytest.raises(ValueError):
        merge_word([(op, -1)])


def test_poly_addition_merges_equal_words():
    assert b + b == b * 2
    assert (b + b2) - b == b2
    assert (b - b).is_zero


def test_distribution_preserves_word_order():
    out = (b1 + b2) ** 2
    words = {t.word for t in out.terms}
    w = lambda *pairs: merge_word((LadderOp(False, m), e) for m, e in pairs)
    assert words == {w(("1", 2)), w(("1", 1), ("2", 1)), w(("2", 1), ("1", 1)), w(("2", 2))}


def test_scalar_factors_fold_into_coeff():
    x = sym("x")
    out = x * b1 * x**2 * bd1**2
    assert len(out.terms) == 1
    term = out.terms[0]
    assert term.coeff == x**3
    assert term.word == merge_word(
        [(LadderOp(False, "1"), 1), (LadderOp(True, "1"), 2)]
    )


def test_negative_ladder_power_rejected():
    with pytest.raises(NonIntegerLadderPower):
        b**-1
    with pytest.raises(NonIntegerLadderPower):
        expand(Pow(Ladder(False, ""), Fraction(1, 2)))


def test_dagger_examples():
    assert dagger(b) == bd
    assert dagger(bd * b) == bd * b
    x = sym("x")
    lhs = dagger(Scalar.imaginary() * x * b1 * bd2)
    rhs = -(Scalar.imaginary()) * x * b2 * bd1
    assert lhs == rhs


def test_dagger_antihomomorphism():
    A = bd1 * b2 + sym("g") * b1
    B = b1 * b1 * bd2
    assert dagger(A * B) == dagger(B) * dagger(A)


@given(polys_st())
def test_dagger_involution(p):
    assert dagger(dagger(p)) == p


@given(polys_st())
def test_expand_idempotent(p):
    assert expand(p) == p


def test_expand_tree():
    tree = Mul((Sym("x"), Add((Ladder(False, "1"), Ladder(False, "2")))))
    assert expand(tree) == sym("x") * (b1 + b2)
    assert expand(Pow(Num(Fraction(12)), Fraction(-1))) == LadderPoly.scalar(
        Fraction(1, 12)
    )


def test_expand_finite_range_sum():
    body = Ladder(False, "k")
    out = expand_finite_range(body, "k", 1, 3, "sum")
    b3 = LadderPoly.from_op(False, "3")
    assert out == b1 + b2 + b3


def test_expand_finite_range_product_order():
    body = Ladder(False, "k")
    out = expand_finite_range(body, "k", 1, 3, "prod")
    b3 = LadderPoly.from_op(False, "3")
    assert out == b1 * b2 * b3
    assert len(out.terms) == 1


def test_expand_finite_range_single_and_errors():
    body = Mul((Ladder(True, "k"), Ladder(False, "k")))
    assert expand_finite_range(body, "k", 2, 2, "sum") == bd2 * b2
    with pytest.raises(UnsupportedBounds):
        expand_finite_range(body, "k", 3, 2, "sum")
    with pytest.raises(UnsupportedBounds):
        expand_finite_range(body, "k", "a", 2, "sum")


def test_range_substitutes_symbol_subscripts():
    body = Mul((Sym("p_k"), Ladder(False, "k")))
    out = expand_finite_range(body, "k", 1, 2, "sum")
    assert out == sym("p_1") * b1 + sym("p_2") * b2


def test_nested_range_shadowing():
    inner = Ranged("sum", "k", 1, 2, Ladder(False, "k"))
    outer = Ranged("sum", "k", 5, 6, inner)
    # the outer index never reaches the shadowed inner body
    assert expand(outer) == 2 * (b1 + b2)


def test_normal_poly_validation():
    with pytest.raises(ValueError):
        NormalPoly(((("1", 0, 0),), Scalar.one()) for _ in range(1))
    with pytest.raises(ValueError):
        NormalPoly((((("2", 1, 0), ("1", 1, 0))), Scalar.one()) for _ in range(1))


def test_normal_poly_roundtrip_to_ladder():
    n = NormalPoly(
        [
            ((("1", 1, 1), ("2", 2, 0)), Scalar.rational(3)),
            ((), sym("x")),
        ]
    )
    p = n.to_ladder_poly()
    words = {t.word for t in p.terms}
    expected = merge_word(
        [(LadderOp(True, "1"), 1), (LadderOp(True, "2"), 2), (LadderOp(False, "1"), 1)]
    )
    assert expected in words and () in words
    assert n.degree() == 4


def test_pure_scalar_term_has_empty_word():
    p = LadderPoly.scalar(sym("x"))
    assert p.terms[0].word == ()
    assert not p.has_ladder()
    assert p.to_scalar() == sym("x")
    with pytest.raises(ValueError):
        (b + LadderPoly.one()).to_scalar()
