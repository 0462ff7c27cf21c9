"""Shared builders and independent mini-oracles for the test suite."""

from fractions import Fraction
from functools import lru_cache

import hypothesis.strategies as st

from bolano import (
    LadderOp,
    LadderPoly,
    LadderTerm,
    NormalPoly,
    ParallelConfig,
    Scalar,
    merge_word,
)

SERIAL = ParallelConfig(enable=False, workers=1)


def word_poly(pairs, coeff=None) -> LadderPoly:
    """Monomial from (create, mode) pairs, left to right."""
    word = merge_word((LadderOp(create, mode), 1) for create, mode in pairs)
    return LadderPoly((LadderTerm(coeff if coeff is not None else Scalar.one(), word),))


def random_word_poly(rng, max_ops=10, max_modes=3) -> LadderPoly:
    n = rng.randint(1, max_ops)
    modes = [str(m + 1) for m in range(rng.randint(1, max_modes))]
    return word_poly((rng.random() < 0.5, rng.choice(modes)) for _ in range(n))


def random_scalar(rng, symbols=("x", "g")) -> Scalar:
    total = Scalar.zero()
    for _ in range(rng.randint(1, 2)):
        coeff = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        powers = {}
        if rng.random() < 0.6:
            powers[rng.choice(symbols)] = Fraction(rng.randint(-2, 3), rng.choice((1, 2)))
        phases = {}
        if rng.random() < 0.3:
            phases["theta"] = Fraction(rng.randint(-2, 2))
        total = total + Scalar.term(coeff, rng.randint(0, 3), powers, phases)
    return total


def random_poly(rng, n_terms=4, max_ops=6, max_modes=2) -> LadderPoly:
    total = LadderPoly.zero()
    for _ in range(n_terms):
        coeff = Scalar.rational(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
        if coeff.is_zero:
            coeff = Scalar.one()
        total = total + random_word_poly(rng, max_ops, max_modes) * coeff
    return total


@lru_cache(maxsize=None)
def stirling_second_kind(n: int, k: int) -> int:
    """Classic recurrence S(n+1, k) = k S(n, k) + S(n, k-1)."""
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0:
        return 0
    return k * stirling_second_kind(n - 1, k) + stirling_second_kind(n - 1, k - 1)


# hypothesis strategies -------------------------------------------------------

modes_st = st.sampled_from(["", "1", "2", "c"])

small_fraction_st = st.builds(
    Fraction, st.integers(-4, 4), st.integers(1, 4)
)

nonzero_fraction_st = small_fraction_st.filter(lambda f: f != 0)


@st.composite
def scalars_st(draw, max_terms=2):
    total = Scalar.zero()
    for _ in range(draw(st.integers(1, max_terms))):
        coeff = draw(nonzero_fraction_st)
        ip = draw(st.integers(0, 3))
        powers = {}
        for name in draw(st.lists(st.sampled_from(["x", "y", "g"]), max_size=2, unique=True)):
            powers[name] = draw(nonzero_fraction_st)
        phases = {}
        if draw(st.booleans()):
            phases[draw(st.sampled_from(["theta", "phi"]))] = draw(
                st.integers(-2, 2).filter(lambda v: v != 0)
            )
        total = total + Scalar.term(coeff, ip, powers, phases)
    return total


@st.composite
def word_polys_st(draw, max_ops=8):
    pairs = draw(
        st.lists(st.tuples(st.booleans(), modes_st), min_size=1, max_size=max_ops)
    )
    return word_poly(pairs)


@st.composite
def polys_st(draw, max_terms=3, max_ops=5):
    total = LadderPoly.zero()
    for _ in range(draw(st.integers(1, max_terms))):
        coeff = Scalar.rational(draw(nonzero_fraction_st))
        total = total + draw(word_polys_st(max_ops)) * coeff
    return total


@st.composite
def normal_polys_st(draw, max_terms=3):
    entries = []
    for _ in range(draw(st.integers(0, max_terms))):
        n_modes = draw(st.integers(1, 2))
        chosen = draw(
            st.lists(modes_st, min_size=n_modes, max_size=n_modes, unique=True)
        )
        sig = []
        for m in sorted(chosen):
            p = draw(st.integers(0, 3))
            q = draw(st.integers(0, 3))
            if p == 0 and q == 0:
                p = 1
            sig.append((m, p, q))
        coeff = draw(scalars_st())
        if not coeff.is_zero:
            entries.append((tuple(sig), coeff))
    return NormalPoly(entries)
