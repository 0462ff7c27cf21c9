"""Ladder-operator expressions.

Words are run-length encoded sequences of single-mode operators, terms pair a
word with an exact scalar, and polynomials are merged sums of terms.  A
NormalPoly is the canonical normal-ordered form: a map from per-mode
(creators, annihilators) signatures to scalars, which makes operator
equality decidable by structural equality.

Raw expression trees (built by the parser or by hand) are lowered to
polynomials by expand(), which distributes products, flattens integer powers
of operator subexpressions, and evaluates finite indexed sums and products.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, NamedTuple

from .errors import NonIntegerLadderPower, UnsupportedBounds
from .scalars import Scalar, SymbolAtom


class LadderOp(NamedTuple):
    create: bool
    mode: str

    def conjugated(self) -> "LadderOp":
        return LadderOp(not self.create, self.mode)

    def __repr__(self) -> str:
        tail = f"_{self.mode}" if self.mode else ""
        return ("bd" if self.create else "b") + tail


# tuple[(LadderOp, int), ...]; exponents positive, neighbouring ops distinct
Word = tuple


def merge_word(pairs: Iterable) -> Word:
    out: list = []
    for op, exp in pairs:
        exp = int(exp)
        if exp == 0:
            continue
        if exp < 0:
            raise ValueError("word exponents must be nonnegative")
        if out and out[-1][0] == op:
            out[-1] = (op, out[-1][1] + exp)
        else:
            out.append((op, exp))
    return tuple(out)


def flatten_ops(word: Word) -> tuple:
    flat: list = []
    for op, exp in word:
        flat.extend([op] * exp)
    return tuple(flat)


def word_dagger(word: Word) -> Word:
    return tuple((op.conjugated(), exp) for op, exp in reversed(word))


def word_degree(word: Word) -> int:
    return sum(exp for _, exp in word)


@dataclass(frozen=True)
class LadderTerm:
    coeff: Scalar
    word: Word


class LadderPoly:
    """Sum of scalar-weighted operator words; terms with equal words merge."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[LadderTerm] = ()):
        bucket: dict[Word, Scalar] = {}
        for t in terms:
            if t.coeff.is_zero:
                continue
            if t.word in bucket:
                bucket[t.word] = bucket[t.word] + t.coeff
            else:
                bucket[t.word] = t.coeff
        self._terms = tuple(
            LadderTerm(c, w) for w, c in bucket.items() if not c.is_zero
        )

    # -- construction --------------------------------------------------------

    @classmethod
    def zero(cls) -> "LadderPoly":
        return cls()

    @classmethod
    def one(cls) -> "LadderPoly":
        return cls.scalar(Scalar.one())

    @classmethod
    def scalar(cls, s) -> "LadderPoly":
        if isinstance(s, (int, Fraction)):
            s = Scalar.rational(s)
        return cls((LadderTerm(s, ()),))

    @classmethod
    def from_op(cls, create: bool, mode: str = "") -> "LadderPoly":
        word = ((LadderOp(create, mode), 1),)
        return cls((LadderTerm(Scalar.one(), word),))

    # -- views ----------------------------------------------------------------

    @property
    def terms(self) -> tuple:
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def has_ladder(self) -> bool:
        return any(t.word for t in self._terms)

    def to_scalar(self) -> Scalar:
        """The coefficient of a purely scalar polynomial; raises otherwise."""
        if not self._terms:
            return Scalar.zero()
        if len(self._terms) == 1 and not self._terms[0].word:
            return self._terms[0].coeff
        raise ValueError("polynomial contains ladder operators")

    def modes(self) -> set[str]:
        out: set[str] = set()
        for t in self._terms:
            out.update(op.mode for op, _ in t.word)
        return out

    def degree(self) -> int:
        return max((word_degree(t.word) for t in self._terms), default=0)

    # -- algebra ----------------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, LadderPoly):
            return other
        if isinstance(other, (Scalar, int, Fraction)):
            return LadderPoly.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LadderPoly(self._terms + o._terms)

    __radd__ = __add__

    def __neg__(self):
        return LadderPoly(LadderTerm(-t.coeff, t.word) for t in self._terms)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = []
        for t1 in self._terms:
            for t2 in o._terms:
                word = merge_word(t1.word + t2.word)
                out.append(LadderTerm(t1.coeff * t2.coeff, word))
        return LadderPoly(out)

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if f == 0:
                raise ZeroDivisionError("division of polynomial by zero")
            return self * Scalar.rational(1 / f)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise NonIntegerLadderPower(
                f"operator polynomial power must be a nonnegative integer, got {n!r}"
            )
        result = LadderPoly.one()
        for _ in range(n):
            result = result * self
        return result

    def dagger(self) -> "LadderPoly":
        return LadderPoly(
            LadderTerm(t.coeff.conjugate(), word_dagger(t.word)) for t in self._terms
        )

    def subs_one(self, name: str) -> "LadderPoly":
        return LadderPoly(
            LadderTerm(t.coeff.subs_one(name), t.word) for t in self._terms
        )

    # -- equality, hashing, pickling ---------------------------------------------

    def _as_dict(self) -> dict:
        return {t.word: t.coeff for t in self._terms}

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._as_dict() == o._as_dict()

    def __hash__(self):
        return hash(frozenset(self._as_dict().items()))

    def __reduce__(self):
        return (LadderPoly, (self._terms,))

    def __repr__(self):
        if not self._terms:
            return "LadderPoly(0)"
        bits = []
        for t in self._terms:
            ops = "*".join(
                repr(op) + (f"^{e}" if e > 1 else "") for op, e in t.word
            )
            bits.append(f"{t.coeff!r}*{ops}" if ops else repr(t.coeff))
        return "LadderPoly(" + " + ".join(bits) + ")"


def ladder_pair(mode: str = "") -> tuple[LadderPoly, LadderPoly]:
    """(annihilator, creator) polynomials for one mode."""
    return LadderPoly.from_op(False, mode), LadderPoly.from_op(True, mode)


def dagger(p: LadderPoly) -> LadderPoly:
    """Hermitian conjugate: coefficients conjugated, words reversed with
    creators and annihilators swapped."""
    return p.dagger()


# ---------------------------------------------------------------------------
# canonical normal-ordered polynomials
# ---------------------------------------------------------------------------

# tuple[(mode, p, q), ...] with modes strictly increasing and p + q > 0
Signature = tuple


def _validate_signature(sig) -> None:
    prev = None
    for entry in sig:
        mode, p, q = entry
        if not isinstance(mode, str):
            raise ValueError(f"signature mode must be a string, got {mode!r}")
        if not (isinstance(p, int) and isinstance(q, int) and p >= 0 and q >= 0):
            raise ValueError(f"signature exponents must be nonnegative ints: {entry!r}")
        if p == 0 and q == 0:
            raise ValueError("signature must not store a (0, 0) mode pair")
        if prev is not None and mode <= prev:
            raise ValueError("signature modes must be strictly increasing")
        prev = mode


def signature_dagger(sig: Signature) -> Signature:
    return tuple((m, q, p) for m, p, q in sig)


class NormalPoly:
    """Canonical normal-ordered polynomial: signature -> Scalar."""

    __slots__ = ("_entries",)

    def __init__(self, entries=()):
        items = entries.items() if isinstance(entries, dict) else entries
        acc: dict = {}
        for sig, coeff in items:
            sig = tuple(tuple(e) for e in sig)
            _validate_signature(sig)
            if coeff.is_zero:
                continue
            if sig in acc:
                v = acc[sig] + coeff
                if v.is_zero:
                    del acc[sig]
                else:
                    acc[sig] = v
            else:
                acc[sig] = coeff
        self._entries = acc

    @classmethod
    def zero(cls) -> "NormalPoly":
        return cls()

    @classmethod
    def _raw(cls, entries: dict) -> "NormalPoly":
        """Adopt an internally-built dict of valid signatures, dropping zeros."""
        obj = cls.__new__(cls)
        obj._entries = {sig: c for sig, c in entries.items() if not c.is_zero}
        return obj

    @property
    def entries(self):
        return MappingProxyType(self._entries)

    @property
    def is_zero(self) -> bool:
        return not self._entries

    def items(self) -> list:
        """Entries in the deterministic (mode, p, q)-sorted order."""
        return sorted(self._entries.items(), key=lambda it: it[0])

    def coefficient(self, sig: Signature) -> Scalar:
        return self._entries.get(tuple(sig), Scalar.zero())

    def __add__(self, other):
        if not isinstance(other, NormalPoly):
            return NotImplemented
        return NormalPoly(
            list(self._entries.items()) + list(other._entries.items())
        )

    def scale(self, factor) -> "NormalPoly":
        if isinstance(factor, (int, Fraction)):
            factor = Scalar.rational(factor)
        return NormalPoly((sig, c * factor) for sig, c in self._entries.items())

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, NormalPoly):
            return NotImplemented
        return self + (-other)

    def modes(self) -> set[str]:
        out: set[str] = set()
        for sig in self._entries:
            out.update(m for m, _, _ in sig)
        return out

    def degree(self) -> int:
        return max(
            (sum(p + q for _, p, q in sig) for sig in self._entries), default=0
        )

    def to_ladder_poly(self) -> LadderPoly:
        """Expanded form: per signature, all creators (modes ascending) then
        all annihilators (modes ascending)."""
        terms = []
        for sig, coeff in self.items():
            pairs = [(LadderOp(True, m), p) for m, p, q in sig if p]
            pairs += [(LadderOp(False, m), q) for m, p, q in sig if q]
            terms.append(LadderTerm(coeff, merge_word(pairs)))
        return LadderPoly(terms)

    def __eq__(self, other):
        if not isinstance(other, NormalPoly):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    def __reduce__(self):
        return (NormalPoly, (tuple(self._entries.items()),))

    def __repr__(self):
        if not self._entries:
            return "NormalPoly(0)"
        bits = []
        for sig, coeff in self.items():
            ops = "*".join(
                f"bd_{m}^{p}" * (p > 0) + ("*" if p and q else "") + f"b_{m}^{q}" * (q > 0)
                for m, p, q in sig
            )
            bits.append(f"{coeff!r}*{ops}" if ops else repr(coeff))
        return "NormalPoly(" + " + ".join(bits) + ")"


# ---------------------------------------------------------------------------
# raw expression trees and expansion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class ImagUnit:
    pass


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class PhaseAtom:
    symbol: str
    multiplier: Fraction


@dataclass(frozen=True)
class Ladder:
    create: bool
    mode: str


@dataclass(frozen=True)
class Add:
    args: tuple


@dataclass(frozen=True)
class Mul:
    args: tuple


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: Fraction


@dataclass(frozen=True)
class Ranged:
    combine: str  # "sum" or "prod"
    index: str
    lo: int
    hi: int
    body: object


def _substitute_index(node, index: str, value: int):
    if isinstance(node, Ladder):
        if node.mode == index:
            return Ladder(node.create, str(value))
        return node
    if isinstance(node, Sym):
        if node.name == index:
            return Num(Fraction(value))
        if node.name.endswith("_" + index):
            return Sym(node.name[: -len(index)] + str(value))
        return node
    if isinstance(node, PhaseAtom):
        if node.symbol == index:
            raise ValueError(f"range index {index!r} cannot be a phase angle")
        if node.symbol.endswith("_" + index):
            return PhaseAtom(node.symbol[: -len(index)] + str(value), node.multiplier)
        return node
    if isinstance(node, Add):
        return Add(tuple(_substitute_index(a, index, value) for a in node.args))
    if isinstance(node, Mul):
        return Mul(tuple(_substitute_index(a, index, value) for a in node.args))
    if isinstance(node, Pow):
        return Pow(_substitute_index(node.base, index, value), node.exponent)
    if isinstance(node, Ranged):
        if node.index == index:  # inner binding shadows
            return node
        return Ranged(
            node.combine,
            node.index,
            node.lo,
            node.hi,
            _substitute_index(node.body, index, value),
        )
    return node


def expand_finite_range(body, index, lo: int, hi: int, combine: str) -> LadderPoly:
    """Evaluate sum(index=lo..hi) or prod(index=lo..hi) of the body tree.

    Products keep the left-to-right factor order lo, lo+1, ..., hi."""
    name = index.name if isinstance(index, SymbolAtom) else str(index)
    if combine not in ("sum", "prod"):
        raise ValueError(f"combine must be 'sum' or 'prod', got {combine!r}")
    if not (isinstance(lo, int) and isinstance(hi, int)):
        raise UnsupportedBounds(f"bounds must be integers, got {lo!r}..{hi!r}")
    if lo > hi:
        raise UnsupportedBounds(f"empty range {lo}..{hi}")
    result = None
    for i in range(lo, hi + 1):
        part = expand(_substitute_index(body, name, i))
        if result is None:
            result = part
        elif combine == "sum":
            result = result + part
        else:
            result = result * part
    return result


def expand(node) -> LadderPoly:
    """Distribute a raw expression tree into a flat sum of terms."""
    if isinstance(node, LadderPoly):
        return LadderPoly(node.terms)
    if isinstance(node, Num):
        return LadderPoly.scalar(Scalar.rational(node.value))
    if isinstance(node, ImagUnit):
        return LadderPoly.scalar(Scalar.imaginary())
    if isinstance(node, Sym):
        return LadderPoly.scalar(Scalar.symbol(node.name))
    if isinstance(node, PhaseAtom):
        return LadderPoly.scalar(Scalar.phase(node.symbol, node.multiplier))
    if isinstance(node, Ladder):
        return LadderPoly.from_op(node.create, node.mode)
    if isinstance(node, Add):
        out = LadderPoly.zero()
        for a in node.args:
            out = out + expand(a)
        return out
    if isinstance(node, Mul):
        out = LadderPoly.one()
        for a in node.args:
            out = out * expand(a)
        return out
    if isinstance(node, Pow):
        base = expand(node.base)
        e = Fraction(node.exponent)
        if base.has_ladder():
            if e.denominator != 1 or e < 0:
                raise NonIntegerLadderPower(
                    f"ladder subexpression raised to power {e}"
                )
            return base ** int(e)
        return LadderPoly.scalar(base.to_scalar() ** e)
    if isinstance(node, Ranged):
        return expand_finite_range(node.body, node.index, node.lo, node.hi, node.combine)
    raise TypeError(f"cannot expand {node!r}")
