"""Exact commutative coefficients for the ladder-operator kernel.

A scalar is a canonical sum of terms

    coeff * i^p * prod_j sym_j^(e_j) * prod_k exp(i * r_k * sym_k)

with an exact rational coeff, p in {0, 1} (higher powers of the imaginary
unit fold their sign into coeff), rational exponents e_j, and rational phase
multipliers r_k.  Terms with equal (p, symbol powers, phases) keys merge by
adding coefficients, so structural equality coincides with algebraic
equality on this fragment.  No floating point is used anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ComplexSymbolUnsupported, ParseError, UnsupportedPower

_DECIMAL_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)\Z")


def rational_from_decimal(text: str) -> Fraction:
    """Exact rational value of a finite decimal literal ("0.5" -> 1/2)."""
    if not isinstance(text, str) or not _DECIMAL_RE.match(text.strip()):
        raise ParseError(f"malformed decimal literal {text!r}")
    return Fraction(text.strip())


@dataclass(frozen=True)
class SymbolAtom:
    """Named scalar symbol.  Equality and hashing use the name only; the
    assumed_real flag is metadata consulted by conjugation."""

    name: str
    assumed_real: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("symbol name must be nonempty")

    def __repr__(self) -> str:
        return self.name


def _as_atom(x) -> SymbolAtom:
    return x if isinstance(x, SymbolAtom) else SymbolAtom(str(x))


# A term key is (i_power, symbol powers, phases); both maps are stored as
# name-sorted tuples of (SymbolAtom, Fraction) so keys hash and compare
# reproducibly.
_KEY_ONE = (0, (), ())


def _sorted_pairs(mapping: Mapping) -> tuple:
    items = [(_as_atom(a), Fraction(v)) for a, v in mapping.items() if v != 0]
    items.sort(key=lambda it: it[0].name)
    return tuple(items)


def _merge_pairs(left: tuple, right: tuple) -> tuple:
    if not left:
        return right
    if not right:
        return left
    acc = {a: v for a, v in left}
    for a, v in right:
        v2 = acc.get(a, Fraction(0)) + v
        if v2 == 0:
            acc.pop(a, None)
        else:
            acc[a] = v2
    return tuple(sorted(acc.items(), key=lambda it: it[0].name))


def _display_key(key):
    ip, syms, phases = key
    return (
        ip,
        tuple((a.name, e) for a, e in syms),
        tuple((a.name, r) for a, r in phases),
    )


def _iroot(n: int, q: int):
    """Exact integer q-th root of n >= 0, or None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = int(round(n ** (1.0 / q)))
    for cand in (r - 1, r, r + 1, r + 2):
        if cand >= 0 and cand**q == n:
            return cand
    return None


class Scalar:
    """Canonical exact scalar; immutable after construction."""

    __slots__ = ("_terms",)

    def __init__(self, items: Iterable = ()):
        acc: dict = {}
        for key, coeff in items:
            if coeff == 0:
                continue
            v = acc.get(key, Fraction(0)) + coeff
            if v == 0:
                acc.pop(key, None)
            else:
                acc[key] = v
        self._terms = acc

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Scalar":
        return cls()

    @classmethod
    def one(cls) -> "Scalar":
        return cls(((_KEY_ONE, Fraction(1)),))

    @classmethod
    def rational(cls, value) -> "Scalar":
        f = Fraction(value)
        return cls(((_KEY_ONE, f),)) if f else cls()

    @classmethod
    def imaginary(cls) -> "Scalar":
        return cls((((1, (), ()), Fraction(1)),))

    @classmethod
    def symbol(cls, name, exponent=1, assumed_real=True) -> "Scalar":
        atom = name if isinstance(name, SymbolAtom) else SymbolAtom(str(name), assumed_real)
        e = Fraction(exponent)
        if e == 0:
            return cls.one()
        return cls((((0, ((atom, e),), ()), Fraction(1)),))

    @classmethod
    def phase(cls, name, multiplier) -> "Scalar":
        atom = _as_atom(name)
        r = Fraction(multiplier)
        if r == 0:
            return cls.one()
        return cls((((0, (), ((atom, r),)), Fraction(1)),))

    @classmethod
    def term(cls, coeff, i_power=0, powers=None, phases=None) -> "Scalar":
        """One canonical term built from plain mappings."""
        c = Fraction(coeff)
        if c == 0:
            return cls()
        ip = int(i_power) % 4
        if ip >= 2:
            ip -= 2
            c = -c
        sy = _sorted_pairs(powers or {})
        ph = _sorted_pairs(phases or {})
        return cls((((ip, sy, ph), c),))

    # -- predicates and views ----------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def terms(self) -> list:
        """Term list sorted by a reproducible display key."""
        return sorted(self._terms.items(), key=lambda it: _display_key(it[0]))

    def symbols(self) -> set[SymbolAtom]:
        out: set[SymbolAtom] = set()
        for (_, syms, phases) in self._terms:
            out.update(a for a, _ in syms)
            out.update(a for a, _ in phases)
        return out

    def as_rational(self) -> Fraction:
        """The value of a purely rational scalar; raises otherwise."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1:
            key, c = next(iter(self._terms.items()))
            if key == _KEY_ONE:
                return c
        raise ValueError("scalar is not a plain rational")

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(list(self._terms.items()) + list(o._terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return Scalar((k, -c) for k, c in self._terms.items())

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

    def _scaled(self, factor) -> "Scalar":
        """Scale by a nonzero rational; keys are untouched so no re-merge."""
        obj = Scalar.__new__(Scalar)
        obj._terms = {k: c * factor for k, c in self._terms.items()}
        return obj

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 1:
                return self
            if other == 0:
                return Scalar()
            return self._scaled(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        out = []
        for (ip1, sy1, ph1), c1 in self._terms.items():
            for (ip2, sy2, ph2), c2 in other._terms.items():
                c = c1 * c2
                ip = ip1 + ip2
                if ip >= 2:  # i*i = -1
                    ip -= 2
                    c = -c
                out.append(((ip, _merge_pairs(sy1, sy2), _merge_pairs(ph1, ph2)), c))
        return Scalar(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if f == 0:
                raise ZeroDivisionError("division of scalar by zero")
            return self * (1 / f)
        return NotImplemented

    def _inverted_term(self) -> "Scalar":
        if len(self._terms) != 1:
            raise UnsupportedPower("only single-term scalars can be inverted")
        (ip, syms, phases), c = next(iter(self._terms.items()))
        # 1/i = -i
        c = Fraction(1) / c if ip == 0 else Fraction(-1) / c
        syms = tuple((a, -e) for a, e in syms)
        phases = tuple((a, -r) for a, r in phases)
        return Scalar((((ip, syms, phases), c),))

    def __pow__(self, exponent):
        e = Fraction(exponent)
        if e.denominator == 1:
            n = int(e)
            if n >= 0:
                result = Scalar.one()
                base = self
                while n:
                    if n & 1:
                        result = result * base
                    base = base * base if n > 1 else base
                    n >>= 1
                return result
            return self._inverted_term() ** (-n)
        if len(self._terms) != 1:
            raise UnsupportedPower("fractional power of a scalar sum")
        (ip, syms, phases), c = next(iter(self._terms.items()))
        if ip != 0:
            raise UnsupportedPower("fractional power of the imaginary unit")
        q = e.denominator
        num_root = _iroot(c.numerator, q)
        den_root = _iroot(c.denominator, q)
        if num_root is None or den_root is None:
            raise UnsupportedPower(f"no exact rational value for {c}^{e}")
        new_c = Fraction(num_root, den_root) ** e.numerator
        syms = tuple((a, ex * e) for a, ex in syms)
        phases = tuple((a, r * e) for a, r in phases)
        return Scalar((((ip, syms, phases), new_c),))

    # -- conjugation and substitution ----------------------------------------

    def conjugate(self) -> "Scalar":
        out = []
        for (ip, syms, phases), c in self._terms.items():
            for a, _ in syms + phases:
                if not a.assumed_real:
                    raise ComplexSymbolUnsupported(
                        f"cannot conjugate symbol {a.name!r} not assumed real"
                    )
            if ip == 1:  # conj(i) = -i
                c = -c
            phases2 = tuple((a, -r) for a, r in phases)
            out.append(((ip, syms, phases2), c))
        return Scalar(out)

    def subs_one(self, name: str) -> "Scalar":
        """Substitute the named symbol by 1 (drops its powers)."""
        out = []
        for (ip, syms, phases), c in self._terms.items():
            if any(a.name == name for a, _ in phases):
                raise ValueError(f"cannot substitute phase angle {name!r} by 1")
            syms2 = tuple((a, e) for a, e in syms if a.name != name)
            out.append(((ip, syms2, phases), c))
        return Scalar(out)

    # -- equality, hashing, pickling ------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __reduce__(self):
        return (Scalar, (tuple(self._terms.items()),))

    def __repr__(self):
        if not self._terms:
            return "Scalar(0)"
        bits = []
        for (ip, syms, phases), c in self.terms():
            parts = [str(c)]
            if ip:
                parts.append("I")
            parts += [f"{a.name}^{e}" for a, e in syms]
            parts += [f"exp({r}*I*{a.name})" for a, r in phases]
            bits.append("*".join(parts))
        return "Scalar(" + " + ".join(bits) + ")"


def sym(name, assumed_real=True) -> Scalar:
    """Scalar holding a single symbol to the first power."""
    return Scalar.symbol(name, 1, assumed_real)


def scalar_conjugate(s: Scalar) -> Scalar:
    """Complex conjugate; real rationals are fixed points."""
    return s.conjugate()
