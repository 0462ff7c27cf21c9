"""Independent correctness oracles.

flatten_and_swap_no re-derives normal-ordered forms by repeatedly swapping
adjacent (annihilator, creator) pairs with the commutation relations until a
fixpoint, sharing no code path with the closed-form pipeline.

fock_matrix evaluates operators on the truncated number basis |n_1 ... n_m>
with n_k < dim.  Raw matrix elements are rational multiples of
sqrt(prod_k m_k! n_k!), so every entry is stored as that rational weight and
comparisons stay exact; no floating point is involved.  A word of total
degree D corrupts only the top D levels per mode, so two operators that are
equal as elements of the algebra have matrices agreeing on the block with
all indices below dim - D.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, isqrt

from .errors import InternalError, MissingSubstitution
from .expr import LadderPoly, NormalPoly, flatten_ops
from .scalars import Scalar


def flatten_and_swap_no(p: LadderPoly) -> NormalPoly:
    """Rewrite-based normal ordering.

    Each pass flattens every summand's powers into a list of one-operator
    factors, swaps the leftmost (b_j, bd_k) pair using the commutation
    relations, and multiplies the factor list back into a polynomial; the
    rebuilt sum is processed again until no summand changes.  Summands with
    no such pair are normal-ordered and move to the output.  The per-pass
    expression rebuild is the point of this baseline: it is the slow,
    transparent reference the closed-form pipeline is checked against."""
    out: dict = {}
    expr = p
    while expr is not None:
        pending = None
        for term in expr.terms:
            ops = flatten_ops(term.word)
            swap_at = None
            for i in range(len(ops) - 1):
                if not ops[i].create and ops[i + 1].create:
                    swap_at = i
                    break
            if swap_at is None:
                sig = _signature_of_ordered(ops)
                prev = out.get(sig)
                out[sig] = term.coeff if prev is None else prev + term.coeff
                continue
            a, c = ops[swap_at], ops[swap_at + 1]
            swapped = LadderPoly.from_op(c.create, c.mode) * LadderPoly.from_op(
                a.create, a.mode
            )
            if a.mode == c.mode:
                swapped = swapped + LadderPoly.one()
            rebuilt = LadderPoly.scalar(term.coeff)
            for op in ops[:swap_at]:
                rebuilt = rebuilt * LadderPoly.from_op(op.create, op.mode)
            rebuilt = rebuilt * swapped
            for op in ops[swap_at + 2 :]:
                rebuilt = rebuilt * LadderPoly.from_op(op.create, op.mode)
            pending = rebuilt if pending is None else pending + rebuilt
        expr = pending
    return NormalPoly(out)


def _signature_of_ordered(ops) -> tuple:
    """Signature of a flat list with every creator left of every annihilator."""
    created: dict = {}
    destroyed: dict = {}
    for op in ops:
        (created if op.create else destroyed)[op.mode] = (
            (created if op.create else destroyed).get(op.mode, 0) + 1
        )
    modes = sorted(set(created) | set(destroyed))
    return tuple((m, created.get(m, 0), destroyed.get(m, 0)) for m in modes)


# ---------------------------------------------------------------------------
# exact complex rationals and truncated matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexRational:
    real: Fraction = Fraction(0)
    imag: Fraction = Fraction(0)

    @classmethod
    def coerce(cls, x) -> "ComplexRational":
        if isinstance(x, ComplexRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x), Fraction(0))
        raise TypeError(f"cannot treat {x!r} as an exact complex rational")

    @property
    def is_zero(self) -> bool:
        return self.real == 0 and self.imag == 0

    def __add__(self, other):
        o = self.coerce(other)
        return ComplexRational(self.real + o.real, self.imag + o.imag)

    def __sub__(self, other):
        o = self.coerce(other)
        return ComplexRational(self.real - o.real, self.imag - o.imag)

    def __neg__(self):
        return ComplexRational(-self.real, -self.imag)

    def __mul__(self, other):
        o = self.coerce(other)
        return ComplexRational(
            self.real * o.real - self.imag * o.imag,
            self.real * o.imag + self.imag * o.real,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.real, -self.imag)

    def inverse(self) -> "ComplexRational":
        norm = self.real * self.real + self.imag * self.imag
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        return ComplexRational(self.real / norm, -self.imag / norm)

    def __pow__(self, n: int) -> "ComplexRational":
        if n < 0:
            return self.inverse() ** (-n)
        out = ComplexRational(Fraction(1))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out


_I = ComplexRational(Fraction(0), Fraction(1))


def scalar_value(s: Scalar, subs=None, phase_subs=None) -> ComplexRational:
    """Evaluate a scalar with exact substitutions.

    subs maps symbol names to exact values; phase_subs maps a phase angle
    name to the exact value of exp(i*angle), which must be raised only to
    integer multipliers."""
    subs = subs or {}
    phase_subs = phase_subs or {}
    total = ComplexRational()
    for (ip, syms, phases), c in s.terms():
        v = ComplexRational(c) * (_I**ip)
        for atom, e in syms:
            if atom.name not in subs:
                raise MissingSubstitution(f"no value for symbol {atom.name!r}")
            if e.denominator != 1:
                raise MissingSubstitution(
                    f"fractional power {e} of {atom.name!r} cannot be substituted exactly"
                )
            v = v * (ComplexRational.coerce(subs[atom.name]) ** int(e))
        for atom, r in phases:
            if atom.name not in phase_subs:
                raise MissingSubstitution(f"no value for phase angle {atom.name!r}")
            if r.denominator != 1:
                raise MissingSubstitution(
                    f"fractional phase multiplier {r} cannot be substituted exactly"
                )
            v = v * (ComplexRational.coerce(phase_subs[atom.name]) ** int(r))
        total = total + v
    return total


@dataclass
class FockMatrix:
    """Truncated-basis matrix in radical-free form.

    entries maps (row_state, col_state) to the exact weight w such that the
    raw matrix element equals w * sqrt(prod_k row_k! col_k!)."""

    modes: tuple
    dim: int
    entries: dict

    def weight(self, row, col) -> ComplexRational:
        return self.entries.get((tuple(row), tuple(col)), ComplexRational())

    def element_squared(self, row, col) -> Fraction:
        """Signed square of the raw element: sign(w) * w^2 * prod(row!col!).

        Exact and radical-free; enough to compare real matrices."""
        w = self.weight(row, col)
        if w.imag != 0:
            raise ValueError("element_squared requires a real entry")
        scale = Fraction(1)
        for m, n in zip(row, col):
            scale *= factorial(m) * factorial(n)
        return w.real * abs(w.real) * scale


def _iter_states(n_modes: int, dim: int):
    state = [0] * n_modes
    while True:
        yield tuple(state)
        for k in range(n_modes - 1, -1, -1):
            state[k] += 1
            if state[k] < dim:
                break
            state[k] = 0
        else:
            return


def fock_matrix(obj, dim: int, subs=None, phase_subs=None, modes=None) -> FockMatrix:
    """Exact truncated matrix of a LadderPoly or NormalPoly.

    Creation out of the top level |dim-1> leaves the truncated space and the
    branch is dropped, matching a product of truncated one-operator
    matrices."""
    if isinstance(obj, NormalPoly):
        pairs = [(t.coeff, t.word) for t in obj.to_ladder_poly().terms]
    elif isinstance(obj, LadderPoly):
        pairs = [(t.coeff, t.word) for t in obj.terms]
    else:
        raise TypeError(f"cannot build a matrix of {obj!r}")
    if dim < 1:
        raise ValueError("dim must be positive")
    if modes is None:
        mode_set: set = set()
        for _, word in pairs:
            mode_set.update(op.mode for op, _ in word)
        modes = tuple(sorted(mode_set))
    else:
        modes = tuple(modes)
    index = {m: i for i, m in enumerate(modes)}

    entries: dict = {}
    prepared = [
        (scalar_value(coeff, subs, phase_subs), tuple(reversed(flatten_ops(word))))
        for coeff, word in pairs
    ]
    fact = [factorial(n) for n in range(dim)]
    for col in _iter_states(len(modes), dim):
        for value, ops in prepared:
            if value.is_zero:
                continue
            state = list(col)
            radicand = 1
            alive = True
            for op in ops:  # rightmost factor acts first
                k = index[op.mode]
                if op.create:
                    level = state[k] + 1
                    if level >= dim:
                        alive = False
                        break
                    radicand *= level
                    state[k] = level
                else:
                    level = state[k]
                    if level == 0:
                        alive = False
                        break
                    radicand *= level
                    state[k] -= 1
            if not alive:
                continue
            row = tuple(state)
            norm = 1
            for k in range(len(modes)):
                norm *= fact[row[k]] * fact[col[k]]
            ratio = Fraction(radicand, norm)
            num_root = isqrt(ratio.numerator)
            den_root = isqrt(ratio.denominator)
            if num_root * num_root != ratio.numerator or den_root * den_root != ratio.denominator:
                raise InternalError("matrix amplitude is not rational after normalization")
            w = value * Fraction(num_root, den_root)
            key = (row, col)
            prev = entries.get(key)
            total = w if prev is None else prev + w
            if total.is_zero:
                entries.pop(key, None)
            else:
                entries[key] = total
    return FockMatrix(modes, dim, entries)


def masked_agree(a: FockMatrix, b: FockMatrix, margin: int) -> bool:
    """Exact equality of two matrices away from the truncation boundary:
    only states with every mode index below dim - margin are compared."""
    if a.modes != b.modes or a.dim != b.dim:
        raise ValueError("matrices are over different spaces")
    cut = a.dim - margin
    if cut <= 0:
        raise ValueError("margin leaves no comparable block")

    def keep(key) -> bool:
        row, col = key
        return all(x < cut for x in row) and all(x < cut for x in col)

    keys = {k for k in a.entries if keep(k)} | {k for k in b.entries if keep(k)}
    return all((a.weight(*k) - b.weight(*k)).is_zero for k in keys)
