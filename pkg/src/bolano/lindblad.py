"""Symbolic expectation-value evolution for open systems.

The density matrix is never materialized.  The closed-system part of
d<A>/dt is the normal-ordered <[A, H]> scaled by -i (or -i/hbar), and each
dissipation channel (rate, O, P) contributes

    rate * normal_order( [P^dag, A] O / 2  +  P^dag [A, O] / 2 )

wrapped linearly into expectation values of normal-ordered monomials; the
empty signature folds into a plain scalar constant because <1> = 1.  Rates
multiply their channel verbatim, including complex rates, and are never
conjugated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptyObservable, UnsupportedObservable
from .expr import LadderPoly, NormalPoly, Signature, dagger
from .normord import ParallelConfig, commutator_no, normal_order
from .scalars import Scalar

HBAR = "hbar"


@dataclass
class DissipatorSpec:
    """One dissipation channel: rate, jump operator O, and pairing operator P
    (defaulting to O when omitted)."""

    rate: Scalar
    jump: LadderPoly
    pair: LadderPoly | None = None

    def __post_init__(self) -> None:
        if isinstance(self.rate, (int, Fraction)):
            self.rate = Scalar.rational(self.rate)
        if self.pair is None:
            self.pair = self.jump
        if self.jump.is_zero or self.pair.is_zero:
            raise ValueError("dissipator operators must be nonzero")


@dataclass
class LindbladSpec:
    hamiltonian: LadderPoly
    dissipators: list = field(default_factory=list)
    hbar_is_one: bool = True


@dataclass(frozen=True)
class ExpVal:
    """Expectation value of one normal-ordered monomial with unit coefficient."""

    signature: Signature

    def __post_init__(self) -> None:
        if not self.signature:
            raise ValueError("<1> is never materialized; use the constant term")


@dataclass
class EvolutionEquation:
    """d<observable>/dt = sum(coeff * <monomial>) + constant."""

    observable: ExpVal
    rhs: dict
    constant: Scalar

    def conjugate_transpose(self) -> "EvolutionEquation":
        """Term-by-term adjoint: coefficients conjugated, signatures daggered."""
        obs = ExpVal(tuple((m, q, p) for m, p, q in self.observable.signature))
        rhs = {
            ExpVal(tuple((m, q, p) for m, p, q in ev.signature)): c.conjugate()
            for ev, c in self.rhs.items()
        }
        return EvolutionEquation(obs, rhs, self.constant.conjugate())


def wrap_expectation(n: NormalPoly) -> tuple[dict, Scalar]:
    """Linear wrap of a normal-ordered polynomial into expectation values;
    the empty signature becomes the scalar constant."""
    rhs: dict = {}
    constant = Scalar.zero()
    for sig, coeff in n.items():
        if sig:
            rhs[ExpVal(sig)] = coeff
        else:
            constant = coeff
    return rhs, constant


def hamiltonian_trace(
    hamiltonian: LadderPoly, observable: LadderPoly, cfg: ParallelConfig | None = None
) -> NormalPoly:
    """Normal-ordered <[A, H]> integrand; the -i/hbar prefactor is applied at
    assembly time."""
    return commutator_no(observable, hamiltonian, cfg)


def dissipator_trace(
    jump: LadderPoly,
    pair: LadderPoly,
    observable: LadderPoly,
    cfg: ParallelConfig | None = None,
) -> NormalPoly:
    """Normal-ordered ( [P^dag, A] O + P^dag [A, O] ) / 2."""
    pd = dagger(pair)
    half = Fraction(1, 2)
    inner = (pd * observable - observable * pd) * jump * half
    inner = inner + pd * (observable * jump - jump * observable) * half
    return normal_order(inner, cfg)


def _observable_label(observable: LadderPoly, cfg) -> ExpVal:
    n = normal_order(observable, cfg)
    entries = n.items()
    if len(entries) != 1:
        raise UnsupportedObservable(
            "observable must normal-order to a single monomial"
        )
    sig, coeff = entries[0]
    if not sig:
        raise UnsupportedObservable("observable is a constant")
    if coeff != Scalar.one():
        raise UnsupportedObservable("observable must carry unit coefficient")
    return ExpVal(sig)


def lme_expval_evo(
    spec: LindbladSpec, observable: LadderPoly, cfg: ParallelConfig | None = None
) -> EvolutionEquation:
    """Assemble d<A>/dt for the given Hamiltonian and dissipation channels."""
    if observable.is_zero:
        raise EmptyObservable("observable polynomial is zero")
    hamiltonian = spec.hamiltonian
    dissipators = list(spec.dissipators)
    if spec.hbar_is_one:
        hamiltonian = hamiltonian.subs_one(HBAR)
        observable = observable.subs_one(HBAR)
        dissipators = [
            DissipatorSpec(
                d.rate.subs_one(HBAR), d.jump.subs_one(HBAR), d.pair.subs_one(HBAR)
            )
            for d in dissipators
        ]
    label = _observable_label(observable, cfg)

    prefactor = Scalar.imaginary() * (-1)
    if not spec.hbar_is_one:
        prefactor = prefactor * Scalar.symbol(HBAR, -1)
    total = hamiltonian_trace(hamiltonian, observable, cfg).scale(prefactor)
    for d in dissipators:
        trace = dissipator_trace(d.jump, d.pair, observable, cfg)
        total = total + trace.scale(d.rate)

    rhs, constant = wrap_expectation(total)
    return EvolutionEquation(label, rhs, constant)
