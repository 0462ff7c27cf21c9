"""Exact normal ordering for multimode bosonic ladder algebra.

Canonical ordering is done per mode in closed form through generalized
Stirling numbers, with all arithmetic over exact rationals and big
integers.  On top of the ordering kernel sit normal-ordered commutators and
symbolic expectation-value evolution equations for open systems, plus two
independent oracles (a rewrite-based normal orderer and exact truncated
number-basis matrices) used by the test suite.
"""

from .blasiak import (
    WordProfile,
    binomial,
    blasiak_normal_order,
    falling_factorial,
    stirling_rs,
)
from .errors import (
    BolanoError,
    ComplexSymbolUnsupported,
    EmptyObservable,
    InternalError,
    MissingSubstitution,
    NonIntegerLadderPower,
    ParseError,
    RecordError,
    UnsupportedBounds,
    UnsupportedObservable,
    UnsupportedPower,
)
from .expr import (
    LadderOp,
    LadderPoly,
    LadderTerm,
    NormalPoly,
    dagger,
    expand,
    expand_finite_range,
    ladder_pair,
    merge_word,
)
from .io import load_record, parse, render
from .lindblad import (
    DissipatorSpec,
    EvolutionEquation,
    ExpVal,
    LindbladSpec,
    dissipator_trace,
    hamiltonian_trace,
    lme_expval_evo,
    wrap_expectation,
)
from .normord import (
    ParallelConfig,
    SERIAL,
    commutator_no,
    factor_by_mode,
    final_sort,
    normal_order,
)
from .oracle import (
    ComplexRational,
    FockMatrix,
    flatten_and_swap_no,
    fock_matrix,
    masked_agree,
    scalar_value,
)
from .scalars import Scalar, SymbolAtom, rational_from_decimal, scalar_conjugate, sym

__version__ = "0.1.0"

__all__ = [
    "BolanoError",
    "ComplexRational",
    "ComplexSymbolUnsupported",
    "DissipatorSpec",
    "EmptyObservable",
    "EvolutionEquation",
    "ExpVal",
    "FockMatrix",
    "InternalError",
    "LadderOp",
    "LadderPoly",
    "LadderTerm",
    "LindbladSpec",
    "MissingSubstitution",
    "NonIntegerLadderPower",
    "NormalPoly",
    "ParallelConfig",
    "ParseError",
    "RecordError",
    "SERIAL",
    "Scalar",
    "SymbolAtom",
    "UnsupportedBounds",
    "UnsupportedObservable",
    "UnsupportedPower",
    "WordProfile",
    "binomial",
    "blasiak_normal_order",
    "commutator_no",
    "dagger",
    "dissipator_trace",
    "expand",
    "expand_finite_range",
    "factor_by_mode",
    "falling_factorial",
    "final_sort",
    "flatten_and_swap_no",
    "fock_matrix",
    "hamiltonian_trace",
    "ladder_pair",
    "lme_expval_evo",
    "load_record",
    "masked_agree",
    "merge_word",
    "normal_order",
    "parse",
    "rational_from_decimal",
    "render",
    "scalar_conjugate",
    "scalar_value",
    "stirling_rs",
    "sym",
    "wrap_expectation",
]
