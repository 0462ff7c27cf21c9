"""Multipartite normal ordering.

Each summand of the input polynomial is factored by mode (cross-mode
operators commute exactly), every single-mode factor is normal-ordered in
closed form, and the per-mode results are recombined into the canonical
signature map with modes sorted.  Summands are independent work units, and
the final merge is commutative addition, so the result never depends on
worker count or scheduling.  There is deliberately no fast path for inputs
that are already normal-ordered.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

from .blasiak import WordProfile, _normal_order_vectors, _word_vectors, blasiak_normal_order
from .expr import LadderPoly, LadderTerm, NormalPoly, merge_word
from .scalars import Scalar

ENV_PARALLEL = "BOLANO_PARALLEL"
ENV_WORKERS = "BOLANO_WORKERS"
ENV_MIN_SUMMANDS = "BOLANO_MIN_SUMMANDS"


@dataclass
class ParallelConfig:
    enable: bool = True
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    min_summands: int = 2

    @property
    def effective_min_summands(self) -> int:
        # anything configured below 2 is clamped back up to 2
        return max(2, self.min_summands)

    @classmethod
    def from_env(cls) -> "ParallelConfig":
        cfg = cls()
        v = os.environ.get(ENV_PARALLEL)
        if v is not None:
            cfg.enable = v.strip() not in ("0", "false", "False", "")
        v = os.environ.get(ENV_WORKERS)
        if v:
            cfg.workers = max(1, int(v))
        v = os.environ.get(ENV_MIN_SUMMANDS)
        if v:
            cfg.min_summands = int(v)
        return cfg


SERIAL = ParallelConfig(enable=False, workers=1)


def factor_by_mode(term: LadderTerm) -> tuple[Scalar, dict]:
    """Split one term into its scalar and per-mode subwords, preserving each
    mode's internal operator order.  Ops of other modes may have separated
    equal neighbours, so runs are re-merged as they are collected."""
    by_mode: dict[str, list] = {}
    for op, exp in term.word:
        run = by_mode.get(op.mode)
        if run is None:
            by_mode[op.mode] = [(op, exp)]
        elif run[-1][0] == op:
            run[-1] = (op, run[-1][1] + exp)
        else:
            run.append((op, exp))
    return term.coeff, {m: tuple(w) for m, w in by_mode.items()}


def _cross_entries(scalar: Scalar, mode_maps: list) -> list:
    """Cross product of per-mode {(p, q): int} maps as (signature, Scalar)
    pairs; signatures come out mode-sorted because mode_maps is."""
    if not mode_maps:
        return [((), scalar)]
    if len(mode_maps) == 1:
        mode, items = mode_maps[0]
        return [
            ((((mode, p, q),) if (p or q) else ()), scalar * c)
            for (p, q), c in items
        ]
    combos = [((), 1)]
    for mode, items in mode_maps:
        nxt = []
        for sig, c0 in combos:
            for (p, q), c in items:
                sig2 = sig + ((mode, p, q),) if (p or q) else sig
                nxt.append((sig2, c0 * c))
        combos = nxt
    return [(sig, scalar * c) for sig, c in combos]


def final_sort(scalar: Scalar, per_mode: Mapping) -> NormalPoly:
    """Combine per-mode normal-ordered maps {(p, q): int} into one canonical
    polynomial for a single summand."""
    mode_maps = [(m, list(per_mode[m].items())) for m in sorted(per_mode)]
    return NormalPoly(_cross_entries(scalar, mode_maps))


def _normal_order_term(term: LadderTerm) -> list:
    scalar, by_mode = factor_by_mode(term)
    mode_maps = [
        (mode, list(_normal_order_vectors(*_word_vectors(by_mode[mode])).items()))
        for mode in sorted(by_mode)
    ]
    return _cross_entries(scalar, mode_maps)


def normal_order(p: LadderPoly, cfg: ParallelConfig | None = None) -> NormalPoly:
    """Canonical normal-ordered equivalent of an expanded polynomial."""
    if cfg is None:
        cfg = ParallelConfig.from_env()
    terms = p.terms
    if not terms:
        return NormalPoly.zero()
    acc: dict = {}

    def merge(pairs) -> None:
        for sig, coeff in pairs:
            prev = acc.get(sig)
            if prev is None:
                acc[sig] = coeff
            else:
                acc[sig] = prev + coeff

    if (
        cfg.enable
        and cfg.workers > 1
        and len(terms) >= cfg.effective_min_summands
    ):
        workers = min(cfg.workers, len(terms))
        chunk = max(1, len(terms) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for pairs in pool.map(_normal_order_term, terms, chunksize=chunk):
                merge(pairs)
    else:
        get = acc.get
        for term in terms:
            for sig, coeff in _normal_order_term(term):
                prev = get(sig)
                acc[sig] = coeff if prev is None else prev + coeff
    return NormalPoly._raw(acc)


def commutator_no(a: LadderPoly, b: LadderPoly, cfg: ParallelConfig | None = None) -> NormalPoly:
    """Normal-ordered commutator, normal_order(a*b - b*a)."""
    return normal_order(a * b - b * a, cfg)
