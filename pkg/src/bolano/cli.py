"""Command-line front end and benchmark harness.

Subcommands: no (normal ordering), comm (normal-ordered commutator), lme
(expectation-value evolution), bench (timing of the closed-form pipeline
against the rewrite baseline on seeded random monomials).

Exit codes: 0 success, 2 bad user input, 3 I/O failure, 4 internal
invariant violation.

The bench workload derives from SplitMix64, a 64-bit splittable PRNG: a root
generator seeded with --seed emits one subseed per trial, and each trial's
word draws its operators from a fresh SplitMix64 on that subseed, uniformly
over the 2 * modes (kind, mode) pairs.  The workload is therefore
bit-reproducible from (seed, ops, modes, trials) on any platform.
"""

from __future__ import annotations

import argparse
import csv
import statistics
import sys
import time
from dataclasses import dataclass

from .errors import BolanoError, InternalError, ParseError
from .expr import LadderOp, LadderPoly, LadderTerm, merge_word, expand
from .io import load_record, parse, render
from .lindblad import DissipatorSpec, LindbladSpec, lme_expval_evo
from .normord import ParallelConfig, commutator_no, normal_order
from .oracle import flatten_and_swap_no
from .scalars import Scalar

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Reference SplitMix64 stream; split() derives an independent child."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())

    def below(self, n: int) -> int:
        """Uniform draw from range(n) by rejection, bias-free."""
        limit = (_MASK64 + 1) - ((_MASK64 + 1) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n


def random_monomial(rng: SplitMix64, n_ops: int, n_modes: int) -> LadderPoly:
    """Unit-coefficient word of n_ops i.i.d. uniform (kind, mode) draws."""
    pairs = []
    for _ in range(n_ops):
        pick = rng.below(2 * n_modes)
        create = bool(pick % 2)
        mode = str(pick // 2 + 1)
        pairs.append((LadderOp(create, mode), 1))
    return LadderPoly((LadderTerm(Scalar.one(), merge_word(pairs)),))


@dataclass
class BenchRecord:
    seed: int
    trial: int
    n_ops: int
    n_modes: int
    algo: str
    nanos: int
    terms: int


def run_bench(
    n_ops: int,
    n_modes: int,
    trials: int,
    seed: int,
    algo: str = "both",
    cfg: ParallelConfig | None = None,
) -> tuple[list, dict]:
    """Time normal ordering per trial; in 'both' mode also assert that the
    two algorithms produce identical canonical output."""
    if n_ops < 1 or n_modes < 1 or trials < 1:
        raise ValueError("ops, modes, and trials must all be at least 1")
    if cfg is None:
        cfg = ParallelConfig(enable=False, workers=1)
    root = SplitMix64(seed)
    records: list = []
    ratios: list = []
    for trial in range(trials):
        word_rng = root.split()
        poly = random_monomial(word_rng, n_ops, n_modes)
        blasiak_ns = baseline_ns = None
        result_fast = result_base = None
        if algo in ("blasiak", "both"):
            t0 = time.perf_counter_ns()
            result_fast = normal_order(poly, cfg)
            blasiak_ns = max(1, time.perf_counter_ns() - t0)
            records.append(
                BenchRecord(seed, trial, n_ops, n_modes, "blasiak", blasiak_ns,
                            max(1, len(result_fast.entries)))
            )
        if algo in ("baseline", "both"):
            t0 = time.perf_counter_ns()
            result_base = flatten_and_swap_no(poly)
            baseline_ns = max(1, time.perf_counter_ns() - t0)
            records.append(
                BenchRecord(seed, trial, n_ops, n_modes, "baseline", baseline_ns,
                            max(1, len(result_base.entries)))
            )
        if algo == "both":
            if result_fast != result_base:
                raise InternalError(
                    f"algorithms disagree on trial {trial} (seed {seed})"
                )
            ratios.append(baseline_ns / blasiak_ns)
    summary = {"trials": trials, "n_ops": n_ops, "n_modes": n_modes, "algo": algo}
    if ratios:
        summary["median_ratio"] = statistics.median(ratios)
        summary["mean_ratio"] = statistics.fmean(ratios)
    return records, summary


def write_csv(records, stream) -> None:
    writer = csv.writer(stream)
    writer.writerow(["seed", "trial", "n_ops", "n_modes", "algo", "nanos", "terms"])
    for r in records:
        writer.writerow([r.seed, r.trial, r.n_ops, r.n_modes, r.algo, r.nanos, r.terms])


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _config_from_args(args) -> ParallelConfig:
    cfg = ParallelConfig.from_env()
    if getattr(args, "no_parallel", False):
        cfg.enable = False
    if getattr(args, "workers", None) is not None:
        cfg.workers = max(1, args.workers)
    if getattr(args, "min_summands", None) is not None:
        cfg.min_summands = args.min_summands
    return cfg


def _cmd_no(args) -> int:
    poly = expand(parse(args.expr))
    result = normal_order(poly, _config_from_args(args))
    print(render(result, args.format))
    return 0


def _cmd_comm(args) -> int:
    a = expand(parse(args.a))
    b = expand(parse(args.b))
    result = commutator_no(a, b, _config_from_args(args))
    print(render(result, args.format))
    return 0


def _parse_dissipator(text: str) -> DissipatorSpec:
    parts = [p.strip() for p in text.split(";")]
    if len(parts) not in (2, 3) or not all(parts):
        raise ParseError(
            f"dissipator must be 'rate;O' or 'rate;O;P', got {text!r}"
        )
    rate_poly = expand(parse(parts[0]))
    try:
        rate = rate_poly.to_scalar()
    except ValueError:
        raise ParseError(f"dissipator rate must be a scalar: {parts[0]!r}") from None
    jump = expand(parse(parts[1]))
    pair = expand(parse(parts[2])) if len(parts) == 3 else None
    try:
        return DissipatorSpec(rate, jump, pair)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _cmd_lme(args) -> int:
    spec = LindbladSpec(
        hamiltonian=expand(parse(args.ham)),
        dissipators=[_parse_dissipator(d) for d in args.dissipator],
        hbar_is_one=not args.keep_hbar,
    )
    observable = expand(parse(args.observable))
    equation = lme_expval_evo(spec, observable, _config_from_args(args))
    print(render(equation, args.format))
    return 0


def _cmd_bench(args) -> int:
    cfg = None
    if args.workers is not None:
        cfg = ParallelConfig(enable=True, workers=max(1, args.workers))
    records, summary = run_bench(
        args.ops, args.modes, args.trials, args.seed, args.algo, cfg
    )
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(records, fh)
        summary_stream = sys.stdout
    else:
        write_csv(records, sys.stdout)
        summary_stream = sys.stderr
    bits = [f"{k}={summary[k]}" for k in ("algo", "n_ops", "n_modes", "trials")]
    if "median_ratio" in summary:
        bits.append(f"median_ratio={summary['median_ratio']:.3f}")
        bits.append(f"mean_ratio={summary['mean_ratio']:.3f}")
    print(" ".join(bits), file=summary_stream)
    return 0


def _add_common_flags(sub) -> None:
    sub.add_argument("--format", choices=("plain", "latex", "record"), default="latex")
    sub.add_argument("--workers", type=int, default=None)
    sub.add_argument("--min-summands", dest="min_summands", type=int, default=None)
    sub.add_argument("--no-parallel", dest="no_parallel", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bolano",
        description="Exact normal ordering for multimode bosonic ladder algebra.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_no = subs.add_parser("no", help="normal-order a polynomial")
    p_no.add_argument("expr")
    _add_common_flags(p_no)
    p_no.set_defaults(func=_cmd_no)

    p_comm = subs.add_parser("comm", help="normal-ordered commutator [A, B]")
    p_comm.add_argument("a")
    p_comm.add_argument("b")
    _add_common_flags(p_comm)
    p_comm.set_defaults(func=_cmd_comm)

    p_lme = subs.add_parser("lme", help="expectation-value evolution d<A>/dt")
    p_lme.add_argument("--ham", required=True)
    p_lme.add_argument(
        "--dissipator", action="append", default=[], metavar="RATE;O[;P]"
    )
    p_lme.add_argument("--observable", required=True)
    p_lme.add_argument("--keep-hbar", dest="keep_hbar", action="store_true")
    _add_common_flags(p_lme)
    p_lme.set_defaults(func=_cmd_lme)

    p_bench = subs.add_parser("bench", help="benchmark against the rewrite baseline")
    p_bench.add_argument("--ops", type=int, default=10)
    p_bench.add_argument("--modes", type=int, default=2)
    p_bench.add_argument("--trials", type=int, default=100)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--algo", choices=("blasiak", "baseline", "both"), default="both")
    p_bench.add_argument("--out", default=None)
    p_bench.add_argument("--workers", type=int, default=None)
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    except BolanoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


def main_entry() -> None:
    raise SystemExit(main())
