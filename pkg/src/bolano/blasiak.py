"""Exact single-mode normal ordering via generalized Stirling numbers.

A single-mode word is grouped into blocks, rightmost block first:

    word = bd^{r_M} b^{s_M} ... bd^{r_2} b^{s_2} bd^{r_1} b^{s_1}

with running excesses d_l = sum_{m<=l} (r_m - s_m) and d_0 = 0.  With

    S_{r,s}(k) = (1/k!) * sum_{j=0}^{k} C(k,j) (-1)^(k-j)
                 prod_{m=1}^{M} falling(d_{m-1} + j, s_m)

the normal-ordered equivalent of the word is

    bd^{d_M} * sum_{k=s_1}^{s_1+...+s_M} S_{r,s}(k) bd^k b^k      if d_M >= 0
    sum_{k=r_M}^{r_1+...+r_M} S_{rev(s),rev(r)}(k) bd^k b^k b^{-d_M}   else

where rev reverses the block vectors.  Everything is computed over exact
big integers; the division by k! must leave no remainder, and a nonzero
remainder is reported as an internal invariant violation.

The private tuple-based functions carry the arithmetic; the WordProfile
dataclass is the validated public face over the same code path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

from .errors import InternalError
from .expr import LadderOp, Word, merge_word


def binomial(n: int, k: int) -> int:
    """C(n, k), zero when k > n."""
    if k < 0 or n < 0:
        return 0
    return comb(n, k)


def falling_factorial(m: int, n: int) -> int:
    """m (m-1) ... (m-n+1); the empty product for n = 0."""
    out = 1
    for i in range(n):
        out *= m - i
    return out


def _word_vectors(word: Word) -> tuple:
    """(r, s) block vectors of a merged single-mode word, rightmost block
    first; reading off maximal runs keeps the block count minimal."""
    r: list = []
    s: list = []
    i = len(word) - 1
    while i >= 0:
        s_m = 0
        r_m = 0
        if not word[i][0].create:
            s_m = word[i][1]
            i -= 1
        if i >= 0 and word[i][0].create:
            r_m = word[i][1]
            i -= 1
        r.append(r_m)
        s.append(s_m)
    return tuple(r), tuple(s)


def _stirling(d_prev: tuple, s: tuple, k: int) -> int:
    if k < 0:
        return 0
    total = 0
    sign = 1 if k % 2 == 0 else -1  # (-1)^(k-j) starting at j = 0
    for j in range(k + 1):
        prod = 1
        for d, s_m in zip(d_prev, s):
            base = d + j
            for i in range(s_m):
                prod *= base - i
            if prod == 0:
                break
        if prod:
            total += sign * comb(k, j) * prod
        sign = -sign
    quot, rem = divmod(total, factorial(k))
    if rem:
        raise InternalError(
            f"Stirling sum {total} not divisible by {k}! for s={s}"
        )
    return quot


def _excess_prefix(r: tuple, s: tuple) -> tuple:
    """(d_0, d_1, ..., d_{M-1}), the excesses entering each block's factor."""
    out = [0]
    acc = 0
    for rm, sm in zip(r[:-1], s[:-1]):
        acc += rm - sm
        out.append(acc)
    return tuple(out)


def _normal_order_vectors(r: tuple, s: tuple) -> dict:
    d_final = sum(r) - sum(s)
    out: dict = {}
    if d_final >= 0:
        d_prev = _excess_prefix(r, s)
        for k in range(s[0], sum(s) + 1):
            v = _stirling(d_prev, s, k)
            if v:
                out[(k + d_final, k)] = v
    else:
        r2 = tuple(reversed(s))
        s2 = tuple(reversed(r))
        d_prev = _excess_prefix(r2, s2)
        for k in range(r[-1], sum(r) + 1):
            v = _stirling(d_prev, s2, k)
            if v:
                out[(k, k - d_final)] = v
    return out


@dataclass(frozen=True)
class WordProfile:
    """Block exponent vectors of a single-mode word, rightmost block first."""

    r: tuple
    s: tuple
    d: tuple = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.r) != len(self.s) or not self.r:
            raise ValueError("profile needs equal-length nonempty r and s")
        if (self.r and min(self.r) < 0) or (self.s and min(self.s) < 0):
            raise ValueError("profile exponents must be nonnegative")
        excess = []
        acc = 0
        for rm, sm in zip(self.r, self.s):
            acc += rm - sm
            excess.append(acc)
        object.__setattr__(self, "d", tuple(excess))

    @property
    def length(self) -> int:
        return len(self.r)

    @property
    def final_excess(self) -> int:
        return self.d[-1]

    @classmethod
    def from_word(cls, word: Word) -> "WordProfile":
        if not word:
            raise ValueError("empty word has no profile")
        modes = {op.mode for op, _ in word}
        if len(modes) != 1:
            raise ValueError(f"word mixes modes {sorted(modes)!r}")
        r, s = _word_vectors(word)
        return cls(r, s)

    def to_word(self, mode: str = "") -> Word:
        pairs = []
        for r_m, s_m in zip(reversed(self.r), reversed(self.s)):
            pairs.append((LadderOp(True, mode), r_m))
            pairs.append((LadderOp(False, mode), s_m))
        return merge_word(pairs)


def stirling_rs(profile: WordProfile, k: int) -> int:
    """Generalized Stirling number S_{r,s}(k) as an exact integer."""
    return _stirling((0,) + profile.d[:-1], profile.s, k)


def blasiak_normal_order(profile: WordProfile) -> dict:
    """Normal-ordered form of the profiled word as {(p, q): coefficient}."""
    return _normal_order_vectors(profile.r, profile.s)
