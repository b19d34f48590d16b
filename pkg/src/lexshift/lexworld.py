"""Lexicographic pairs, their classification, and normal forms.

A pair (alpha, beta) of eventually periodic sequences cuts out the set of
sequences x whose every shift stays between the two bounds:

    beta <= shift^n(x) <= alpha   for all n >= 0.

Only pairs with alpha starting in 1 and beta starting in 0 describe a
nonempty window around the midpoint; LexPair enforces that shape.

Different pairs can describe the same set.  The canonical representative
is a pair where alpha dominates its own shifts, beta is dominated by its
own shifts, and neither bound's shifts escape past the other bound.
`classify` names the ways a pair can fail that, and `normalize` repairs
each failure mode by truncating a bound just before the offending index
and closing it up periodically.  The repairs preserve the described set;
the subshift module can check that to any finite depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from lexshift.circle import HALF, Side, from_binary, to_binary
from lexshift.words import (
    UNBOUNDED,
    EpSeq,
    Ordering,
    compare,
    mirror,
    run_stats,
    shift,
)


@dataclass(frozen=True, slots=True)
class LexPair:
    alpha: EpSeq
    beta: EpSeq

    def __post_init__(self) -> None:
        if self.alpha.at(0) != "1":
            raise ValueError(f"alpha must start with 1: {self.alpha}")
        if self.beta.at(0) != "0":
            raise ValueError(f"beta must start with 0: {self.beta}")

    def __str__(self) -> str:
        return f"({self.alpha}, {self.beta})"


class PairClass:
    """How a pair sits relative to the canonical lexicographic window."""


@dataclass(frozen=True, slots=True)
class InLW(PairClass):
    pass


@dataclass(frozen=True, slots=True)
class NotParryPair(PairClass):
    pass


@dataclass(frozen=True, slots=True)
class TwoSidedExtremal(PairClass):
    M: int
    N: int


@dataclass(frozen=True, slots=True)
class RightExtremal(PairClass):
    M: int


@dataclass(frozen=True, slots=True)
class LeftExtremal(PairClass):
    N: int


class DegenerateExtremalError(ValueError):
    """Truncation at index 1 would empty a bound; no repair is defined."""


def _shift_span(x: EpSeq) -> int:
    # shifts repeat beyond preperiod + period steps
    return len(x.preperiod) + len(x.period)


def is_parry(x: EpSeq) -> bool:
    if x.at(0) != "1":
        return False
    return all(
        compare(shift(x, n), x) != Ordering.GREATER for n in range(1, _shift_span(x) + 1)
    )


def is_coparry(x: EpSeq) -> bool:
    return x.at(0) == "0" and all(
        compare(shift(x, n), x) != Ordering.LESS for n in range(1, _shift_span(x) + 1)
    )


def varsigma(x: EpSeq) -> EpSeq:
    if x.at(0) != "1":
        raise ValueError(f"expected a sequence starting with 1: {x}")
    for n in range(1, _shift_span(x) + 1):
        if compare(shift(x, n), x) == Ordering.GREATER:
            return EpSeq("", x.prefix(n - 1) + "0")
    return x


def varsigma_prime(x: EpSeq) -> EpSeq:
    if x.at(0) != "0":
        raise ValueError(f"expected a sequence starting with 0: {x}")
    return mirror(varsigma(mirror(x)))


def classify(p: LexPair) -> PairClass:
    if not is_parry(p.alpha) or not is_coparry(p.beta):
        return NotParryPair()
    M = next(
        (
            m
            for m in range(1, _shift_span(p.beta) + 1)
            if compare(shift(p.beta, m), p.alpha) == Ordering.GREATER
        ),
        None,
    )
    N = next(
        (
            n
            for n in range(1, _shift_span(p.alpha) + 1)
            if compare(shift(p.alpha, n), p.beta) == Ordering.LESS
        ),
        None,
    )
    if M is None and N is None:
        return InLW()
    if M is not None and N is not None:
        return TwoSidedExtremal(M, N)
    if M is not None:
        return RightExtremal(M)
    return LeftExtremal(N)


def _truncate(x: EpSeq, end: int, closer: str) -> EpSeq:
    if end == 1:
        raise DegenerateExtremalError(
            f"cannot truncate {x} at index 1: the repaired bound would be constant"
        )
    return EpSeq("", x.prefix(end - 1) + closer)


def iota(p: LexPair, cls: TwoSidedExtremal) -> LexPair:
    return LexPair(_truncate(p.alpha, cls.N, "0"), _truncate(p.beta, cls.M, "1"))


def xi(p: LexPair, cls: RightExtremal) -> LexPair:
    return LexPair(p.alpha, _truncate(p.beta, cls.M, "1"))


def xi_prime(p: LexPair, cls: LeftExtremal) -> LexPair:
    return LexPair(_truncate(p.alpha, cls.N, "0"), p.beta)


def normalize(p: LexPair) -> LexPair:
    # a single repair pass usually lands inside the window, but the repaired
    # bounds can themselves be extremal again (each pass shortens the windows,
    # so the chain is finite); re-classify and dispatch until stable
    for _ in range(8):
        cls = classify(p)
        if isinstance(cls, InLW):
            return p
        if isinstance(cls, NotParryPair):
            p = LexPair(varsigma(p.alpha), varsigma_prime(p.beta))
        elif isinstance(cls, TwoSidedExtremal):
            p = iota(p, cls)
        elif isinstance(cls, RightExtremal):
            p = xi(p, cls)
        else:
            p = xi_prime(p, cls)
    raise RuntimeError(f"normalization did not stabilize for {p}")


def staircase_sample(xs: list[Fraction]) -> list[tuple[Fraction, Fraction]]:
    out = []
    for x in xs:
        x = Fraction(x)
        if not HALF <= x <= 1:
            raise ValueError(f"sample point outside [1/2, 1]: {x}")
        out.append((x, from_binary(varsigma(to_binary(x, Side.UPPER)))))
    return out


def _truncation_stream(x: EpSeq, target: str, closer: str, cap: int):
    if x.purely_periodic:
        while True:
            yield x
    stats = run_stats(x)
    first = stats.max_one_run if target == "1" else stats.max_zero_run
    if first == UNBOUNDED:
        return
    for i in range(first + 1, cap + 1):
        if x.at(i - 1) == target:
            yield EpSeq("", x.prefix(i - 1) + closer)


def periodic_approximations(p: LexPair, k: int) -> list[LexPair]:
    """Inner purely periodic pairs marching up to p from inside.

    Truncation positions past the longest constant run keep each repaired
    bound on the correct side; candidates whose cross conditions fail are
    skipped.  Returns at most k pairs; fewer when a bound with a constant
    tail runs out of admissible truncations.
    """
    if not isinstance(classify(p), InLW):
        raise ValueError(f"pair must classify InLW: {p}")
    cap = max(
        (len(x.preperiod) + len(x.period)) * (k + 4) + 16 for x in (p.alpha, p.beta)
    )
    out = []
    for alpha_m, beta_m in zip(
        _truncation_stream(p.alpha, "1", "0", cap),
        _truncation_stream(p.beta, "0", "1", cap),
    ):
        cand = LexPair(alpha_m, beta_m)
        if isinstance(classify(cand), InLW):
            out.append(cand)
            if len(out) == k:
                break
    return out
