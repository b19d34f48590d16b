"""Finite binary words and eventually periodic binary sequences.

A word is a plain ``str`` over the alphabet ``{'0', '1'}``. An infinite
sequence is an :class:`EpSeq`: a preperiod word followed by an endlessly
repeated period word. Every sequence handled by this package is eventually
periodic, which keeps lexicographic comparison, shifting and orbit
enumeration exactly decidable.

Sequences serialize as ``"pre|per"`` literals: ``"|110"`` is ``(110)^inf``
and ``"10|01"`` is ``10(01)^inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

__all__ = [
    "Ordering",
    "EpSeq",
    "ConstantWordError",
    "check_word",
    "parse_seq",
    "compare",
    "shift",
    "distinct_shifts",
    "mirror",
    "rotations",
    "cyclic_extremes",
    "zero_max",
    "one_min",
    "factor_split",
    "balance_stats",
    "run_stats",
    "seq",
    "pow_word",
    "UNBOUNDED",
]

_ALPHABET = frozenset("01")

#: Marker for run lengths that grow without bound (all-zero / all-one tail).
UNBOUNDED = math.inf


class Ordering(Enum):
    """Outcome of a lexicographic comparison."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


class ConstantWordError(ValueError):
    """Raised when a rotation with a required first symbol does not exist."""


def check_word(w: str, *, nonempty: bool = False) -> str:
    if not _ALPHABET.issuperset(w):
        raise ValueError(f"word must be over 01, got {w!r}")
    if nonempty and not w:
        raise ValueError("word must be nonempty")
    return w


def _primitive_root(w: str) -> str:
    for d in range(1, len(w) + 1):
        if len(w) % d == 0 and w[:d] * (len(w) // d) == w:
            return w[:d]
    return w


@dataclass(frozen=True, slots=True)
class EpSeq:
    """Eventually periodic binary sequence ``preperiod (period)^inf``.

    Instances are canonical on construction: the period is primitive and
    the preperiod is as short as possible (its last symbol differs from
    the period's last symbol, else the boundary slides left). Structural
    equality and hashing therefore coincide with sequence equality.
    """

    preperiod: str
    period: str

    def __post_init__(self) -> None:
        check_word(self.preperiod)
        check_word(self.period, nonempty=True)
        pre, per = self.preperiod, _primitive_root(self.period)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @property
    def canonical(self) -> bool:
        return True

    @property
    def purely_periodic(self) -> bool:
        return not self.preperiod

    def at(self, i: int) -> str:
        """Symbol at 0-based index i."""
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def prefix(self, n: int) -> str:
        pre, per = self.preperiod, self.period
        if n <= len(pre):
            return pre[:n]
        return (pre + per * ((n - len(pre)) // len(per) + 1))[:n]

    def __str__(self) -> str:
        return f"{self.preperiod}|{self.period}"


def parse_seq(literal: str) -> EpSeq:
    """Parse a ``"pre|per"`` literal."""
    head, sep, tail = literal.partition("|")
    if not sep:
        raise ValueError(f"sequence literal needs a '|': {literal!r}")
    return EpSeq(check_word(head), check_word(tail, nonempty=True))


def seq(literal: str) -> EpSeq:
    """Shorthand for :func:`parse_seq`."""
    return parse_seq(literal)


def pow_word(w: str) -> EpSeq:
    """The purely periodic sequence ``w^inf``."""
    return EpSeq("", check_word(w, nonempty=True))


def compare(x: EpSeq, y: EpSeq) -> Ordering:
    """Exact lexicographic comparison.

    Any disagreement shows up within max(preperiod lengths) plus
    lcm(period lengths) symbols; equality past that bound is equality of
    canonical forms.
    """
    if x == y:
        return Ordering.EQUAL
    bound = max(len(x.preperiod), len(y.preperiod)) + math.lcm(
        len(x.period), len(y.period)
    )
    a, b = x.prefix(bound), y.prefix(bound)
    return Ordering.LESS if a < b else Ordering.GREATER


def shift(x: EpSeq, n: int) -> EpSeq:
    """The n-fold one-sided shift: drop the first n symbols."""
    if n < 0:
        raise ValueError("shift count must be nonnegative")
    pre, per = x.preperiod, x.period
    if n <= len(pre):
        return EpSeq(pre[n:], per)
    k = (n - len(pre)) % len(per)
    return EpSeq("", per[k:] + per[:k])


def distinct_shifts(x: EpSeq) -> list[EpSeq]:
    """All distinct values of shift(x, n) for n >= 1.

    There are at most len(preperiod) + len(period) of them.
    """
    out: list[EpSeq] = []
    seen: set[EpSeq] = set()
    for n in range(1, len(x.preperiod) + len(x.period) + 1):
        s = shift(x, n)
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


_FLIP = str.maketrans("01", "10")


def mirror(x: EpSeq | str) -> EpSeq | str:
    """Symbolwise complement; an involution on both words and sequences."""
    if isinstance(x, EpSeq):
        return EpSeq(x.preperiod.translate(_FLIP), x.period.translate(_FLIP))
    return check_word(x).translate(_FLIP)


def rotations(w: str) -> list[str]:
    check_word(w, nonempty=True)
    return [w[i:] + w[:i] for i in range(len(w))]


@dataclass(frozen=True, slots=True)
class CyclicExtremes:
    max: str
    min: str
    zero_max: str | None
    one_min: str | None


def cyclic_extremes(w: str) -> CyclicExtremes:
    """Extremal rotations of w.

    zero_max is the largest rotation starting with 0 (None for 1^n),
    one_min the smallest starting with 1 (None for 0^n). For non-constant
    w the overall max ends in 0 and the overall min ends in 1.
    """
    rots = rotations(w)
    zeros = [r for r in rots if r[0] == "0"]
    ones = [r for r in rots if r[0] == "1"]
    return CyclicExtremes(
        max=max(rots),
        min=min(rots),
        zero_max=max(zeros) if zeros else None,
        one_min=min(ones) if ones else None,
    )


def zero_max(w: str) -> str:
    zm = cyclic_extremes(w).zero_max
    if zm is None:
        raise ConstantWordError(f"no rotation of {w!r} starts with 0")
    return zm


def one_min(w: str) -> str:
    om = cyclic_extremes(w).one_min
    if om is None:
        raise ConstantWordError(f"no rotation of {w!r} starts with 1")
    return om


def factor_split(w: str) -> tuple[str, str]:
    """Split zero_max(w) = uv so that vu = one_min(w).

    u starts with 0 and v with 1; the split point is the rotation index
    aligning the two extremes.
    """
    zm, om = zero_max(w), one_min(w)
    for n in range(1, len(w)):
        if zm[n:] + zm[:n] == om:
            return zm[:n], zm[n:]
    raise ConstantWordError(f"{w!r} has no extremal split")  # unreachable for non-constant w


@dataclass(frozen=True, slots=True)
class BalanceStats:
    ones: int
    one_ratio: Fraction
    balanced: bool
    cyclically_balanced: bool


def _is_balanced(w: str) -> bool:
    n = len(w)
    counts = [0] * (n + 1)
    for i in range(n):
        counts[i + 1] = counts[i] + (w[i] == "1")
    for length in range(1, n + 1):
        lo = hi = counts[length] - counts[0]
        for i in range(1, n - length + 1):
            c = counts[i + length] - counts[i]
            lo, hi = min(lo, c), max(hi, c)
        if hi - lo > 1:
            return False
    return True


def balance_stats(w: str) -> BalanceStats:
    """Ones count, ones ratio, balance of w, and balance of w squared."""
    check_word(w, nonempty=True)
    ones = w.count("1")
    return BalanceStats(
        ones=ones,
        one_ratio=Fraction(ones, len(w)),
        balanced=_is_balanced(w),
        cyclically_balanced=_is_balanced(w + w),
    )


@dataclass(frozen=True, slots=True)
class RunStats:
    max_zero_run: int | float
    max_one_run: int | float


def _max_run(s: str, symbol: str) -> int:
    best = cur = 0
    for c in s:
        cur = cur + 1 if c == symbol else 0
        if cur > best:
            best = cur
    return best


def run_stats(x: EpSeq) -> RunStats:
    """Maximal 0-run and 1-run lengths; UNBOUNDED on a constant tail.

    A finite run lies inside preperiod + 2 periods: the period contains
    the opposite symbol, so no run crosses a full period copy.
    """
    per = x.period
    scan = x.preperiod + per * 2
    zero = UNBOUNDED if set(per) == {"0"} else _max_run(scan, "0")
    one = UNBOUNDED if set(per) == {"1"} else _max_run(scan, "1")
    return RunStats(max_zero_run=zero, max_one_run=one)
