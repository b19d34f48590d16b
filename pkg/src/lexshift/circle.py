"""Exact arithmetic for the doubling map on the circle with a hole.

Everything here is a pure function over `fractions.Fraction`.  The two
directions of the coding are `from_binary` (value of an eventually periodic
expansion) and `to_binary` (long division with remainder-cycle detection).
Dyadic rationals have two expansions; `Side` picks one.

A hole is an open arc (a, b).  The survivor set of the doubling map with
that hole is described symbolically by the pair of expansions of 2a and
2b - 1, which `hole_to_pair` computes.  `s_membership`, `stability_radius`
and `bad_periods` are the orbit-level diagnostics used by the CLI reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from lexshift import _accel
from lexshift.words import EpSeq

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)
THREE_QUARTERS = Fraction(3, 4)


class Side(Enum):
    UPPER = "upper"
    LOWER = "lower"


class HoleClass(Enum):
    TRIVIAL_EXCEPTIONAL = "trivial-exceptional"
    CENTRED_CANDIDATE = "centred-candidate"
    OUTSIDE_STUDIED_RECTANGLE = "outside-studied-rectangle"


class InvalidIntervalError(ValueError):
    """The endpoints do not bound an open arc inside the unit circle."""


class NotCentredError(ValueError):
    """The operation needs a hole classified as CENTRED_CANDIDATE."""


class NotInSError(ValueError):
    """The operation needs both hole endpoints to land back inside the hole."""


def from_binary(s: EpSeq) -> Fraction:
    pre, per = s.preperiod, s.period
    head = int(pre, 2) if pre else 0
    tail = Fraction(int(per, 2), 2 ** len(per) - 1)
    return (head + tail) / 2 ** len(pre)


def to_binary(x: Fraction, prefer: Side = Side.UPPER) -> EpSeq:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"not a point of the unit interval: {x}")
    if x == 1:
        return EpSeq("", "1")
    digits: list[str] = []
    seen: dict[Fraction, int] = {}
    r = x
    while r not in seen:
        seen[r] = len(digits)
        r *= 2
        if r >= 1:
            digits.append("1")
            r -= 1
        else:
            digits.append("0")
    start = seen[r]
    s = EpSeq("".join(digits[:start]), "".join(digits[start:]))
    if prefer is Side.LOWER and s.period == "0" and s.preperiod:
        # dyadic: trade the terminating expansion for the one ending in 1s
        s = EpSeq(s.preperiod[:-1] + "0", "1")
    return s


def double(x: Fraction) -> Fraction:
    return 2 * x % 1


@dataclass(frozen=True, slots=True)
class Hole:
    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        a, b = Fraction(self.a), Fraction(self.b)
        if not (0 <= a < b <= 1):
            raise InvalidIntervalError(f"not an open arc: ({self.a}, {self.b})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __contains__(self, x: Fraction) -> bool:
        return self.a < x < self.b

    def __str__(self) -> str:
        return f"({self.a}, {self.b})"


def validate_hole(h: Hole) -> HoleClass:
    if (h.a < QUARTER and h.b > HALF) or (h.a < HALF and h.b > THREE_QUARTERS):
        return HoleClass.TRIVIAL_EXCEPTIONAL
    if QUARTER < h.a < HALF < h.b < THREE_QUARTERS:
        return HoleClass.CENTRED_CANDIDATE
    return HoleClass.OUTSIDE_STUDIED_RECTANGLE


def mirror_hole(h: Hole) -> Hole:
    return Hole(1 - h.b, 1 - h.a)


def hole_to_pair(h: Hole):
    from lexshift.lexworld import LexPair  # circle is imported by lexworld

    cls = validate_hole(h)
    if cls is not HoleClass.CENTRED_CANDIDATE:
        raise NotCentredError(f"hole {h} classifies as {cls.value}")
    return LexPair(to_binary(2 * h.a, Side.UPPER), to_binary(2 * h.b - 1, Side.LOWER))


@dataclass(frozen=True, slots=True)
class Orbit:
    preorbit: tuple[Fraction, ...]
    cycle: tuple[Fraction, ...]

    @property
    def points(self) -> tuple[Fraction, ...]:
        return self.preorbit + self.cycle


def orbit(x: Fraction) -> Orbit:
    x = Fraction(x) % 1
    pts: list[Fraction] = []
    index: dict[Fraction, int] = {}
    while x not in index:
        index[x] = len(pts)
        pts.append(x)
        x = double(x)
    k = index[x]
    return Orbit(tuple(pts[:k]), tuple(pts[k:]))


@dataclass(frozen=True, slots=True)
class SMembership:
    n: int | None
    m: int | None

    @property
    def in_s(self) -> bool:
        return self.n is not None and self.m is not None


def _landing_index(h: Hole, x: Fraction) -> int | None:
    span = len(orbit(x).points)
    y = x
    for j in range(1, span + 1):
        y = double(y)
        if y in h:
            return j
    return None


def s_membership(h: Hole) -> SMembership:
    return SMembership(_landing_index(h, h.a), _landing_index(h, h.b))


def _circle_gap(x: Fraction, y: Fraction) -> Fraction:
    d = abs(x - y) % 1
    return min(d, 1 - d)


def stability_radius(h: Hole) -> Fraction:
    s = s_membership(h)
    if not s.in_s:
        raise NotInSError(f"an endpoint orbit of {h} never returns to the hole")
    eps: Fraction | None = None
    for start, landing in ((h.a, s.n), (h.b, s.m)):
        y = start
        for j in range(landing + 1):
            if j:
                y = double(y)
            # a perturbation of size d grows to 2^j * d after j steps, so
            # the gap at index j only shields perturbations below gap / 2^(j+1)
            for endpoint in (h.a, h.b):
                gap = _circle_gap(y, endpoint)
                if gap == 0:
                    continue
                bound = gap / 2 ** (j + 1)
                if eps is None or bound < eps:
                    eps = bound
    assert eps is not None
    return eps


def _every_full_period_orbit_meets(h: Hole, n: int) -> bool:
    num_a, den_a = h.a.numerator, h.a.denominator
    num_b, den_b = h.b.numerator, h.b.denominator
    if _accel.fits_int64(num_a, den_a, num_b, den_b, n):
        return bool(_accel.full_period_scan(num_a, den_a, num_b, den_b, n))
    return _every_full_period_orbit_meets_exact(h, n)


def _every_full_period_orbit_meets_exact(h: Hole, n: int) -> bool:
    modulus = 2**n - 1
    num_a, den_a = h.a.numerator, h.a.denominator
    num_b, den_b = h.b.numerator, h.b.denominator
    lo, hi = num_a * modulus, num_b * modulus
    seen = bytearray(modulus)
    for k in range(1, modulus):
        if seen[k]:
            continue
        cycle = []
        j = k
        while not seen[j]:
            seen[j] = 1
            cycle.append(j)
            j = j * 2 % modulus
        if len(cycle) != n:
            continue
        if not any(lo < p * den_a and p * den_b < hi for p in cycle):
            return False
    return True


def bad_periods(h: Hole, nmax: int) -> tuple[int, ...]:
    return tuple(n for n in range(3, nmax + 1) if _every_full_period_orbit_meets(h, n))
