"""Uniform bridge lengths, their stabilization, and staged window families.

A transitive window subshift has the specification property when one gap
length bridges every ordered pair of admissible words.  The finite probe
is m_n: the least k such that every ordered pair of length-n words is
joined by a gap of exactly k symbols.  On the automaton this needs only
the set of states reachable by length-n words and the distinct sets of
states that can start each length-n word, so m_n is computed without
enumerating the language.  Some windows, the single periodic orbits among
them, admit no uniform exact gap at all: their reachability layers cycle
without ever covering every start set, and that cycle is detected and
reported rather than searched past.  A cumulative variant asks for gaps
of length at most k instead; it always stabilizes on transitive pairs.

The limit of m_n over growing n is the specification number.  It is
approximated by sampling m_n until the value repeats over a configurable
window of consecutive n; the sampled values are kept in the report
because the plateau heuristic can be fooled (a staged pair below jumps
from 9 to 24 at n = 11, past any five-wide window).

Two stage constructions grow a window pair from block words of essential
pairs.  Gluing one pair's blocks with a strictly smaller second pair
keeps the bridge words of every later stage identical, which forces
specification in the limit; inserting growing block powers instead makes
the bridge words longer at every stage and the specification numbers
climb, which rules specification out.  The verdict over a staged family
checks exactly these two signals and reports the stage count it saw.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lexshift import _accel
from lexshift.lexworld import LexPair
from lexshift.renorm import (
    BridgePair,
    Essential,
    bridge_words,
    detect_renorm,
    _recurrent_core_connected,
)
from lexshift.subshift import build_automaton, is_sft
from lexshift.words import Ordering, check_word, compare, pow_word, shift

__all__ = [
    "SpecVerdict",
    "HasSpecification",
    "NoSpecification",
    "UnknownSpecification",
    "SpecReport",
    "NotTransitiveError",
    "NoUniformBridgeError",
    "NonStabilizedError",
    "PreconditionViolation",
    "m_n",
    "spec_number",
    "spec_report",
    "build_spec_family",
    "build_nospec_family",
    "spec_verdict",
]


class SpecVerdict:
    """Outcome of a specification-property analysis."""


@dataclass(frozen=True, slots=True)
class HasSpecification(SpecVerdict):
    stages: int


@dataclass(frozen=True, slots=True)
class NoSpecification(SpecVerdict):
    stages: int


@dataclass(frozen=True, slots=True)
class UnknownSpecification(SpecVerdict):
    stages: int


@dataclass(frozen=True)
class SpecReport:
    """Per-pair record of sampled gap lengths and the drawn conclusion.

    m_values keeps every sampled n, not just the plateau, so a reader can
    see how the stabilized value was reached.  spec_number is None when
    sampling hit its budget or the pair admits no uniform exact gap.
    evidence rows are (stage, combined bridge-word length, spec number).
    """

    m_values: dict[int, int]
    spec_number: int | None
    verdict: SpecVerdict
    evidence: tuple[tuple[int, int, int | None], ...]


class NotTransitiveError(ValueError):
    """Uniform gaps are only defined over a strongly connected automaton."""


class NoUniformBridgeError(ValueError):
    """No single exact gap length serves every ordered word pair.

    `capped` distinguishes an exhausted search budget from the cycle
    proof that no gap length can ever work.
    """

    def __init__(self, message: str, kmax: int, capped: bool = False):
        super().__init__(message)
        self.kmax = kmax
        self.capped = capped


class NonStabilizedError(ValueError):
    """The sampled gap lengths never went constant within the budget."""

    def __init__(self, message: str, nmax: int):
        super().__init__(message)
        self.nmax = nmax


class PreconditionViolation(ValueError):
    """A stage construction was fed words breaking its ordering chain."""


def _bool_rows(masks: list[int], width: int) -> np.ndarray:
    rows = np.zeros((len(masks), width), dtype=np.bool_)
    for r, mask in enumerate(masks):
        while mask:
            low = mask & -mask
            rows[r, low.bit_length() - 1] = True
            mask ^= low
    return rows


class _BridgeEngine:
    """Shared automaton state for m_n queries at increasing n.

    Tracks, per word length, the set of states length-n words end in and
    the deduplicated family of state sets each length-n word can start
    from.  Both advance by one symbol at a time, so a stabilization sweep
    pays for each length once.
    """

    def __init__(self, p: LexPair):
        aut = build_automaton(p)
        if not _recurrent_core_connected(aut):
            raise NotTransitiveError(f"automaton of {p} is not strongly connected")
        self.order = {st: i for i, st in enumerate(sorted(aut.alive))}
        m = len(self.order)
        self.fwd = [0] * m
        # det[s][i] is the successor index of state i reading symbol s
        self.det: dict[str, list[int | None]] = {"0": [None] * m, "1": [None] * m}
        for (st, s), t in aut.transitions.items():
            if st in self.order and t in self.order:
                i, j = self.order[st], self.order[t]
                self.fwd[i] |= 1 << j
                self.det[s][i] = j
        self.rdet = tuple(
            np.array([-1 if j is None else j for j in self.det[s]], dtype=np.int64)
            for s in ("0", "1")
        )
        self.n = 0
        self.ends = 1 << self.order[aut.start]
        self.masks = {(1 << m) - 1}

    def _fstep(self, mask: int) -> int:
        out = 0
        while mask:
            low = mask & -mask
            out |= self.fwd[low.bit_length() - 1]
            mask ^= low
        return out

    def advance_to(self, n: int) -> None:
        while self.n < n:
            nxt = set()
            for mask in self.masks:
                for det in self.det.values():
                    out = 0
                    for i, j in enumerate(det):
                        if j is not None and (mask >> j) & 1:
                            out |= 1 << i
                    if out:
                        nxt.add(out)
            self.masks = nxt
            self.ends = self._fstep(self.ends)
            self.n += 1

    def m_at(self, n: int, at_most: bool, kmax: int | None) -> int:
        self.advance_to(n)
        # only minimal start sets constrain: a gap reaching a subset set
        # reaches every superset set
        minimal: list[int] = []
        for mask in sorted(self.masks, key=lambda x: x.bit_count()):
            if not any(mask & kept == kept for kept in minimal):
                minimal.append(mask)
        width = len(self.order)
        ends = _bool_rows([self.ends], width)[0]
        reach = _bool_rows(minimal, width)
        cum = reach.copy()
        seen: set[bytes] = set()
        k = 0
        while True:
            target = cum if at_most else reach
            if not (ends & ~target).any():
                return k
            state = reach.tobytes()
            if state in seen:
                raise NoUniformBridgeError(
                    f"gap layers cycle at k={k} without serving every word "
                    f"pair at length n={n}",
                    kmax=k,
                )
            seen.add(state)
            if kmax is not None and k >= kmax:
                raise NoUniformBridgeError(
                    f"no uniform gap length up to kmax={kmax} at n={n}",
                    kmax=kmax,
                    capped=True,
                )
            reach = _accel.reverse_step(reach, self.rdet[0], self.rdet[1])
            cum |= reach
            k += 1


def m_n(p: LexPair, n: int, *, at_most: bool = False, kmax: int | None = None) -> int:
    """Least k so every ordered pair of length-n words has a length-k gap.

    Exact-length gaps by default; at_most switches to gaps of length up
    to k, which also serves the periodic-orbit windows where exact gaps
    are parity-blocked.  kmax caps the search; without it the search
    stops when the reachability layers revisit a configuration, which is
    the exhaustive no-answer proof.
    """
    if n < 1:
        raise ValueError(f"word length must be positive, got {n}")
    return _BridgeEngine(p).m_at(n, at_most, kmax)


def spec_number(
    p: LexPair,
    *,
    window: int = 5,
    nmax: int = 32,
    at_most: bool = False,
    kmax: int | None = None,
) -> int:
    """Stabilized m_n: the last value repeated over `window` consecutive n.

    The window is a plateau heuristic standing in for the n limit; pairs
    built from long blocks hold a false plateau until n passes the block
    length, so size the window (or check m_values of spec_report) when
    the pair's words are long.
    """
    value, _ = _sample_spec_number(p, window, nmax, at_most, kmax)
    if value is None:
        raise NonStabilizedError(
            f"m_n not constant over any {window} consecutive n up to {nmax}",
            nmax=nmax,
        )
    return value


def _sample_spec_number(
    p: LexPair, window: int, nmax: int, at_most: bool, kmax: int | None
) -> tuple[int | None, dict[int, int]]:
    if window < 2:
        raise ValueError(f"stabilization window must be at least 2, got {window}")
    engine = _BridgeEngine(p)
    values: dict[int, int] = {}
    run = 0
    last: int | None = None
    for n in range(1, nmax + 1):
        values[n] = engine.m_at(n, at_most, kmax)
        if values[n] == last:
            run += 1
        else:
            last, run = values[n], 1
        if run >= window:
            return last, values
    return None, values


def spec_report(
    p: LexPair,
    *,
    stage: int = 1,
    window: int = 5,
    nmax: int = 32,
    at_most: bool = False,
    kmax: int | None = None,
) -> SpecReport:
    """Analyze one periodic transitive pair and tag it as stage `stage`.

    The verdict covers this single pair: a transitive finite-type window
    has the specification property outright, anything else stays unknown
    at one stage's evidence.  A definite no-gap proof is reported as a
    missing number; an exhausted kmax budget is re-raised, because it
    decides nothing.
    """
    try:
        number, values = _sample_spec_number(p, window, nmax, at_most, kmax)
    except NoUniformBridgeError as err:
        if err.capped:
            raise
        number, values = None, {}
    verdict: SpecVerdict = (
        HasSpecification(stages=1) if is_sft(p) else UnknownSpecification(stages=1)
    )
    detected = detect_renorm(p)
    evidence: tuple[tuple[int, int, int | None], ...] = ()
    if isinstance(detected, Essential) and detected.assoc is not None:
        b = bridge_words(p, detected)
        evidence = ((stage, len(b.p1) + len(b.p2), number),)
    return SpecReport(
        m_values=values, spec_number=number, verdict=verdict, evidence=evidence
    )


def _power_pair(omega: str, nu: str) -> LexPair:
    return LexPair(shift(pow_word(omega), 1), shift(pow_word(nu), 1))


def _power_less(a: str, b: str, what: str, stage: int) -> None:
    if compare(pow_word(a), pow_word(b)) is not Ordering.LESS:
        raise PreconditionViolation(
            f"stage {stage} needs ({a})^inf < ({b})^inf ({what})"
        )


def _checked_block_pair(words: tuple[str, str], label: str) -> tuple[str, str]:
    omega, nu = words
    check_word(omega, nonempty=True)
    check_word(nu, nonempty=True)
    if omega[0] != "0" or nu[0] != "1":
        raise PreconditionViolation(
            f"{label} block words must start with 0 and 1: ({omega}, {nu})"
        )
    return omega, nu


def _essential_stage(omega: str, nu: str, stage: int) -> tuple[LexPair, BridgePair]:
    pair = _power_pair(omega, nu)
    verdict = detect_renorm(pair)
    if not isinstance(verdict, Essential):
        raise PreconditionViolation(
            f"stage {stage} pair {pair} is not essential; the inputs are not "
            f"block words of essential pairs"
        )
    assert verdict.assoc == (omega, nu)
    return pair, bridge_words(pair, verdict)


def build_spec_family(
    seed: tuple[str, str], primes: list[tuple[str, str]], k: int
) -> list[LexPair]:
    """Stages that keep one pair of bridge words, forcing specification.

    Each stage glues the current block words with a strictly smaller
    prime pair: next 0-block = current 0-block + prime 1-block, next
    1-block = current 1-block + prime 0-block.  The primes must sit
    strictly inside the current pair and shrink monotonically along the
    list.  Every built stage is verified essential and the bridge words
    of all built stages are verified identical.
    """
    if k < 1:
        raise ValueError(f"need at least one stage, got k={k}")
    if len(primes) < k:
        raise ValueError(f"need {k} prime pairs, got {len(primes)}")
    omega, nu = _checked_block_pair(seed, "seed")
    _essential_stage(omega, nu, 1)
    prev_prime: tuple[str, str] | None = None
    stages: list[LexPair] = []
    bridges = []
    for i in range(k):
        po, pn = _checked_block_pair(primes[i], f"primes[{i}]")
        stage = i + 1
        _power_less(po, omega, "prime 0-block under current 0-block", stage)
        _power_less(nu, pn, "current 1-block under prime 1-block", stage)
        if prev_prime is not None:
            _power_less(po, prev_prime[0], "prime 0-blocks must shrink", stage)
            _power_less(prev_prime[1], pn, "prime 1-blocks must grow", stage)
        omega, nu = omega + pn, nu + po
        pair, bridge = _essential_stage(omega, nu, stage + 1)
        stages.append(pair)
        bridges.append(bridge)
        prev_prime = (po, pn)
    assert all(b == bridges[0] for b in bridges)
    return stages


def build_nospec_family(
    seed: tuple[str, str],
    primes: list[tuple[str, str]],
    exponents: list[tuple[int, int]],
    k: int,
) -> list[LexPair]:
    """Stages with growing block powers, breaking specification.

    Each stage inserts at least squared powers of the opposite block
    before the prime: next 0-block = current 0-block + current 1-block^j
    + prime 1-block, and symmetrically with exponent l.  Built stages are
    verified essential and their combined bridge-word lengths verified
    strictly increasing, seed included.
    """
    if k < 1:
        raise ValueError(f"need at least one stage, got k={k}")
    if len(primes) < k or len(exponents) < k:
        raise ValueError(
            f"need {k} prime and exponent pairs, got {len(primes)} and {len(exponents)}"
        )
    omega, nu = _checked_block_pair(seed, "seed")
    _, seed_bridge = _essential_stage(omega, nu, 1)
    lengths = [len(seed_bridge.p1) + len(seed_bridge.p2)]
    prev_prime: tuple[str, str] | None = None
    stages: list[LexPair] = []
    for i in range(k):
        po, pn = _checked_block_pair(primes[i], f"primes[{i}]")
        j, l = exponents[i]
        stage = i + 1
        if j < 2 or l < 2:
            raise PreconditionViolation(
                f"stage {stage} exponents must both be at least 2, got ({j}, {l})"
            )
        _power_less(po, omega, "prime 0-block under current 0-block", stage)
        _power_less(nu, pn, "current 1-block under prime 1-block", stage)
        if prev_prime is not None:
            _power_less(po, prev_prime[0], "prime 0-blocks must shrink", stage)
            _power_less(prev_prime[1], pn, "prime 1-blocks must grow", stage)
        omega, nu = omega + nu * j + pn, nu + omega * l + po
        pair, bridge = _essential_stage(omega, nu, stage + 1)
        stages.append(pair)
        lengths.append(len(bridge.p1) + len(bridge.p2))
        prev_prime = (po, pn)
    assert all(a < b for a, b in zip(lengths, lengths[1:]))
    return stages


def spec_verdict(family: list[LexPair], reports: list[SpecReport]) -> SpecVerdict:
    """Conclusion over a staged family from its per-stage reports.

    Identical bridge words from some stage onward give specification; a
    strict climb in bridge-word length where each length is overtaken by
    the next stage's specification number rules it out; anything else,
    including missing specification numbers, stays unknown.
    """
    if len(family) != len(reports):
        raise ValueError(
            f"{len(family)} stages but {len(reports)} reports; one report per stage"
        )
    stages = len(family)
    if stages == 0:
        return UnknownSpecification(stages=0)
    merged = sorted(
        zip(family, reports),
        key=lambda fr: fr[1].evidence[0][0] if fr[1].evidence else 0,
    )
    pairs = []
    for pair, _report in merged:
        detected = detect_renorm(pair)
        if not isinstance(detected, Essential) or detected.assoc is None:
            return UnknownSpecification(stages=stages)
        b = bridge_words(pair, detected)
        pairs.append(b.p1 + b.p2)
    if stages == 1:
        if is_sft(family[0]):
            return HasSpecification(stages=1)
        return UnknownSpecification(stages=1)
    if pairs[-1] == pairs[-2]:
        # stabilized tail: constant from the last change onward
        return HasSpecification(stages=stages)
    lengths = [len(w) for w in pairs]
    numbers = [report.spec_number for _pair, report in merged]
    growing = all(a < b for a, b in zip(lengths, lengths[1:]))
    overtaken = all(
        s is not None and a <= s for a, s in zip(lengths, numbers[1:])
    )
    if growing and overtaken:
        return NoSpecification(stages=stages)
    return UnknownSpecification(stages=stages)
