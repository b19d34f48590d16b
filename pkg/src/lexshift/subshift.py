"""The set of sequences squeezed between two lexicographic bounds.

Given a pair (alpha, beta), the object of study is the collection of
sequences whose every shift stays at or below alpha and at or above beta.
When both bounds are purely periodic this collection is a shift of finite
type and a small deterministic automaton describes it exactly: one counter
per side tracks the longest suffix of the read word that is a prefix of
the bound, and the counter wraps after a full period because the bound
equals its own shift there.

The automaton's counter rule leans on the dominance property of the
bounds (every shift of alpha sits below alpha, mirrored for beta), which
makes the longest match the binding constraint.  A second, slower engine
tracks every active suffix match at once and assumes nothing; it handles
eventually periodic and even unrepaired bounds, and doubles as an
independent check on the automaton.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2

from lexshift.lexworld import InLW, LexPair, classify, periodic_approximations
from lexshift.words import EpSeq, Ordering, compare, shift

_SYMBOLS = ("0", "1")
_POWER_TOL = 1e-10
_POWER_CAP = 100_000
_TRACKER_CAP = 500_000


class NotPeriodicError(ValueError):
    pass


class NotInLWError(ValueError):
    pass


@dataclass(frozen=True)
class EntropyResult:
    h: float
    lower: float
    upper: float
    dim_H: float


def _longest_match_after_drop(u: str, i: int, s: str) -> int:
    # the read word ends with u[:i] + s and s differs from u[i]; the new
    # longest match is the longest prefix of u that is a suffix of that
    t = u[:i] + s
    for k in range(i, 0, -1):
        if t.endswith(u[:k]):
            return k
    return 0


def _upper_step(u: str, i: int, s: str) -> int | None:
    if s == u[i]:
        return (i + 1) % len(u)
    if s > u[i]:
        return None
    return _longest_match_after_drop(u, i, s)


def _lower_step(v: str, j: int, s: str) -> int | None:
    if s == v[j]:
        return (j + 1) % len(v)
    if s < v[j]:
        return None
    return _longest_match_after_drop(v, j, s)


def _prune_to_alive(states, edges):
    # keep the greatest set of states whose every member still has a way
    # forward inside the set; everything else leads into a dead end
    alive = set(states)
    changed = True
    while changed:
        changed = False
        for st in list(alive):
            if not any(t in alive for t in edges(st)):
                alive.discard(st)
                changed = True
    return frozenset(alive)


class WindowAutomaton:
    """Deterministic acceptor for the factors of a periodic-bound pair.

    States are counter pairs (i, j); a missing transition means the symbol
    pushes some suffix of the read word outside the window.  Words are in
    the language exactly when their path exists and stays inside `alive`.
    """

    def __init__(self, alpha: EpSeq, beta: EpSeq):
        self.alpha = alpha
        self.beta = beta
        ua, vb = alpha.period, beta.period
        self.start = (0, 0)
        transitions: dict[tuple[tuple[int, int], str], tuple[int, int]] = {}
        seen = {self.start}
        frontier = [self.start]
        while frontier:
            state = frontier.pop()
            i, j = state
            for s in _SYMBOLS:
                ni = _upper_step(ua, i, s)
                nj = _lower_step(vb, j, s)
                if ni is None or nj is None:
                    continue
                transitions[state, s] = (ni, nj)
                if (ni, nj) not in seen:
                    seen.add((ni, nj))
                    frontier.append((ni, nj))
        self.states = tuple(sorted(seen))
        self.transitions = transitions

        def successors(st):
            for s in _SYMBOLS:
                t = transitions.get((st, s))
                if t is not None:
                    yield t

        self.alive = _prune_to_alive(self.states, successors)

    def accepts(self, word: str) -> bool:
        state = self.start
        if state not in self.alive:
            return False
        for s in word:
            state = self.transitions.get((state, s))
            if state is None or state not in self.alive:
                return False
        return True

    def count_words(self, n: int) -> int:
        counts = {self.start: 1} if self.start in self.alive else {}
        for _ in range(n):
            nxt: dict[tuple[int, int], int] = {}
            for state, c in counts.items():
                for s in _SYMBOLS:
                    t = self.transitions.get((state, s))
                    if t is not None and t in self.alive:
                        nxt[t] = nxt.get(t, 0) + c
            counts = nxt
        return sum(counts.values())

    def _alive_edges(self) -> tuple[list[tuple[int, int]], int]:
        order = {st: k for k, st in enumerate(sorted(self.alive))}
        edges = []
        for (state, _s), t in sorted(self.transitions.items()):
            if state in order and t in self.alive:
                edges.append((order[state], order[t]))
        return edges, len(order)


def _require_window(p: LexPair) -> None:
    if not isinstance(classify(p), InLW):
        raise NotInLWError(f"{p} does not bound a window from inside")


def _require_periodic(p: LexPair) -> None:
    if p.alpha.preperiod or p.beta.preperiod:
        raise NotPeriodicError(f"{p} has a preperiodic bound")


def build_automaton(p: LexPair) -> WindowAutomaton:
    _require_periodic(p)
    _require_window(p)
    return WindowAutomaton(p.alpha, p.beta)


def forbidden_factors(p: LexPair) -> frozenset[str]:
    """Shortest witnesses that a word has left the window.

    Raising a 0 of alpha's period to a 1 gives a word no factor may reach;
    lowering a 1 of beta's period likewise.  Candidates swallowed by a
    shorter member are dropped.
    """
    _require_periodic(p)
    _require_window(p)
    cand = {p.alpha.period[: k - 1] + "1" for k in range(1, len(p.alpha.period) + 1)
            if p.alpha.period[k - 1] == "0"}
    cand |= {p.beta.period[: k - 1] + "0" for k in range(1, len(p.beta.period) + 1)
             if p.beta.period[k - 1] == "1"}
    return frozenset(
        w for w in cand
        if not any(o != w and o in w for o in cand)
    )


class _BoundTracker:
    """Exact engine tracking every live suffix constraint of both bounds.

    A state is the pair of sets of current match lengths against alpha and
    beta.  Match lengths past the preperiod are folded modulo the period,
    which is sound because the bound's tail repeats there.  No dominance
    between matches is assumed, so unrepaired bounds are fine.
    """

    def __init__(self, p: LexPair):
        self._alpha = p.alpha
        self._beta = p.beta
        self._cuts = (len(p.alpha.preperiod), len(p.beta.preperiod))
        self._mods = (len(p.alpha.period), len(p.beta.period))
        self.start = (frozenset(), frozenset())
        self.transitions: dict = {}
        seen = {self.start}
        frontier = [self.start]
        while frontier:
            state = frontier.pop()
            for s in _SYMBOLS:
                t = self._step(state, s)
                if t is None:
                    continue
                self.transitions[state, s] = t
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)
                if len(self.transitions) > _TRACKER_CAP:
                    raise RuntimeError("suffix tracking blew up; bounds too wild")
        self.states = seen

        def successors(st):
            for s in _SYMBOLS:
                t = self.transitions.get((st, s))
                if t is not None:
                    yield t

        self.alive = _prune_to_alive(self.states, successors)

    def _canon(self, i: int, side: int) -> int:
        cut, mod = self._cuts[side], self._mods[side]
        return i if i < cut + mod else cut + (i - cut) % mod

    def _step(self, state, s: str):
        amatch, bmatch = state
        na = set()
        # every iteration also spawns the fresh one-symbol suffix, match 0
        for i in amatch | {0}:
            c = self._alpha.at(i)
            if s > c:
                return None
            if s == c:
                na.add(self._canon(i + 1, 0))
        nb = set()
        for j in bmatch | {0}:
            c = self._beta.at(j)
            if s < c:
                return None
            if s == c:
                nb.add(self._canon(j + 1, 1))
        return (frozenset(na), frozenset(nb))

    def words_of_length(self, n: int, pruned: bool = True) -> frozenset[str]:
        ok = self.alive if pruned else self.states
        if self.start not in ok:
            return frozenset()
        layer = {self.start: {""}}
        for _ in range(n):
            nxt: dict = {}
            for state, words in layer.items():
                for s in _SYMBOLS:
                    t = self.transitions.get((state, s))
                    if t is not None and t in ok:
                        nxt.setdefault(t, set()).update(w + s for w in words)
            layer = nxt
        out: set[str] = set()
        for words in layer.values():
            out |= words
        return frozenset(out)

    def count(self, n: int, pruned: bool = False) -> int:
        ok = self.alive if pruned else self.states
        counts = {self.start: 1} if self.start in ok else {}
        for _ in range(n):
            nxt: dict = {}
            for state, c in counts.items():
                for s in _SYMBOLS:
                    t = self.transitions.get((state, s))
                    if t is not None and t in ok:
                        nxt[t] = nxt.get(t, 0) + c
            counts = nxt
        return sum(counts.values())


def language(p: LexPair, n: int) -> frozenset[str]:
    """The exact set of length-n words appearing in the described set.

    Works for any bound pair, repaired or not; an empty set at every depth
    means no sequence satisfies the bounds at all.
    """
    return _BoundTracker(p).words_of_length(n)


def count_words(p: LexPair, n: int) -> int:
    """Number of length-n words; exact when both bounds are purely periodic.

    Otherwise counts words whose every suffix respects the bound prefixes,
    an upper bound on the factor count.
    """
    if not p.alpha.preperiod and not p.beta.preperiod and isinstance(classify(p), InLW):
        return build_automaton(p).count_words(n)
    return _BoundTracker(p).count(n)


def is_sft(p: LexPair) -> bool:
    return not p.alpha.preperiod and not p.beta.preperiod


def point_in(p: LexPair, x: EpSeq) -> bool:
    for k in range(len(x.preperiod) + len(x.period)):
        y = shift(x, k)
        if compare(y, p.alpha) is Ordering.GREATER:
            return False
        if compare(y, p.beta) is Ordering.LESS:
            return False
    return True


def same_language_upto(p1: LexPair, p2: LexPair, n: int) -> bool:
    t1, t2 = _BoundTracker(p1), _BoundTracker(p2)
    return all(t1.words_of_length(k) == t2.words_of_length(k) for k in range(1, n + 1))


def _strong_components(m: int, edges: list[tuple[int, int]]) -> list[list[int]]:
    # iterative Tarjan; the automata stay small but recursion depth is
    # proportional to state count, so avoid the call stack
    adj: list[list[int]] = [[] for _ in range(m)]
    for a, b in edges:
        adj[a].append(b)
    index = [-1] * m
    low = [0] * m
    onstack = [False] * m
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(m):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                onstack[v] = True
            advanced = False
            while pi < len(adj[v]):
                w = adj[v][pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if onstack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return comps


def _component_radius(
    nodes: list[int], edges: list[tuple[int, int]], tol: float = _POWER_TOL
) -> float:
    """Spectral radius of one strongly connected block, in exact style.

    A plain cycle has radius one, no iteration needed.  A branching block
    is iterated with integer vectors (shifted by the identity to kill
    periodicity), so the result depends only on the graph up to relabeling
    and mirrored automata report bit-identical entropy.
    """
    inside = {v: k for k, v in enumerate(sorted(nodes))}
    local = [(inside[a], inside[b]) for a, b in edges if a in inside and b in inside]
    outdeg = [0] * len(nodes)
    for a, _b in local:
        outdeg[a] += 1
    if all(d <= 1 for d in outdeg):
        return 1.0
    v = [1] * len(nodes)
    prev = None
    for _ in range(_POWER_CAP):
        w = list(v)
        for a, b in local:
            w[b] += v[a]
        est = sum(w) / sum(v)
        if prev is not None and abs(est - prev) <= tol * est:
            return est - 1.0
        prev = est
        top = max(w).bit_length()
        if top > 128:
            drop = top - 64
            w = [x >> drop for x in w]
        v = w
    return prev - 1.0


def entropy(p: LexPair, tol: float = _POWER_TOL) -> EntropyResult:
    """Growth rate of the factor count, base-2 logarithm.

    Exact (to power-iteration tolerance) when both bounds are purely
    periodic.  Otherwise `h` repeats the certified lower bound obtained
    from an inner periodic approximation, and [lower, upper] encloses the
    true value, the upper side coming from suffix-respecting word counts.
    The quotient by the expansion rate equals the dimension of the
    surviving set, which in these units is the entropy itself.
    """
    _require_window(p)
    if not p.alpha.preperiod and not p.beta.preperiod:
        auto = WindowAutomaton(p.alpha, p.beta)
        edges, m = auto._alive_edges()
        rho = 1.0
        for comp in _strong_components(m, edges):
            compset = set(comp)
            internal = [(a, b) for a, b in edges if a in compset and b in compset]
            if not internal:
                continue
            rho = max(rho, _component_radius(comp, internal, tol))
        h = log2(rho)
        return EntropyResult(h=h, lower=h, upper=h, dim_H=h)
    inner = periodic_approximations(p, 4)
    low = entropy(inner[-1], tol).h if inner else 0.0
    tracker = _BoundTracker(p)
    up = min(log2(tracker.count(n)) / n for n in (8, 16, 24, 32, 40))
    return EntropyResult(h=low, lower=low, upper=max(low, up), dim_H=low)
