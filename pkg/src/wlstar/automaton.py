"""Weighted finite-state automata over a semifield.

Strings are tuples of symbols; states are dense integers ``0..n-1``.
Automata are immutable after construction.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .errors import (
    AlphabetMismatch,
    NonDeterministicTarget,
    NotTransitionRegular,
    SemifieldMismatch,
    UnknownSymbol,
)


def as_string(x, alphabet=None):
    """Coerce ``x`` to a tuple of symbols.

    A Python ``str`` is split into characters when every symbol of
    ``alphabet`` is a single character, and on whitespace otherwise.
    """
    if isinstance(x, tuple):
        return x
    if isinstance(x, str):
        if alphabet is not None and any(len(a) != 1 for a in alphabet):
            return tuple(x.split())
        return tuple(x)
    return tuple(x)


def show_string(x, alphabet=None):
    if alphabet is not None and any(len(a) != 1 for a in alphabet):
        return " ".join(x)
    return "".join(x)


class Wfsa:
    """A (possibly nondeterministic) WFSA without ε-arcs.

    ``arcs`` is an iterable of ``(source, symbol, weight, target)``; arcs
    carrying 0̄ are dropped.  ``lam`` and ``rho`` are sequences indexed by
    state.
    """

    def __init__(self, sf, alphabet, n_states, arcs, lam, rho):
        self.sf = sf
        self.alphabet = tuple(alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError(f"duplicate symbols in alphabet {self.alphabet}")
        self.n_states = int(n_states)
        self.lam = tuple(lam)
        self.rho = tuple(rho)
        if len(self.lam) != self.n_states or len(self.rho) != self.n_states:
            raise ValueError("lam/rho must have one entry per state")
        symbols = set(self.alphabet)
        kept = []
        for p, a, w, q in arcs:
            if a not in symbols:
                raise UnknownSymbol(a)
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise ValueError(f"arc {p}-{a}->{q} references a missing state")
            if not sf.is_zero(w):
                kept.append((p, a, w, q))
        kept.sort(key=lambda arc: (arc[0], self.alphabet.index(arc[1]), arc[3]))
        self.arcs = tuple(kept)
        self.out = [[] for _ in range(self.n_states)]
        for p, a, w, q in self.arcs:
            self.out[p].append((a, w, q))

    @property
    def states(self):
        return range(self.n_states)

    def initial_states(self):
        return [q for q in self.states if not self.sf.is_zero(self.lam[q])]

    def is_deterministic(self):
        if len(self.initial_states()) > 1:
            return False
        seen = set()
        for p, a, _, _ in self.arcs:
            if (p, a) in seen:
                return False
            seen.add((p, a))
        return True

    def __len__(self):
        return self.n_states

    def __repr__(self):
        kind = type(self).__name__
        return f"<{kind} {self.sf.name} |Q|={self.n_states} |δ|={len(self.arcs)} Σ={self.alphabet}>"


class Wdfsa(Wfsa):
    """Deterministic WFSA: one initial state, at most one arc per (state, symbol)."""

    def __init__(self, sf, alphabet, n_states, arcs, lam, rho):
        super().__init__(sf, alphabet, n_states, arcs, lam, rho)
        initials = self.initial_states()
        if len(initials) > 1:
            raise NonDeterministicTarget(f"several initial states: {initials}")
        self.initial = initials[0] if initials else None
        self.delta = {}
        for p, a, w, q in self.arcs:
            if (p, a) in self.delta:
                raise NonDeterministicTarget(f"state {p} has two {a!r}-arcs")
            self.delta[(p, a)] = (w, q)

    def run(self, x):
        """``(state, λ ⊗ path weight)`` after reading ``x``, or ``None`` if no path."""
        if self.initial is None:
            return None
        q = self.initial
        w = self.lam[q]
        times = self.sf.times
        for a in x:
            step = self.delta.get((q, a))
            if step is None:
                if a not in self.alphabet:
                    raise UnknownSymbol(a)
                return None
            w = times(w, step[0])
            q = step[1]
        return q, w


def empty_automaton(sf, alphabet):
    """The canonical automaton of the identically-0̄ language."""
    return Wdfsa(sf, alphabet, 1, [], [sf.zero], [sf.zero])


def as_wdfsa(a):
    if isinstance(a, Wdfsa):
        return a
    if not a.is_deterministic():
        raise NonDeterministicTarget("automaton is not deterministic")
    return Wdfsa(a.sf, a.alphabet, a.n_states, a.arcs, a.lam, a.rho)


def evaluate(a, x):
    """Weight of string ``x``: ⊕ over paths of λ ⊗ w(π) ⊗ ρ."""
    x = as_string(x, a.alphabet)
    sf = a.sf
    if isinstance(a, Wdfsa):
        end = a.run(x)
        if end is None:
            return sf.zero
        return sf.times(end[1], a.rho[end[0]])
    for s in x:
        if s not in a.alphabet:
            raise UnknownSymbol(s)
    current = {q: a.lam[q] for q in a.initial_states()}
    for s in x:
        nxt = {}
        for p, wp in current.items():
            for b, w, q in a.out[p]:
                if b == s:
                    v = sf.times(wp, w)
                    nxt[q] = sf.plus(nxt[q], v) if q in nxt else v
        current = nxt
    return sf.sum(sf.times(w, a.rho[q]) for q, w in sorted(current.items()))


@dataclass(frozen=True)
class PathRecord:
    states: tuple
    symbols: tuple
    weight: object

    @property
    def first(self):
        return self.states[0]

    @property
    def last(self):
        return self.states[-1]


def paths_yielding(a, x):
    """All paths with yield ``x`` that start in a state with λ ≠ 0̄."""
    x = as_string(x, a.alphabet)
    sf = a.sf
    found = []

    def extend(states, weight, i):
        if i == len(x):
            found.append(PathRecord(tuple(states), x, weight))
            return
        p = states[-1]
        for b, w, q in a.out[p]:
            if b == x[i]:
                states.append(q)
                extend(states, sf.times(weight, w), i + 1)
                states.pop()

    for q in a.initial_states():
        extend([q], sf.one, 0)
    return found


def count_paths(a, x):
    """Number of paths yielding ``x`` from λ ≠ 0̄ states, by dynamic programming."""
    x = as_string(x, a.alphabet)
    counts = {q: 1 for q in a.initial_states()}
    for s in x:
        nxt = {}
        for p, c in counts.items():
            for b, _, q in a.out[p]:
                if b == s:
                    nxt[q] = nxt.get(q, 0) + c
        counts = nxt
    return sum(counts.values())


def accessible(a):
    seen = set(a.initial_states())
    stack = list(seen)
    while stack:
        p = stack.pop()
        for _, _, q in a.out[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def coaccessible(a):
    back = [[] for _ in a.states]
    for p, _, _, q in a.arcs:
        back[q].append(p)
    seen = {q for q in a.states if not a.sf.is_zero(a.rho[q])}
    stack = list(seen)
    while stack:
        q = stack.pop()
        for p in back[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def completion_depths(a):
    """Length of the shortest completion from each coaccessible state (reverse BFS)."""
    back = [[] for _ in a.states]
    for p, _, _, q in a.arcs:
        back[q].append(p)
    depth = {q: 0 for q in a.states if not a.sf.is_zero(a.rho[q])}
    queue = deque(sorted(depth))
    while queue:
        q = queue.popleft()
        for p in back[q]:
            if p not in depth:
                depth[p] = depth[q] + 1
                queue.append(p)
    return depth


def trim(a):
    """Restrict to states that are both accessible and coaccessible."""
    keep = sorted(accessible(a) & coaccessible(a))
    if not keep:
        return empty_automaton(a.sf, a.alphabet)
    if len(keep) == a.n_states:
        return a
    index = {q: i for i, q in enumerate(keep)}
    arcs = [(index[p], s, w, index[q]) for p, s, w, q in a.arcs if p in index and q in index]
    lam = [a.lam[q] for q in keep]
    rho = [a.rho[q] for q in keep]
    cls = Wdfsa if isinstance(a, Wdfsa) else Wfsa
    return cls(a.sf, a.alphabet, len(keep), arcs, lam, rho)


def is_trimmed(a):
    if a.n_states == 1 and not a.arcs and not a.initial_states():
        # canonical empty automaton
        return True
    keep = accessible(a) & coaccessible(a)
    return len(keep) == a.n_states


class StatePartition:
    """A partition of ``range(n)`` into blocks, blocks ordered by smallest member."""

    def __init__(self, blocks):
        blocks = [tuple(sorted(b)) for b in blocks if b]
        blocks.sort(key=lambda b: b[0])
        self.blocks = tuple(blocks)
        n = sum(len(b) for b in blocks)
        self.block_of = [None] * n
        for i, b in enumerate(self.blocks):
            for q in b:
                if q >= n or self.block_of[q] is not None:
                    raise ValueError("blocks must be disjoint and cover 0..n-1")
                self.block_of[q] = i

    @classmethod
    def identity(cls, n):
        return cls([(q,) for q in range(n)])

    @classmethod
    def from_labels(cls, labels):
        groups = {}
        for q, lab in enumerate(labels):
            groups.setdefault(lab, []).append(q)
        return cls(groups.values())

    def same(self, p, q):
        return self.block_of[p] == self.block_of[q]

    def __len__(self):
        return len(self.blocks)

    def __repr__(self):
        return f"StatePartition({list(self.blocks)})"


@dataclass(frozen=True)
class RegularityCheck:
    ok: bool
    witness: tuple = None

    def __bool__(self):
        return self.ok


def is_transition_regular(a, part, *, check_initial=True):
    """Check that ``part`` is a transition-regular relation on ``a``.

    For ``p ~ q``: every arc ``p -s/w-> r`` has a twin ``q -s/w-> r`` with the
    same target and weight, all ``s``-targets of ``p`` are related, and
    λ, ρ agree.  Returns a truthy/falsy :class:`RegularityCheck` carrying the
    first violation found.
    """
    if len(part.block_of) != a.n_states:
        raise ValueError("partition does not cover the automaton's states")
    sf = a.sf
    for block in part.blocks:
        for p in block:
            targets = {}
            for s, w, r in a.out[p]:
                if s in targets and not part.same(targets[s], r):
                    return RegularityCheck(False, ("targets", p, s, targets[s], r))
                targets.setdefault(s, r)
        rep = block[0]
        for q in block[1:]:
            if not sf.eq(a.rho[rep], a.rho[q]):
                return RegularityCheck(False, ("rho", rep, q))
            if check_initial and not sf.eq(a.lam[rep], a.lam[q]):
                return RegularityCheck(False, ("lambda", rep, q))
            for x, y in ((rep, q), (q, rep)):
                twins = {(s, r): w for s, w, r in a.out[y]}
                for s, w, r in a.out[x]:
                    w2 = twins.get((s, r))
                    if w2 is None or not sf.eq(w, w2):
                        return RegularityCheck(False, ("arc", x, y, s, r))
    return RegularityCheck(True)


def quotient(a, part, *, check_initial=True):
    """The quotient automaton on the blocks of a transition-regular partition.

    Each block inherits the arcs, λ and ρ of its smallest member.  With
    ``check_initial=False`` a block's λ is the sum over its members instead.
    """
    check = is_transition_regular(a, part, check_initial=check_initial)
    if not check:
        raise NotTransitionRegular(f"partition is not transition-regular: {check.witness}")
    sf = a.sf
    arcs = []
    lam = []
    rho = []
    for i, block in enumerate(part.blocks):
        rep = block[0]
        lam.append(a.lam[rep] if check_initial else sf.sum(a.lam[q] for q in block))
        rho.append(a.rho[rep])
        seen = set()
        for s, w, r in a.out[rep]:
            if s not in seen:
                seen.add(s)
                arcs.append((i, s, w, part.block_of[r]))
    return Wdfsa(a.sf, a.alphabet, len(part.blocks), arcs, lam, rho)


def _check_compatible(a, b):
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"{a.alphabet} vs {b.alphabet}")
    if a.sf.name != b.sf.name:
        raise SemifieldMismatch(f"{a.sf.name} vs {b.sf.name}")


def equivalent(a, b):
    """Shortest (then lexicographically least) string weighted differently, or ``None``.

    Both automata are trimmed first.  The search runs breadth-first over
    configurations ``(state_a, state_b, ratio)`` where ``ratio`` is the
    accumulated weight on side ``a`` divided by that on side ``b``; a side
    without a path is ``None`` (and so is the ratio).  The future of a
    configuration is fixed by the configuration alone, so a configuration is
    expanded only at its first occurrence, from the lexicographically least
    string reaching it.  Without a counterexample at most
    ``(|Q_a|+1)·(|Q_b|+1)`` configurations are ever visited.
    """
    _check_compatible(a, b)
    a = trim(as_wdfsa(a))
    b = trim(as_wdfsa(b))
    sf = a.sf

    def failing(cfg):
        qa, qb, ratio = cfg
        if qb is None:
            return not sf.is_zero(a.rho[qa])
        if qa is None:
            return not sf.is_zero(b.rho[qb])
        return not sf.eq(sf.times(ratio, a.rho[qa]), b.rho[qb])

    seen = set()
    ratios = {}

    def is_new(cfg):
        if sf.exact or cfg[2] is None:
            if cfg in seen:
                return False
            seen.add(cfg)
            return True
        known = ratios.setdefault(cfg[:2], [])
        if any(sf.eq(r, cfg[2]) for r in known):
            return False
        known.append(cfg[2])
        return True

    qa = a.initial
    qb = b.initial
    if qa is None and qb is None:
        return None
    if qa is None or qb is None:
        first = (qa, qb, None)
    else:
        first = (qa, qb, sf.div(a.lam[qa], b.lam[qb]))
    is_new(first)
    level = [((), first)]
    while level:
        for x, cfg in level:
            if failing(cfg):
                return x
        nxt = []
        for x, (qa, qb, ratio) in level:
            for s in a.alphabet:
                sa = a.delta.get((qa, s)) if qa is not None else None
                sb = b.delta.get((qb, s)) if qb is not None else None
                if sa is None and sb is None:
                    continue
                if sa is not None and sb is not None:
                    cfg = (sa[1], sb[1], sf.div(sf.times(ratio, sa[0]), sb[0]))
                else:
                    cfg = (sa[1] if sa else None, sb[1] if sb else None, None)
                if is_new(cfg):
                    nxt.append((x + (s,), cfg))
        level = nxt
    return None


def random_wdfsa(n, alphabet, seed, sf, density=None):
    """A random trimmed WDFSA with ``n`` states, reproducible from ``seed``.

    A random spanning tree from state 0 makes every state accessible; each
    remaining (state, symbol) slot then receives an arc with probability
    ``density``.  Final weights are added until every state is coaccessible.
    The default density keeps the mean out-degree near 1.5 whatever the
    alphabet size, so exhaustive enumeration stays affordable.
    """
    if n < 1 or not alphabet:
        raise ValueError("random_wdfsa needs n >= 1 and a non-empty alphabet")
    rng = random.Random(seed)
    alphabet = tuple(alphabet)
    if density is None:
        density = 0.5 / max(1, len(alphabet) - 1)
    delta = {}
    for i in range(1, n):
        free = [(p, s) for p in range(i) for s in alphabet if (p, s) not in delta]
        p, s = rng.choice(free)
        delta[(p, s)] = (sf.sample(rng), i)
    for p in range(n):
        for s in alphabet:
            if (p, s) not in delta and rng.random() < density:
                delta[(p, s)] = (sf.sample(rng), rng.randrange(n))
    arcs = [(p, s, w, q) for (p, s), (w, q) in delta.items()]
    lam = [sf.zero] * n
    lam[0] = sf.sample(rng)
    rho = [sf.sample(rng) if rng.random() < 0.5 else sf.zero for _ in range(n)]
    while True:
        a = Wdfsa(sf, alphabet, n, arcs, lam, rho)
        dead = sorted(set(range(n)) - coaccessible(a))
        if not dead:
            return a
        rho[rng.choice(dead)] = sf.sample(rng)


def _homothetic_upto(a, p, q, depth, done):
    """Are the right languages of ``p`` and ``q`` proportional on strings of length <= depth?"""
    sf = a.sf
    k = None
    seen = set()
    level = [(p, q, sf.one)]
    for m in range(depth + 1):
        nxt = []
        for p1, q1, r in level:
            if p1 is None or q1 is None:
                live = q1 if p1 is None else p1
                if done.get(live, depth + 1) <= depth - m:
                    return False
                continue
            zp = sf.is_zero(a.rho[p1])
            zq = sf.is_zero(a.rho[q1])
            if zp != zq:
                return False
            if not zp:
                kk = sf.div(sf.times(r, a.rho[p1]), a.rho[q1])
                if k is None:
                    k = kk
                elif not sf.eq(k, kk):
                    return False
            if m == depth:
                continue
            for s in a.alphabet:
                sp = a.delta.get((p1, s))
                sq = a.delta.get((q1, s))
                if sp is None and sq is None:
                    continue
                if sp is not None and sq is not None:
                    cfg = (sp[1], sq[1], sf.div(sf.times(r, sp[0]), sq[0]))
                else:
                    cfg = (sp[1] if sp else None, sq[1] if sq else None, None)
                key = cfg if sf.exact else cfg[:2] + (None if cfg[2] is None else round(cfg[2], 9),)
                if key not in seen:
                    seen.add(key)
                    nxt.append(cfg)
        level = nxt
    return True


def minimal_state_count_bruteforce(a, depth):
    """Number of right-language classes among prefixes of length <= ``depth``.

    Two prefixes are identified when their right languages, restricted to
    suffixes of length <= ``depth``, are homothetic; prefixes whose right
    language vanishes there are ignored.  The count is a lower bound on the
    size of any equivalent WDFSA and is exact once ``depth >= 2·|Q|``.
    """
    a = trim(as_wdfsa(a))
    if a.initial is None:
        return 0
    done = completion_depths(a)
    dist = {a.initial: 0}
    queue = deque([a.initial])
    while queue:
        p = queue.popleft()
        if dist[p] == depth:
            continue
        for _, _, q in a.out[p]:
            if q not in dist:
                dist[q] = dist[p] + 1
                queue.append(q)
    live = sorted(q for q, d in dist.items() if done.get(q, depth + 1) <= depth)
    reps = []
    for q in live:
        if not any(_homothetic_upto(a, r, q, depth, done) for r in reps):
            reps.append(q)
    return len(reps)
