"""Teachers answering membership and equivalence queries."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass

from .automaton import Wdfsa, as_string, evaluate, equivalent, is_trimmed, trim
from .errors import NonDeterministicTarget
from .semifield import RationalSemifield


class Oracle:
    """Interface: ``membership(x) -> weight``, ``equivalence(h) -> str | None``."""

    alphabet = ()
    sf = None

    def membership(self, x):
        raise NotImplementedError

    def equivalence(self, hypothesis):
        raise NotImplementedError


class ReferenceOracle(Oracle):
    """Exact teacher backed by a known target WDFSA."""

    def __init__(self, target):
        if not isinstance(target, Wdfsa) or not target.is_deterministic():
            raise NonDeterministicTarget("reference oracle needs a deterministic target")
        if not is_trimmed(target):
            target = trim(target)
        self.target = target
        self.alphabet = target.alphabet
        self.sf = target.sf

    def membership(self, x):
        return evaluate(self.target, x)

    def equivalence(self, hypothesis):
        return equivalent(hypothesis, self.target)


class BruteForceOracle(Oracle):
    """Equivalence by exhaustive shortlex enumeration up to ``max_len``.

    Subtrees where neither automaton has a path are skipped: every string
    below them weighs 0̄ on both sides.
    """

    def __init__(self, target, max_len):
        if not isinstance(target, Wdfsa):
            raise NonDeterministicTarget("brute-force oracle needs a deterministic target")
        self.target = target
        self.max_len = max_len
        self.alphabet = target.alphabet
        self.sf = target.sf

    def membership(self, x):
        return evaluate(self.target, x)

    def equivalence(self, hypothesis):
        lift, times, eq = _arith(self.sf)
        machines = []
        for m in (self.target, hypothesis):
            delta = {k: (lift(w), q) for k, (w, q) in m.delta.items()}
            rho = [lift(w) for w in m.rho]
            init = None if m.initial is None else (m.initial, lift(m.lam[m.initial]))
            machines.append((delta, rho, init))
        (dt, rt, it), (dh, rh, ih) = machines
        zero = lift(self.sf.zero)

        # each entry: (index in the previous level, symbol, cfg_t, cfg_h); a
        # configuration is (state, weight so far) or None once the run died
        levels = [[(None, None, it, ih)]]
        for n in range(self.max_len + 1):
            level = levels[-1]
            for i, (_, _, ct, ch) in enumerate(level):
                wt = zero if ct is None else times(ct[1], rt[ct[0]])
                wh = zero if ch is None else times(ch[1], rh[ch[0]])
                if not eq(wt, wh):
                    return self._spell(levels, i)
            if n == self.max_len:
                break
            nxt = []
            for i, (_, _, ct, ch) in enumerate(level):
                for s in self.alphabet:
                    nt = nh = None
                    if ct is not None:
                        arc = dt.get((ct[0], s))
                        if arc is not None:
                            nt = (arc[1], times(ct[1], arc[0]))
                    if ch is not None:
                        arc = dh.get((ch[0], s))
                        if arc is not None:
                            nh = (arc[1], times(ch[1], arc[0]))
                    if nt is not None or nh is not None:
                        nxt.append((i, s, nt, nh))
            levels.append(nxt)
        return None

    @staticmethod
    def _spell(levels, i):
        out = []
        for level in reversed(levels[1:]):
            i, s, _, _ = level[i]
            out.append(s)
        return tuple(reversed(out))


def _arith(sf):
    """Weight arithmetic for enumeration: ``(lift, times, eq)``.

    Rationals travel as unreduced ``(num, den)`` integer pairs, which skips
    the gcd in every Fraction product; everything else uses the semifield.
    """
    if isinstance(sf, RationalSemifield):
        return (
            lambda w: (w.numerator, w.denominator),
            lambda x, y: (x[0] * y[0], x[1] * y[1]),
            lambda x, y: x[0] * y[1] == y[0] * x[1],
        )
    return (lambda w: w), sf.times, sf.eq


@dataclass
class QueryLedger:
    membership_count: int = 0
    equivalence_count: int = 0
    distinct_membership_count: int = 0


class MemoOracle(Oracle):
    """Caching, counting wrapper; safe for concurrent membership calls."""

    def __init__(self, inner, cache=True):
        self.inner = inner
        self.alphabet = inner.alphabet
        self.sf = inner.sf
        self.ledger = QueryLedger()
        self._cache = {} if cache else None
        self._seen = set()
        self._lock = threading.Lock()

    def membership(self, x):
        x = as_string(x, self.alphabet)
        with self._lock:
            self.ledger.membership_count += 1
            if x not in self._seen:
                self._seen.add(x)
                self.ledger.distinct_membership_count += 1
            if self._cache is not None and x in self._cache:
                return self._cache[x]
        value = self.inner.membership(x)
        if self._cache is not None:
            with self._lock:
                self._cache[x] = value
        return value

    def equivalence(self, hypothesis):
        self.ledger.equivalence_count += 1
        return self.inner.equivalence(hypothesis)


def reference_oracle(target):
    return ReferenceOracle(target)


def bruteforce_oracle(target, max_len):
    return BruteForceOracle(target, max_len)


def memoize(inner, cache=True):
    return MemoOracle(inner, cache=cache)


def shortlex(alphabet, max_len):
    """All strings of length <= ``max_len`` in shortlex order."""
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)
