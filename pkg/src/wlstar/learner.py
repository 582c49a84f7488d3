"""The weighted L* learner."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .automaton import evaluate
from .errors import IterationCapExceeded, OracleInconsistent
from .hankel import (
    HankelSystem,
    consistency_violation,
    make_automaton,
    promote_null_rows,
    remove_null_rows,
)
from .oracle import MemoOracle, QueryLedger, memoize

log = logging.getLogger(__name__)


@dataclass
class LearnStats:
    ledger: QueryLedger = field(default_factory=QueryLedger)
    consistency_fixes: int = 0
    closure_fixes: int = 0
    null_repairs: int = 0
    counterexamples: list = field(default_factory=list)
    dim_history: list = field(default_factory=list)
    iterations: int = 0
    wall_time: float = 0.0

    @property
    def max_counterexample_length(self):
        return max((len(t) for t in self.counterexamples), default=0)


@dataclass
class LearnResult:
    automaton: object
    final_system: HankelSystem
    stats: LearnStats
    # copies of the table at every point where it was closed and consistent
    snapshots: list = field(default_factory=list)


def complete(sys, oracle):
    return sys.complete(oracle.membership)


def make_consistent(sys, oracle):
    """Split the first inconsistent pair of equivalent prefixes.

    For every symbol on which the pair's extensions disagree, ``a·c`` is added
    to ``S`` for the separating column(s) ``c`` (``c`` itself first when it is
    not yet a suffix).  Returns the added suffixes, or ``None``.
    """
    v = consistency_violation(sys)
    if v is None:
        return None
    _, _, found = v
    added = []
    for a, cols in found.items():
        for c in cols:
            for s in (c, (a,) + c):
                if sys.add_suffix(s):
                    added.append(s)
    complete(sys, oracle)
    return added


def make_closed(sys, oracle):
    """Promote unmatched nonzero extension rows into ``P``; returns them or ``None``."""
    cls = sys.classes()
    covered = set(cls.prefix_representatives)
    added = []
    for p in list(sys.prefixes):
        for a in sys.alphabet:
            pa = p + (a,)
            cid = cls.class_of[pa]
            if cid == cls.null_class or cid in covered:
                continue
            sys.add_prefix(pa)
            covered.add(cid)
            added.append(pa)
    if not added:
        return None
    complete(sys, oracle)
    return added


def _default_cap(sys):
    return 10 * (sys.classes().live_dim + 1) + len(sys.prefixes)


def lstar(oracle, alphabet=None, sf=None, *, max_iter=None, trace=False):
    """Learn a minimal WDFSA for the oracle's language.

    ``max_iter`` caps the total number of loop iterations; by default the
    cap adapts to the current table (ten per class plus one per prefix).
    """
    started = time.perf_counter()
    if not isinstance(oracle, MemoOracle):
        oracle = memoize(oracle)
    alphabet = tuple(alphabet if alphabet is not None else oracle.alphabet)
    sf = sf if sf is not None else oracle.sf
    stats = LearnStats(ledger=oracle.ledger)
    snapshots = []

    sys = HankelSystem(sf, alphabet)
    complete(sys, oracle)
    stats.dim_history.append(sys.classes().live_dim)

    def tick():
        stats.iterations += 1
        cap = max_iter if max_iter is not None else _default_cap(sys)
        if stats.iterations > cap:
            raise IterationCapExceeded(f"gave up after {stats.iterations - 1} iterations")

    def record():
        stats.dim_history.append(sys.classes().live_dim)

    while True:
        while True:
            tick()
            if make_consistent(sys, oracle) is not None:
                stats.consistency_fixes += 1
                record()
            elif make_closed(sys, oracle) is not None:
                stats.closure_fixes += 1
                record()
            elif promote_null_rows(sys, oracle.membership):
                stats.null_repairs += 1
                dim = sys.classes().live_dim
                if dim > stats.dim_history[-1]:
                    stats.dim_history.append(dim)
            else:
                break
        if trace:
            snapshots.append(sys.copy())
        hypothesis = make_automaton(remove_null_rows(sys))
        log.debug("hypothesis with %d states, |P|=%d |S|=%d",
                  hypothesis.n_states, len(sys.prefixes), len(sys.suffixes))
        t = oracle.equivalence(hypothesis)
        if t is None:
            stats.wall_time = time.perf_counter() - started
            return LearnResult(hypothesis, sys, stats, snapshots)
        t = tuple(t)
        if sf.eq(oracle.membership(t), evaluate(hypothesis, t)):
            raise OracleInconsistent(f"counterexample {t!r} is weighted alike by target and hypothesis")
        stats.counterexamples.append(t)
        for i in range(len(t) + 1):
            sys.add_prefix(t[:i])
        complete(sys, oracle)
        tick()
