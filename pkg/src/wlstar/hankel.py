"""Empirical Hankel systems.

A :class:`HankelSystem` holds a prefix-closed list ``P``, a suffix-closed list
``S`` and the observed cells ``H(p, s) = L(p·s)`` for every row key
``p ∈ P∘Σ^{≤1}`` and column key ``s ∈ Σ^{≤1}∘S``.  Rows are compared up to a
nonzero multiplicative constant (homothetic equivalence); the induced
partition of the rows drives closedness, consistency and the construction of
the hypothesis automaton.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .automaton import StatePartition, Wfsa, empty_automaton, quotient, show_string
from .errors import IncompleteRow, NotAnEmpiricalSystem

EPS = ()


def _fmt_key(x, alphabet):
    return show_string(x, alphabet) if x else "ε"


class HankelSystem:
    """Observation table over ``P∘Σ^{≤1} × Σ^{≤1}∘S``.

    Rows and columns are kept in first-appearance order.  Cells are stored
    sparsely; a cell that has never been stamped is *missing*, never 0̄.
    """

    def __init__(self, sf, alphabet, prefixes=(EPS,), suffixes=(EPS,)):
        self.sf = sf
        self.alphabet = tuple(alphabet)
        self.prefixes = []
        self.suffixes = []
        self._pset = set()
        self._sset = set()
        self._rows = []
        self._row_index = {}
        self._cols = []
        self._col_index = {}
        self.cells = {}
        self._done_rows = 0
        self._done_cols = 0
        self._d = {}
        self._reset_classes()
        for p in prefixes:
            self.add_prefix(p)
        for s in suffixes:
            self.add_suffix(s)

    def _reset_classes(self):
        self._canon = {}
        self._pivot = {}
        self._group_of = {}
        self._groups = {}
        self._group_key = {}
        self._next_group = 0
        self._classified_cols = 0

    # -- structure -------------------------------------------------------

    def _add_row(self, r):
        if r not in self._row_index:
            self._row_index[r] = len(self._rows)
            self._rows.append(r)

    def _add_col(self, c):
        if c not in self._col_index:
            self._col_index[c] = len(self._cols)
            self._cols.append(c)

    def add_prefix(self, p):
        """Append ``p`` to ``P``; its parent must already be present. Returns ``True`` if new."""
        p = tuple(p)
        if p in self._pset:
            return False
        if p and p[:-1] not in self._pset:
            raise ValueError(f"adding {p!r} would break prefix-closure of P")
        self.prefixes.append(p)
        self._pset.add(p)
        self._add_row(p)
        for a in self.alphabet:
            self._add_row(p + (a,))
        return True

    def add_suffix(self, s):
        """Append ``s`` to ``S``; its tail must already be present. Returns ``True`` if new."""
        s = tuple(s)
        if s in self._sset:
            return False
        if s and s[1:] not in self._sset:
            raise ValueError(f"adding {s!r} would break suffix-closure of S")
        self.suffixes.append(s)
        self._sset.add(s)
        self._d.clear()
        self._add_col(s)
        for a in self.alphabet:
            self._add_col((a,) + s)
        return True

    def in_prefixes(self, p):
        return p in self._pset

    def in_suffixes(self, s):
        return s in self._sset

    def row_keys(self):
        return list(self._rows)

    def col_keys(self):
        return list(self._cols)

    def copy(self):
        other = HankelSystem.__new__(HankelSystem)
        other.sf = self.sf
        other.alphabet = self.alphabet
        other.prefixes = list(self.prefixes)
        other.suffixes = list(self.suffixes)
        other._pset = set(self._pset)
        other._sset = set(self._sset)
        other._rows = list(self._rows)
        other._row_index = dict(self._row_index)
        other._cols = list(self._cols)
        other._col_index = dict(self._col_index)
        other.cells = dict(self.cells)
        other._done_rows = self._done_rows
        other._done_cols = self._done_cols
        other._d = dict(self._d)
        other._reset_classes()
        return other

    # -- filling ---------------------------------------------------------

    def complete(self, membership):
        """Stamp every missing cell with ``membership(p·s)``; returns the number stamped."""
        cells = self.cells
        stamped = 0
        old_rows = self._rows[: self._done_rows]
        new_rows = self._rows[self._done_rows:]
        new_cols = self._cols[self._done_cols:]
        for r in new_rows:
            for c in self._cols:
                if (r, c) not in cells:
                    cells[(r, c)] = membership(r + c)
                    stamped += 1
        for r in old_rows:
            for c in new_cols:
                if (r, c) not in cells:
                    cells[(r, c)] = membership(r + c)
                    stamped += 1
        self._done_rows = len(self._rows)
        self._done_cols = len(self._cols)
        return stamped

    def missing(self):
        return sum(1 for r in self._rows for c in self._cols if (r, c) not in self.cells)

    def is_complete(self):
        return self.missing() == 0

    def value(self, r, c):
        try:
            return self.cells[(r, c)]
        except KeyError:
            raise IncompleteRow(f"cell ({r!r}, {c!r}) has not been filled") from None

    def row(self, r):
        if r not in self._row_index:
            raise KeyError(f"{r!r} is not a row key")
        return tuple(self.value(r, c) for c in self._cols)

    def d(self, r):
        """⊕ of row ``r`` over the suffix set ``S`` (not over all columns)."""
        if r not in self._d:
            self._d[r] = self.sf.sum(self.value(r, s) for s in self.suffixes)
        return self._d[r]

    def is_null(self, r):
        return all(self.sf.is_zero(v) for v in self.row(r))

    # -- homothetic equivalence ------------------------------------------

    def homothetic(self, r1, r2):
        """``k`` with ``H_r1 = k ⊗ H_r2`` on every column, or ``None``."""
        sf = self.sf
        row1 = self.row(r1)
        row2 = self.row(r2)
        k = None
        for x, y in zip(row1, row2):
            if sf.is_zero(x) != sf.is_zero(y):
                return None
            if k is None and not sf.is_zero(x):
                k = sf.div(x, y)
        if k is None:
            return sf.one
        for x, y in zip(row1, row2):
            if not sf.eq(x, sf.times(k, y)):
                return None
        return k

    def _refresh(self):
        """Bring the row partition up to date with the current rows and columns."""
        if not self.sf.exact:
            self._refresh_pairwise()
            return
        sf = self.sf
        n_cols = len(self._cols)
        if self._classified_cols < n_cols and self._group_of:
            new_cols = self._cols[self._classified_cols:]
            regrouped = {}
            for gid in sorted(self._groups):
                buckets = {}
                for r in self._groups[gid]:
                    raw = [self.value(r, c) for c in new_cols]
                    pivot = self._pivot[r]
                    if pivot is None:
                        for v in raw:
                            if not sf.is_zero(v):
                                pivot = v
                                self._pivot[r] = v
                                break
                    ext = tuple(raw) if pivot is None else tuple(sf.div(v, pivot) for v in raw)
                    self._canon[r] = self._canon[r] + ext
                    buckets.setdefault(ext, []).append(r)
                for members in buckets.values():
                    regrouped[self._next_group] = members
                    self._next_group += 1
            self._groups = regrouped
            self._group_of = {r: gid for gid, ms in regrouped.items() for r in ms}
            self._group_key = {self._canon[ms[0]]: gid for gid, ms in regrouped.items()}
        self._classified_cols = n_cols
        for r in self._rows:
            if r in self._group_of:
                continue
            raw = [self.value(r, c) for c in self._cols]
            pivot = next((v for v in raw if not sf.is_zero(v)), None)
            canon = tuple(raw) if pivot is None else tuple(sf.div(v, pivot) for v in raw)
            self._pivot[r] = pivot
            self._canon[r] = canon
            gid = self._group_key.get(canon)
            if gid is None:
                gid = self._next_group
                self._next_group += 1
                self._groups[gid] = []
                self._group_key[canon] = gid
            self._groups[gid].append(r)
            self._group_of[r] = gid

    def _refresh_pairwise(self):
        if self._classified_cols != len(self._cols):
            self._group_of = {}
            self._groups = {}
            self._next_group = 0
            self._classified_cols = len(self._cols)
        for r in self._rows:
            if r in self._group_of:
                continue
            for gid, members in self._groups.items():
                if self.homothetic(r, members[0]) is not None:
                    members.append(r)
                    self._group_of[r] = gid
                    break
            else:
                gid = self._next_group
                self._next_group += 1
                self._groups[gid] = [r]
                self._group_of[r] = gid

    def same_class(self, r1, r2):
        self._refresh()
        return self._group_of[r1] == self._group_of[r2]

    def classes(self):
        """The partition of ``P∘Σ^{≤1}`` (and of ``P``) into homothetic classes."""
        self._refresh()
        order = self._row_index
        groups = sorted(
            (sorted(ms, key=order.__getitem__) for ms in self._groups.values()),
            key=lambda ms: order[ms[0]],
        )
        class_of = {}
        scale = {}
        reps = []
        prefix_reps = {}
        null_class = None
        pindex = {p: i for i, p in enumerate(self.prefixes)}
        for cid, members in enumerate(groups):
            reps.append(members[0])
            in_p = sorted((r for r in members if r in self._pset), key=pindex.__getitem__)
            if in_p:
                prefix_reps[cid] = in_p[0]
            for r in members:
                class_of[r] = cid
            if self.is_null(members[0]):
                null_class = cid
            for r in members:
                scale[r] = self.homothetic(r, members[0])
        return RowClassification(
            class_of=class_of,
            representatives=reps,
            prefix_representatives=prefix_reps,
            scale=scale,
            null_class=null_class,
            prefixes=list(self.prefixes),
        )

    # -- debugging -------------------------------------------------------

    def dump_tsv(self):
        """Tab-separated table: first column the row key, header the column keys."""
        sf = self.sf
        lines = ["\t".join([""] + [_fmt_key(c, self.alphabet) for c in self._cols])]
        for r in self._rows:
            cells = []
            for c in self._cols:
                v = self.cells.get((r, c))
                cells.append("?" if v is None else sf.format(v))
            lines.append("\t".join([_fmt_key(r, self.alphabet)] + cells))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return (
            f"<HankelSystem |P|={len(self.prefixes)} |S|={len(self.suffixes)} "
            f"cells={len(self.cells)}>"
        )


@dataclass
class RowClassification:
    """Homothetic classes of the rows, numbered by earliest member."""

    class_of: dict
    representatives: list
    prefix_representatives: dict
    scale: dict
    null_class: object
    prefixes: list = field(default_factory=list)

    def prefix_classes(self):
        return sorted(self.prefix_representatives)

    @property
    def dim(self):
        """Number of classes of ``P``."""
        return len(self.prefix_representatives)

    @property
    def live_dim(self):
        """Number of classes of ``P`` other than the all-0̄ class."""
        return len([c for c in self.prefix_representatives if c != self.null_class])

    def members(self, cid):
        return [r for r, c in self.class_of.items() if c == cid]


def d(sys, p):
    return sys.d(p)


def homothetic(sys, r1, r2):
    return sys.homothetic(r1, r2)


def classes(sys):
    return sys.classes()


def is_closed(sys):
    """First ``(p, a)`` whose nonzero extension row matches no row of ``P``, else ``None``."""
    cls = sys.classes()
    for p in sys.prefixes:
        for a in sys.alphabet:
            pa = p + (a,)
            cid = cls.class_of[pa]
            if cid == cls.null_class or cid in cls.prefix_representatives:
                continue
            return (p, a)
    return None


def separating_columns(sys, p, q, a):
    """Columns of the ``a``-extensions of ``p ~ q`` whose promotion splits ``p`` from ``q``.

    With nonzero parent rows the constant ``k`` of ``H_p = k ⊗ H_q`` is forced,
    and one column where ``H_pa ≠ k ⊗ H_qa`` suffices.  With all-0̄ parents
    a zero-pattern mismatch (one column) or a ratio mismatch (two columns)
    is returned.  Empty list if the extensions are homothetic.
    """
    sf = sys.sf
    pa, qa = p + (a,), q + (a,)
    if sys.same_class(pa, qa):
        return []
    cols = sys.col_keys()
    row_p = sys.row(pa)
    row_q = sys.row(qa)
    if not sys.is_null(p):
        k = sys.homothetic(p, q)
        for c, x, y in zip(cols, row_p, row_q):
            if not sf.eq(x, sf.times(k, y)):
                return [c]
        return []
    for c, x, y in zip(cols, row_p, row_q):
        if sf.is_zero(x) != sf.is_zero(y):
            return [c]
    first = None
    for c, x, y in zip(cols, row_p, row_q):
        if sf.is_zero(x):
            continue
        if first is None:
            first = (c, x, y)
        elif not sf.eq(sf.times(x, first[2]), sf.times(first[1], y)):
            return [first[0], c]
    return []


def consistency_violation(sys):
    """First ``(p, q, {a: columns})`` with ``p ~ q`` but some ``pa ≁ qa``, else ``None``.

    Every prefix is compared with the earliest prefix of its class.
    """
    cls = sys.classes()
    groups = {}
    for p in sys.prefixes:
        groups.setdefault(cls.class_of[p], []).append(p)
    for p in sys.prefixes:
        members = groups[cls.class_of[p]]
        if members[0] != p:
            continue
        for q in members[1:]:
            found = {}
            for a in sys.alphabet:
                if cls.class_of[p + (a,)] == cls.class_of[q + (a,)]:
                    continue
                cols = separating_columns(sys, p, q, a)
                if cols:
                    found[a] = cols
            if found:
                return p, q, found
    return None


def is_consistent(sys):
    """First witness ``(p, q, a, column)`` of an inconsistency, else ``None``."""
    v = consistency_violation(sys)
    if v is None:
        return None
    p, q, found = v
    a = next(iter(found))
    return (p, q, a, found[a][0])


def null_row_repairs(sys):
    """Suffixes to promote so that every live prefix gets ``d_H(p) ≠ 0̄``.

    * A nonzero row with ``d_H(p) = 0̄`` is nonzero only on a column ``b·s``;
      that column is promoted into ``S``.
    * An all-0̄ row whose extension ``p·a`` is nonzero at column ``u`` gets
      ``a·u`` promoted (with ``u`` first, keeping ``S`` suffix-closed).
    """
    sf = sys.sf
    wanted = []
    cols = sys.col_keys()
    for p in sys.prefixes:
        if not sf.is_zero(sys.d(p)):
            continue
        row = sys.row(p)
        hit = next((c for c, v in zip(cols, row) if not sf.is_zero(v)), None)
        if hit is not None:
            chain = [hit]
        else:
            chain = []
            for a in sys.alphabet:
                ext = sys.row(p + (a,))
                u = next((c for c, v in zip(cols, ext) if not sf.is_zero(v)), None)
                if u is not None:
                    chain = [u, (a,) + u]
                    break
        for s in chain:
            if not sys.in_suffixes(s) and s not in wanted:
                wanted.append(s)
    return wanted


def promote_null_rows(sys, membership):
    """Apply :func:`null_row_repairs` until none remain; returns the promoted suffixes."""
    added = []
    while True:
        todo = null_row_repairs(sys)
        if not todo:
            return added
        for s in todo:
            if sys.add_suffix(s):
                added.append(s)
        sys.complete(membership)


def remove_null_rows(sys, membership=None):
    """A copy of ``sys`` without its all-0̄ prefixes.

    With ``membership`` given, live null rows are first repaired by suffix
    promotion (:func:`promote_null_rows`).  The remaining null prefixes form
    dead subtrees of ``P``; deleting them keeps ``P`` prefix-closed.  If ε is
    deleted the result has no prefixes and denotes the 0̄ language.
    """
    work = sys.copy()
    if membership is not None:
        promote_null_rows(work, membership)
    keep = [p for p in work.prefixes if not work.is_null(p)]
    kept = set(keep)
    for p in keep:
        if p and p[:-1] not in kept:
            raise NotAnEmpiricalSystem("prefix-closed after null-row removal", p)
    out = HankelSystem(work.sf, work.alphabet, prefixes=(), suffixes=work.suffixes)
    for p in keep:
        out.add_prefix(p)
    for r in out._rows:
        for c in out._cols:
            out.cells[(r, c)] = work.value(r, c)
    out._done_rows = len(out._rows)
    out._done_cols = len(out._cols)
    return out


def check_empirical(sys):
    """Raise :class:`NotAnEmpiricalSystem` naming the first failed predicate."""
    if not sys.prefixes:
        return
    if sys.prefixes[0] != EPS:
        raise NotAnEmpiricalSystem("rooted at ε", sys.prefixes[0])
    for p in sys.prefixes:
        if sys.is_null(p):
            raise NotAnEmpiricalSystem("non-trivial", p)
    for p in sys.prefixes:
        if sys.sf.is_zero(sys.d(p)):
            raise NotAnEmpiricalSystem("normalizable (d_H(p) ≠ 0̄)", p)
    w = is_closed(sys)
    if w is not None:
        raise NotAnEmpiricalSystem("closed", w)
    w = is_consistent(sys)
    if w is not None:
        raise NotAnEmpiricalSystem("consistent", w)


def naive_automaton(sys):
    """The one-state-per-prefix automaton and the partition of its states by class.

    Arc ``p -a-> r`` for every ``r ∈ P`` with ``p·a ~ r``, weight
    ``d(p·a) ⊘ d(p)``; initial weight ``d(ε)`` on ε only; final weight
    ``H(p, ε) ⊘ d(p)``.  Requires ``d(p) ≠ 0̄`` for every prefix.
    """
    sf = sys.sf
    cls = sys.classes()
    index = {p: i for i, p in enumerate(sys.prefixes)}
    by_class = {}
    for p in sys.prefixes:
        by_class.setdefault(cls.class_of[p], []).append(index[p])
    arcs = []
    lam = [sf.zero] * len(sys.prefixes)
    rho = []
    for p in sys.prefixes:
        dp = sys.d(p)
        rho.append(sf.div(sys.value(p, EPS), dp))
        for a in sys.alphabet:
            pa = p + (a,)
            cid = cls.class_of[pa]
            if cid == cls.null_class:
                continue
            w = sf.div(sys.d(pa), dp)
            for r in by_class.get(cid, ()):
                arcs.append((index[p], a, w, r))
    lam[index[EPS]] = sys.d(EPS)
    a = Wfsa(sf, sys.alphabet, len(sys.prefixes), arcs, lam, rho)
    part = StatePartition.from_labels([cls.class_of[p] for p in sys.prefixes])
    return a, part


def make_automaton(sys):
    """Hypothesis WDFSA: the naïve Hankel automaton quotiented by homothetic classes.

    State 0 is the class of ε; the other states follow the order of their
    earliest prefix.  An empty system yields the canonical empty automaton.
    """
    if not sys.prefixes:
        return empty_automaton(sys.sf, sys.alphabet)
    check_empirical(sys)
    naive, part = naive_automaton(sys)
    # Only ε carries initial weight in the naïve automaton, so initial-weight
    # agreement inside ε's class is not required for the quotient.
    return quotient(naive, part, check_initial=False)


def partial_order_leq(sys1, sys2):
    """``sys1 ⪯ sys2``: ``P1 ⊆ P2``, ``S1 ⊆ S2``, one inclusion strict, shared cells equal."""
    p1, p2 = set(sys1.prefixes), set(sys2.prefixes)
    s1, s2 = set(sys1.suffixes), set(sys2.suffixes)
    if not (p1 <= p2 and s1 <= s2) or (p1 == p2 and s1 == s2):
        return False
    sf = sys1.sf
    for r in sys1.row_keys():
        for c in sys1.col_keys():
            v1 = sys1.cells.get((r, c))
            v2 = sys2.cells.get((r, c))
            if v1 is None or v2 is None or not sf.eq(v1, v2):
                return False
    return True


def contains(lang_eval, sys):
    """Does the language ``lang_eval`` agree with every cell of ``sys``?"""
    sf = sys.sf
    for r in sys.row_keys():
        for c in sys.col_keys():
            if not sf.eq(lang_eval(r + c), sys.value(r, c)):
                return False
    return True


def cells_of(sys):
    """Iterate over ``(row, column, weight)`` in table order."""
    return ((r, c, sys.value(r, c)) for r, c in itertools.product(sys.row_keys(), sys.col_keys()))
