import itertools
from fractions import Fraction as F

import pytest

from wlstar.automaton import Wdfsa
from wlstar.semifield import RATIONAL


def t1_arcs():
    return [
        (0, "a", F(1, 4), 0),
        (0, "b", F(1, 4), 1),
        (1, "a", F(1, 3), 1),
        (1, "b", F(1, 3), 0),
    ]


def make_t1(rho1=F(1, 3), lam=F(1), rho0=F(1, 2)):
    return Wdfsa(RATIONAL, ("a", "b"), 2, t1_arcs(), [lam, F(0)], [rho0, rho1])


@pytest.fixture
def t1():
    return make_t1()


def strings(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def weight_by_paths(a, x):
    """Independent evaluator: sum over explicit paths, no shared code with evaluate()."""
    sf = a.sf
    total = sf.zero
    for q0 in range(a.n_states):
        frontier = [(q0, a.lam[q0])]
        for s in x:
            frontier = [(r, sf.times(w, aw)) for q, w in frontier for (p, sym, aw, r) in a.arcs if p == q and sym == s]
        for q, w in frontier:
            total = sf.plus(total, sf.times(w, a.rho[q]))
    return total


def table_language(table, sf=RATIONAL):
    """Membership function from a dict of string -> weight, 0̄ elsewhere."""
    def membership(x):
        return table.get("".join(x), sf.zero)
    return membership


# one verdict line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def record(criterion, ok, detail=""):
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
