from fractions import Fraction as F

import pytest

from conftest import make_t1, strings, weight_by_paths
from wlstar.automaton import (
    StatePartition,
    Wdfsa,
    Wfsa,
    coaccessible,
    count_paths,
    empty_automaton,
    equivalent,
    evaluate,
    is_transition_regular,
    is_trimmed,
    minimal_state_count_bruteforce,
    paths_yielding,
    quotient,
    random_wdfsa,
    trim,
)
from wlstar.errors import (
    AlphabetMismatch,
    NonDeterministicTarget,
    NotTransitionRegular,
    SemifieldMismatch,
    UnknownSymbol,
)
from wlstar.hankel import HankelSystem, naive_automaton
from wlstar.semifield import BOOLEAN, MINPLUS, RATIONAL


def loop_target():
    return Wdfsa(RATIONAL, ("a",), 1, [(0, "a", F(1, 2), 0)], [F(1)], [F(1, 2)])


def test_evaluate_t1(t1):
    assert evaluate(t1, "") == F(1, 2)
    assert evaluate(t1, "ab") == F(1, 48)
    for x in strings("ab", 5):
        assert evaluate(t1, x) == weight_by_paths(t1, x)


def test_evaluate_empty():
    e = empty_automaton(RATIONAL, ("a", "b"))
    assert all(evaluate(e, x) == 0 for x in strings("ab", 4))


def test_unknown_symbol(t1):
    with pytest.raises(UnknownSymbol):
        evaluate(t1, "ac")


def test_zero_arcs_dropped():
    a = Wfsa(RATIONAL, ("a",), 1, [(0, "a", F(0), 0)], [F(1)], [F(1)])
    assert list(a.arcs) == []


def test_nondeterministic_rejected():
    with pytest.raises(NonDeterministicTarget):
        Wdfsa(RATIONAL, ("a",), 2, [(0, "a", F(1), 0), (0, "a", F(1), 1)], [F(1), F(0)], [F(1), F(1)])
    with pytest.raises(NonDeterministicTarget):
        Wdfsa(RATIONAL, ("a",), 2, [], [F(1), F(1)], [F(1), F(1)])


def test_paths_deterministic(t1):
    for x in strings("ab", 4):
        assert len(paths_yielding(t1, x)) == 1
    nobody = Wdfsa(RATIONAL, ("a", "b"), 1, [(0, "a", F(1), 0)], [F(1)], [F(1)])
    assert paths_yielding(nobody, "ab") == []


def _loop_naive():
    sys = HankelSystem(RATIONAL, ("a",), prefixes=[(), ("a",)])
    sys.complete(lambda x: evaluate(loop_target(), x))
    return naive_automaton(sys)


def test_paths_naive_two():
    naive, _ = _loop_naive()
    # ε and a are equivalent prefixes, so "a" is read along ε→ε and ε→a
    recs = paths_yielding(naive, "a")
    assert len(recs) == 2
    assert count_paths(naive, ("a",)) == 2
    assert {r.states for r in recs} == {(0, 0), (0, 1)}


def test_trim(t1):
    assert trim(t1).arcs == t1.arcs and trim(t1).n_states == 2
    extra = Wdfsa(RATIONAL, ("a", "b"), 3, list(t1.arcs) + [(2, "a", F(1), 0)], [F(1), F(0), F(0)], [F(1, 2), F(1, 3), F(1)])
    tr = trim(extra)
    assert tr.n_states == 2 and equivalent(tr, t1) is None
    dead = Wdfsa(RATIONAL, ("a",), 2, [(0, "a", F(1), 1)], [F(1), F(0)], [F(0), F(0)])
    assert trim(dead).initial is None
    assert is_trimmed(t1) and not is_trimmed(extra)


def test_trim_preserves_language():
    for seed in range(10):
        a = random_wdfsa(4, "ab", seed, RATIONAL)
        b = trim(a)
        for x in strings("ab", 8):
            assert evaluate(a, x) == evaluate(b, x)


def test_transition_regular(t1):
    assert is_transition_regular(t1, StatePartition.identity(2))
    check = is_transition_regular(t1, StatePartition([[0, 1]]))
    assert not check
    assert check.witness[0] == "rho"


def test_quotient_identity(t1):
    q = quotient(t1, StatePartition.identity(2))
    assert q.arcs == t1.arcs and q.lam == t1.lam and q.rho == t1.rho
    with pytest.raises(NotTransitionRegular):
        quotient(t1, StatePartition([[0, 1]]))


def test_quotient_path_multiplicity():
    naive, part = _loop_naive()
    q = quotient(naive, part, check_initial=False)
    assert q.n_states == 1 and q.is_deterministic()
    for x in strings("a", 6):
        n = count_paths(naive, x)
        if n:
            assert evaluate(naive, x) == RATIONAL.nfold(n, evaluate(q, x))


def test_equivalent(t1):
    assert equivalent(t1, t1) is None
    assert equivalent(t1, make_t1(rho1=F(1, 4))) == ("b",)
    pushed = make_t1(lam=F(2), rho0=F(1, 4), rho1=F(1, 6))
    assert equivalent(t1, pushed) is None
    for x in strings("ab", 8):
        assert evaluate(t1, x) == evaluate(pushed, x)


def test_equivalent_against_empty(t1):
    e = empty_automaton(RATIONAL, ("a", "b"))
    assert equivalent(e, t1) == ()
    assert equivalent(e, e) is None


def test_equivalent_errors(t1):
    with pytest.raises(AlphabetMismatch):
        equivalent(t1, loop_target())
    other = Wdfsa(MINPLUS, ("a", "b"), 1, [], [F(0)], [F(0)])
    with pytest.raises(SemifieldMismatch):
        equivalent(t1, other)


def _shortest_by_enumeration(a, b, max_len):
    for x in strings(a.alphabet, max_len):
        if not a.sf.eq(evaluate(a, x), evaluate(b, x)):
            return x
    return None


@pytest.mark.parametrize("seed", range(40))
def test_equivalent_shortest(seed):
    n = 1 + seed % 4
    a = random_wdfsa(n, "ab", seed, RATIONAL)
    b = random_wdfsa(n, "ab", seed + 1000, RATIONAL)
    bound = n * n + n
    got = equivalent(a, b)
    want = _shortest_by_enumeration(a, b, bound)
    assert got == want


def test_equivalent_support_asymmetry():
    # same weights where both are defined; b also reads "b"
    a = Wdfsa(RATIONAL, ("a", "b"), 1, [(0, "a", F(1, 2), 0)], [F(1)], [F(1)])
    b = Wdfsa(RATIONAL, ("a", "b"), 2, [(0, "a", F(1, 2), 0), (0, "b", F(1), 1)], [F(1), F(0)], [F(1), F(3)])
    assert equivalent(a, b) == ("b",)


def test_random_wdfsa():
    a = random_wdfsa(1, "a", 3, BOOLEAN)
    assert a.n_states == 1 and a.alphabet == ("a",)
    assert random_wdfsa(5, "abc", 9, RATIONAL).arcs == random_wdfsa(5, "abc", 9, RATIONAL).arcs
    for seed in range(20):
        a = random_wdfsa(6, "abc", seed, RATIONAL)
        assert a.is_deterministic() and is_trimmed(a)
        assert coaccessible(a) == set(range(6))
        assert all(w != 0 for _, _, w, _ in a.arcs)


def test_minimal_state_count(t1):
    assert minimal_state_count_bruteforce(t1, 4) == 2
    assert minimal_state_count_bruteforce(loop_target(), 4) == 1
    assert minimal_state_count_bruteforce(empty_automaton(RATIONAL, ("a",)), 4) == 0
    # two states with proportional right languages collapse into one class
    two = Wdfsa(RATIONAL, ("a",), 2, [(0, "a", F(1, 3), 1), (1, "a", F(3), 0)], [F(1), F(0)], [F(1), F(3)])
    assert minimal_state_count_bruteforce(two, 4) == 1
