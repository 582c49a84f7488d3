import math
from fractions import Fraction as F

import pytest

from conftest import make_t1, table_language
from wlstar.automaton import Wdfsa, evaluate, is_trimmed
from wlstar.errors import IncompleteRow, NotAnEmpiricalSystem
from wlstar.hankel import (
    EPS,
    HankelSystem,
    cells_of,
    check_empirical,
    classes,
    contains,
    d,
    homothetic,
    is_closed,
    is_consistent,
    make_automaton,
    partial_order_leq,
    promote_null_rows,
    remove_null_rows,
)
from wlstar.semifield import MINPLUS, RATIONAL


def system(table, alphabet=("a", "b"), prefixes=(EPS,), suffixes=(EPS,), sf=RATIONAL):
    sys = HankelSystem(sf, alphabet, prefixes=prefixes, suffixes=suffixes)
    sys.complete(table_language(table, sf))
    return sys


def t1_system(prefixes=(EPS,), suffixes=(EPS,)):
    t1 = make_t1()
    sys = HankelSystem(RATIONAL, ("a", "b"), prefixes=prefixes, suffixes=suffixes)
    sys.complete(lambda x: evaluate(t1, x))
    return sys


def test_layout():
    sys = HankelSystem(RATIONAL, ("a", "b"))
    assert sys.row_keys() == [(), ("a",), ("b",)]
    assert sys.col_keys() == [(), ("a",), ("b",)]
    with pytest.raises(IncompleteRow):
        sys.value((), ())
    with pytest.raises(ValueError):
        sys.add_prefix(("a", "b"))  # ("a",) is not a prefix yet
    with pytest.raises(ValueError):
        sys.add_suffix(("a", "b"))  # ("b",) is not a suffix yet


def test_complete_counts():
    sys = HankelSystem(RATIONAL, ("a", "b"))
    lang = table_language({"": F(1)})
    assert sys.complete(lang) == 9
    assert sys.complete(lang) == 0
    sys.add_suffix(("a",))
    # new columns are aa and ba; a was already a column
    assert sys.complete(lang) == 3 * 2


def test_d():
    assert d(system({"": F(1, 2), "a": F(1, 4)}, alphabet=("a",), suffixes=[EPS, ("a",)]), EPS) == F(3, 4)
    assert d(system({}), EPS) == 0
    mp = system({"": F(3), "a": F(1)}, suffixes=[EPS, ("a",), ("b",)], sf=MINPLUS)
    assert mp.row(EPS)[:3] == (3, 1, math.inf)
    assert d(mp, EPS) == 1


def test_d_sums_over_suffixes_only():
    sys = system({"": F(1), "a": F(5)})
    assert d(sys, EPS) == 1


def test_homothetic():
    sys = system({"a": F(2), "aa": F(4), "b": F(3), "ba": F(6)})
    assert homothetic(sys, ("a",), ("b",)) == F(2, 3)
    sys = system({"a": F(1), "aa": F(2), "b": F(1), "ba": F(3)})
    assert homothetic(sys, ("a",), ("b",)) is None
    sys = system({"a": F(1)})
    assert homothetic(sys, ("b",), ("b",)) == 1
    assert homothetic(sys, ("a",), ("b",)) is None
    sys = system({})
    assert homothetic(sys, ("a",), ("b",)) == 1


def test_is_closed():
    assert is_closed(t1_system()) == (EPS, "b")
    assert is_closed(system({"": F(1)})) is None
    # first violation in symbol order
    assert is_closed(system({"": F(1), "a": F(1), "aa": F(2)})) == (EPS, "a")


def inconsistent():
    # ε ~ a, but the b-extensions differ at column a
    table = {"": 1, "a": 1, "b": 1, "aa": 1, "ab": 1, "aaa": 1, "aab": 1, "ba": 1, "abb": 1}
    return system({k: F(v) for k, v in table.items()}, prefixes=[EPS, ("a",)])


def test_is_consistent():
    assert is_consistent(t1_system()) is None
    sys = inconsistent()
    assert sys.same_class(EPS, ("a",))
    assert is_consistent(sys) == (EPS, ("a",), "b", ("a",))


def test_classes():
    cls = classes(t1_system())
    assert cls.dim == 1
    sys = system({"a": F(2), "aa": F(4), "b": F(3), "ba": F(6)})
    cls = classes(sys)
    assert cls.class_of[("a",)] == cls.class_of[("b",)]
    assert cls.scale[("b",)] == F(3, 2)


def test_remove_null_rows():
    sys = t1_system(prefixes=[EPS, ("b",)])
    out = remove_null_rows(sys)
    assert out.prefixes == sys.prefixes and out.suffixes == sys.suffixes
    assert list(cells_of(out)) == list(cells_of(sys))
    empty = remove_null_rows(system({}))
    assert empty.prefixes == []
    e = make_automaton(empty)
    assert e.n_states == 1 and e.initial is None


def chain():
    # 0 -a-> 1 -a-> 2, only state 2 is final: ε's row is null on S = {ε}
    return Wdfsa(RATIONAL, ("a", "b"), 3, [(0, "a", F(1), 1), (1, "a", F(1), 2)], [F(1), F(0), F(0)], [F(0), F(0), F(1)])


def test_promote_null_rows():
    t = chain()
    sys = HankelSystem(RATIONAL, ("a", "b"))
    member = lambda x: evaluate(t, x)
    sys.complete(member)
    assert sys.is_null(EPS) and not sys.is_null(("a",))
    added = promote_null_rows(sys, member)
    assert added == [("a",), ("a", "a")]
    assert not sys.is_null(EPS) and d(sys, EPS) == 1


def test_make_automaton_one_state():
    loop = Wdfsa(RATIONAL, ("a",), 1, [(0, "a", F(1, 2), 0)], [F(1)], [F(1, 2)])
    sys = HankelSystem(RATIONAL, ("a",))
    sys.complete(lambda x: evaluate(loop, x))
    h = make_automaton(sys)
    assert h.n_states == 1
    for r, c, v in cells_of(sys):
        assert evaluate(h, r + c) == v


def test_make_automaton_t1():
    sys = t1_system(prefixes=[EPS, ("b",)])
    h = make_automaton(sys)
    assert h.n_states == 2 and h.is_deterministic() and is_trimmed(h)
    for r, c, v in cells_of(sys):
        assert evaluate(h, r + c) == v


def test_check_empirical():
    with pytest.raises(NotAnEmpiricalSystem) as err:
        check_empirical(t1_system())
    assert err.value.predicate == "closed"
    with pytest.raises(NotAnEmpiricalSystem) as err:
        make_automaton(inconsistent())
    assert err.value.predicate in ("closed", "consistent")
    with pytest.raises(NotAnEmpiricalSystem) as err:
        check_empirical(system({}))
    assert err.value.predicate == "non-trivial"


def test_partial_order():
    small = t1_system()
    big = t1_system(prefixes=[EPS, ("b",)])
    assert not partial_order_leq(small, small)
    assert partial_order_leq(small, big)
    assert not partial_order_leq(big, small)
    other = system({"": F(1)}, prefixes=[EPS, ("b",)])
    assert not partial_order_leq(small, other)


def test_contains():
    t1 = make_t1()
    sys = t1_system(prefixes=[EPS, ("b",)])
    assert contains(lambda x: evaluate(t1, x), sys)
    sys.cells[(EPS, EPS)] = F(7)
    assert not contains(lambda x: evaluate(t1, x), sys)
    assert contains(lambda x: evaluate(t1, x), t1_system())


def test_dump_tsv():
    sys = t1_system()
    expected = "\tε\ta\tb\nε\t1/2\t1/8\t1/12\na\t1/8\t1/32\t1/48\nb\t1/12\t1/36\t1/24\n"
    assert sys.dump_tsv() == expected
    sys.add_suffix(("a",))
    assert "?" in sys.dump_tsv()
