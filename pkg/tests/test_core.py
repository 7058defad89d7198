import itertools

import pytest
from hypothesis import given, strategies as st

from subzero.core import (
    EMPTY,
    AutomatonError,
    Multiset,
    SubzeroAutomaton,
    Transition,
    mset_len,
    mset_meet,
    mset_remove_one,
    mset_sum,
    validate_automaton,
)

# every multiset over 3 states with multiplicities <= 3
SMALL = [Multiset({q: c for q, c in enumerate(cs) if c}) for cs in itertools.product(range(4), repeat=3)]

msets = st.dictionaries(st.integers(0, 5), st.integers(0, 4)).map(Multiset)


def test_basic_counts():
    w = Multiset([2, 0, 2, 1])
    assert w.count(2) == 2 and w.count(5) == 0
    assert w.elements() == [0, 1, 2, 2]
    assert len(w) == mset_len(w) == 4
    assert w.support() == {0, 1, 2}
    assert Multiset({0: 0, 1: 2}) == Multiset([1, 1])
    assert not EMPTY and Multiset([0])


def test_negative_count_rejected():
    with pytest.raises(ValueError):
        Multiset({0: -1})


def test_remove_one():
    assert mset_remove_one(Multiset([1, 1]), 1) == Multiset([1])
    with pytest.raises(KeyError):
        mset_remove_one(Multiset([1]), 0)


def test_laws_exhaustive():
    for w, u in itertools.product(SMALL, repeat=2):
        s = mset_sum(w, u)
        m = mset_meet(w, u)
        assert s == mset_sum(u, w)
        assert m == mset_meet(u, w)
        assert len(s) == len(w) + len(u)
        assert m <= w and m <= u
        assert w <= s
        assert (w <= u) == (m == w)
        for q in range(3):
            assert s.count(q) == w.count(q) + u.count(q)
            assert m.count(q) == min(w.count(q), u.count(q))


def test_associativity_exhaustive():
    for w, u, v in itertools.product(SMALL[::3], repeat=3):
        assert mset_sum(mset_sum(w, u), v) == mset_sum(w, mset_sum(u, v))
        assert mset_meet(mset_meet(w, u), v) == mset_meet(w, mset_meet(u, v))


@given(msets, msets)
def test_hash_consistent(w, u):
    assert (w == u) <= (hash(w) == hash(u))
    assert Multiset(w.elements()) == w


@given(msets, st.integers(1, 3))
def test_normalize_and_cap(w, cap):
    n = w.normalized()
    assert n.support() == w.support() and all(c == 1 for _, c in n.items())
    c = w.capped(cap)
    assert c <= w and c.support() == w.support()
    assert all(x <= cap for _, x in c.items())


def test_from_names_and_lookup(ex12):
    assert ex12.states == ("bot", "q")
    assert ex12.state_id("q") == 1 and ex12.letter_id("b") == 1
    assert ex12.start == 1
    assert Transition(1, 1, 1, 1) in ex12.transitions
    assert [t.letter for t in ex12.outgoing(1)] == [0, 1]
    with pytest.raises(AutomatonError):
        ex12.state_id("nope")


def test_from_names_rejects_unknown():
    with pytest.raises(AutomatonError):
        SubzeroAutomaton.from_names(["p"], ["a"], [("p", "a", "p", "x")])
    with pytest.raises(AutomatonError):
        SubzeroAutomaton.from_names(["p", "p"], ["a"], [])


def test_validate_automaton_reports():
    a = SubzeroAutomaton(("p",), ("a",), frozenset({Transition(0, 0, 0, 3)}), frozenset(), frozenset({5}))
    problems = validate_automaton(a)
    assert any("q_zero" in p for p in problems)
    assert any("transition" in p for p in problems)


def test_q_zero_outside_q_all_is_fine():
    a = SubzeroAutomaton.from_names(["p"], ["a"], [("p", "a", "p", "p")], q_all=[], q_zero=["p"])
    assert validate_automaton(a) == []
