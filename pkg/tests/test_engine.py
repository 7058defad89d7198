import random
import time

import pytest

from subzero import engine, examples, oracle
from subzero.calculus import Profile, derivation_size, validate_derivation
from subzero.core import EMPTY, Multiset, SubzeroAutomaton, Transition
from subzero.engine import NormalProfile, closure_violations, decide_regular_emptiness, derivable, extract_witness, saturate

from conftest import random_corpus


def test_l3_empty_everywhere(l3):
    for q in range(l3.size):
        v = decide_regular_emptiness(l3, q)
        assert not v.nonempty and v.witness is None and str(v) == "EMPTY"


def test_example12_nonempty(ex12):
    v = decide_regular_emptiness(ex12, ex12.start)
    assert v.nonempty and str(v) == "NONEMPTY"
    assert validate_derivation(ex12, v.witness) == []
    assert v.witness.conclusion.ports == EMPTY
    assert derivation_size(v.witness) <= 12


def test_example12_bot_nonempty(ex12):
    assert decide_regular_emptiness(ex12, 0).nonempty


def test_example12_self_port_derivable(ex12):
    # q -b-> (q, q) then deduplicate: the finite tree is a legitimate partial run
    assert derivable(ex12, Profile(1, 1, Multiset([1])))
    assert not derivable(ex12, Profile(1, 0, Multiset([1])))


def test_plug_fragment_target(frag):
    target = Profile(0, 0, Multiset([1, 2, 3, 4]))
    assert derivable(frag, target)
    s = saturate(frag)
    d = extract_witness(s, target)
    assert validate_derivation(frag, d) == []
    assert d.conclusion == target


def test_plug_fragment_is_empty(frag):
    # p is not in Q_all, so any infinite path through p rejects; and every
    # finite derivation keeps q-ports open because q1..q4 have no transitions
    assert not decide_regular_emptiness(frag, 0).nonempty


def test_multiplicity_cap_matters(frag):
    """With cap 1 (pure set semantics) the target is lost: two different
    continuations must be plugged into two copies of the port p."""
    target = Profile(0, 0, Multiset([1, 2, 3, 4]))
    assert not derivable(frag, target, cap=1)
    assert derivable(frag, target, cap=2)
    caps = oracle.EnumerationCaps(size=20, multiplicity=1)
    assert oracle.enumerate_derivations(frag, target, caps) is None


def test_parity_demo():
    a = examples.make_parity_demo()
    assert decide_regular_emptiness(a, 0).nonempty
    # same automaton with the only state odd is empty
    b = examples.make_parity(["q"], [], [("q", "a", "q", "q")])
    assert not decide_regular_emptiness(b, 0).nonempty


def test_zero_state_needs_escape():
    # a single Q_zero state looping on itself: every branch stays in q, measure 1
    a = SubzeroAutomaton.from_names(["q"], ["a"], [("q", "a", "q", "q")], q_all=["q"], q_zero=["q"])
    assert not decide_regular_emptiness(a, 0).nonempty


def test_deterministic_result(ex12):
    s1 = engine._Saturator(ex12, 3, None).run()
    s2 = engine._Saturator(ex12, 3, None).run()
    assert list(s1.provenance) == list(s2.provenance)


def test_shuffle_invariance():
    for a in random_corpus(40, base=500):
        base = saturate(a).derived
        for seed in range(3):
            assert saturate(a, shuffle_seed=seed).derived == base


def test_closure_holds():
    for a in random_corpus(40, base=700) + [examples.make_l3(), examples.make_example12(), examples.make_plug_fragment()]:
        assert closure_violations(saturate(a)) == []


def test_stored_profiles_are_derivable():
    for a in random_corpus(30, base=900):
        s = saturate(a)
        for p in list(s.provenance)[:40]:
            d = extract_witness(s, p)
            assert validate_derivation(a, d) == []
            assert d.conclusion == p


def test_extract_missing(l3):
    with pytest.raises(LookupError):
        extract_witness(saturate(l3), Profile(0, 0, EMPTY))


def test_covering_accepts_normal(frag):
    s = saturate(frag)
    assert s.covers(NormalProfile(0, 0, frozenset({1, 2, 3, 4})))


def test_bad_inputs(ex12):
    with pytest.raises(ValueError):
        decide_regular_emptiness(ex12, 9)
    with pytest.raises(ValueError):
        saturate(ex12, cap=0)
    broken = SubzeroAutomaton(("p",), ("a",), frozenset({Transition(0, 0, 0, 2)}), frozenset(), frozenset())
    with pytest.raises(ValueError):
        saturate(broken)


def test_l3_fast(l3):
    t = time.perf_counter()
    engine._Saturator(l3, engine.DEFAULT_CAP, None).run()
    assert time.perf_counter() - t < 1.0
