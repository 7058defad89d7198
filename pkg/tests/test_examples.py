from fractions import Fraction

import pytest

from subzero import examples
from subzero.core import validate_automaton


def test_named_are_valid():
    for name, make in examples.NAMED.items():
        assert validate_automaton(make()) == [], name


def test_l3_shape(l3):
    assert l3.states == ("E", "R", "T")
    assert l3.q_all == {1, 2} and l3.q_zero == {2}
    assert len(l3.transitions) == 9 and l3.start is None


def test_schedule_minimal():
    assert examples.l3_block_schedule(3).boundaries == (0, 2, 5, 11)
    f = examples.l3_block_schedule(20).boundaries
    for n in range(1, 21):
        assert f[n] > n + sum(f[:n])
        assert f[n] == n + sum(f[:n]) + 1


def test_schedule_rejects_bad():
    with pytest.raises(ValueError):
        examples.BlockSchedule((0, 1))
    with pytest.raises(ValueError):
        examples.BlockSchedule((1, 5))
    with pytest.raises(ValueError):
        examples.l3_block_schedule(0)


def test_measure_sums():
    total, ok = examples.l3_measure_bound(examples.l3_block_schedule(3))
    assert total == Fraction(25, 64) and ok
    for k in range(1, 21):
        total, ok = examples.l3_measure_bound(examples.l3_block_schedule(k))
        assert ok and total < 1


def test_witness_prefix():
    w = examples.l3_witness_prefix(examples.l3_block_schedule(2))
    assert w.depth == 5
    d = w.as_dict()
    assert len(d) == 2**6 - 1
    assert d[""] == "a" and d["0"] == "a" and d["1"] == "b"
    # a new block starts at depth 2: every entry node is labelled a
    assert all(d[x] == "a" for x in ("00", "01", "10", "11"))
    assert d["110"] == "a" and d["101"] == "b"
    with pytest.raises(ValueError):
        w.label("0" * 6)
