"""Named automata and the block construction of a non-regular L3 tree.

State orders fixed here:

* ``make_example12``: ``bot < q``.  Q_all is every state, so the order
  only matters for bounds, never for acceptance.
* ``make_l3``: ``E < R < T`` (exists, R, top).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .calculus import Derivation, apply_axiom, apply_d, apply_u, apply_wl
from .core import SubzeroAutomaton, Transition


def make_parity(states, q_all, transitions, alphabet=None, start=None) -> SubzeroAutomaton:
    """Parity automaton as a subzero automaton with empty Q_zero.

    ``states`` are listed in ascending priority; ``transitions`` are name
    4-tuples.  The alphabet defaults to the letters used, in order of first use.
    """
    if alphabet is None:
        alphabet = list(dict.fromkeys(t[1] for t in transitions))
    return SubzeroAutomaton.from_names(states, alphabet, transitions, q_all, (), start)


def make_parity_demo() -> SubzeroAutomaton:
    return make_parity(["q"], ["q"], [("q", "a", "q", "q")], start="q")


def make_example12() -> SubzeroAutomaton:
    return SubzeroAutomaton.from_names(
        ["bot", "q"],
        ["a", "b"],
        [("q", "a", "bot", "bot"), ("q", "b", "q", "q"), ("bot", "a", "bot", "bot"), ("bot", "b", "bot", "bot")],
        q_all=["bot", "q"],
        q_zero=["q"],
        start="q",
    )


def make_l3() -> SubzeroAutomaton:
    states = ["E", "R", "T"]
    trans = []
    for q in states:
        trans += [(q, "a", "T", "T"), (q, "b", "E", "R"), (q, "b", "R", "E")]
    return SubzeroAutomaton.from_names(states, ["a", "b"], trans, q_all=["T", "R"], q_zero=["T"])


def make_plug_fragment() -> SubzeroAutomaton:
    """Only ``p`` has transitions; q1..q4 occur purely as ports.  p is minimal and not in Q_all."""
    return SubzeroAutomaton.from_names(
        ["p", "q1", "q2", "q3", "q4"],
        ["a"],
        [("p", "a", "q1", "q1"), ("p", "a", "p", "q4"), ("p", "a", "p", "p"),
         ("p", "a", "q1", "q2"), ("p", "a", "q3", "q2")],
        start="p",
    )


def plug_fragment_derivation(a: SubzeroAutomaton | None = None) -> Derivation:
    """Derivation of p ->p {q1,q1,q4,q1,q2,q3,q2} following the finite run of the fragment."""
    a = a or make_plug_fragment()
    p, q1, q2, q3, q4 = range(5)

    def ax(l, r):
        return apply_axiom(a, Transition(p, 0, l, r))

    left = apply_u(ax(p, q4), ax(q1, q1), p)
    right = apply_u(apply_u(ax(p, p), ax(q1, q2), p), ax(q3, q2), p)
    return apply_u(apply_u(ax(p, p), left, p), right, p)


def example12_hand_witness(a: SubzeroAutomaton | None = None) -> Derivation:
    """Hand-built emptiness witness for make_example12: the bot loop plugged into both ports."""
    a = a or make_example12()
    bot, q = 0, 1
    chain = apply_wl(a, apply_d(apply_axiom(a, Transition(bot, 0, bot, bot)), bot))
    top = apply_axiom(a, Transition(q, 0, bot, bot))
    return apply_u(apply_u(top, chain, bot), chain, bot)


NAMED = {
    "example12": make_example12,
    "l3": make_l3,
    "parity-demo": make_parity_demo,
    "plug-fragment": make_plug_fragment,
}


@dataclass(frozen=True)
class BlockSchedule:
    boundaries: tuple[int, ...]

    def __post_init__(self):
        f = self.boundaries
        if not f or f[0] != 0:
            raise ValueError("schedule must start with 0")
        for n in range(1, len(f)):
            if not f[n] > n + sum(f[:n]):
                raise ValueError(f"schedule violates the growth condition at {n}")

    @property
    def blocks(self) -> int:
        return len(self.boundaries) - 1


def l3_block_schedule(k: int) -> BlockSchedule:
    """Smallest boundaries with f(0)=0 and f(n) > n + sum of earlier values."""
    if k < 1:
        raise ValueError("need at least one block")
    f = [0]
    for n in range(1, k + 1):
        f.append(n + sum(f) + 1)
    return BlockSchedule(tuple(f))


@dataclass(frozen=True)
class WitnessPrefix:
    """Levels 0..f(k) of the block tree; nodes are strings over ``01``."""

    schedule: BlockSchedule

    @property
    def depth(self) -> int:
        return self.schedule.boundaries[-1]

    def block_start(self, d: int) -> int:
        start = 0
        for b in self.schedule.boundaries:
            if b <= d:
                start = b
        return start

    def label(self, node: str) -> str:
        d = len(node)
        if d > self.depth:
            raise ValueError("node below the prefix")
        # leftmost chain below the block entry: only 0-moves after the entry depth
        return "a" if set(node[self.block_start(d):]) <= {"0"} else "b"

    def nodes(self) -> Iterator[str]:
        for d in range(self.depth + 1):
            for i in range(2**d):
                yield format(i, f"0{d}b") if d else ""

    def as_dict(self) -> dict[str, str]:
        return {x: self.label(x) for x in self.nodes()}


def l3_witness_prefix(schedule: BlockSchedule) -> WitnessPrefix:
    return WitnessPrefix(schedule)


def l3_measure_bound(schedule: BlockSchedule) -> tuple[Fraction, bool]:
    """Exact partial sum of 2^-(f(n+1)-f(n)) over the blocks, and whether it is <= 1."""
    f = schedule.boundaries
    total = sum((Fraction(1, 2 ** (f[n + 1] - f[n])) for n in range(len(f) - 1)), Fraction(0))
    return total, total <= 1
