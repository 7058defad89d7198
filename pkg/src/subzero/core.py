"""Automaton and multiset data model.

States and letters are plain integer indices into the automaton's name
tuples.  The declaration order of states *is* the priority order: state
``i`` has higher priority than state ``j`` iff ``i > j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional

StateId = int
Letter = int


class AutomatonError(ValueError):
    """Raised when an automaton cannot be built from the given names."""


class Transition(NamedTuple):
    source: StateId
    letter: Letter
    left: StateId
    right: StateId


class Multiset:
    """Immutable finite multiset of states.

    Only nonzero multiplicities are stored; iteration is in ascending
    state order so everything built on top stays deterministic.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, items: Iterable[StateId] | Mapping[StateId, int] = ()):
        counts: dict[int, int] = {}
        if isinstance(items, Mapping):
            for q, c in items.items():
                if c < 0:
                    raise ValueError(f"negative multiplicity {c} for state {q}")
                if c:
                    counts[q] = counts.get(q, 0) + c
        else:
            for q in items:
                counts[q] = counts.get(q, 0) + 1
        self._items: tuple[tuple[int, int], ...] = tuple(sorted(counts.items()))
        self._hash = hash(self._items)

    @classmethod
    def _from_items(cls, items: Iterable[tuple[int, int]]) -> "Multiset":
        m = cls.__new__(cls)
        m._items = tuple(sorted((q, c) for q, c in items if c))
        m._hash = hash(m._items)
        return m

    def count(self, q: StateId) -> int:
        for s, c in self._items:
            if s == q:
                return c
        return 0

    def items(self) -> tuple[tuple[int, int], ...]:
        return self._items

    def support(self) -> frozenset[int]:
        return frozenset(q for q, _ in self._items)

    def elements(self) -> list[int]:
        """States with repetition, ascending."""
        return [q for q, c in self._items for _ in range(c)]

    def __len__(self) -> int:
        return sum(c for _, c in self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements())

    def __contains__(self, q: object) -> bool:
        return any(s == q for s, _ in self._items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __le__(self, other: "Multiset") -> bool:
        return all(c <= other.count(q) for q, c in self._items)

    def __ge__(self, other: "Multiset") -> bool:
        return other <= self

    def __repr__(self) -> str:
        return "{" + ",".join(str(q) for q in self.elements()) + "}"

    def __add__(self, other: "Multiset") -> "Multiset":
        return mset_sum(self, other)

    def __and__(self, other: "Multiset") -> "Multiset":
        return mset_meet(self, other)

    def with_count(self, q: StateId, c: int) -> "Multiset":
        d = dict(self._items)
        d[q] = c
        return Multiset._from_items(d.items())

    def normalized(self) -> "Multiset":
        """Every present state with multiplicity exactly one."""
        return Multiset._from_items((q, 1) for q, _ in self._items)

    def capped(self, cap: int) -> "Multiset":
        return Multiset._from_items((q, min(c, cap)) for q, c in self._items)


EMPTY = Multiset()


def mset_meet(w: Multiset, u: Multiset) -> Multiset:
    return Multiset._from_items((q, min(c, u.count(q))) for q, c in w.items())


def mset_sum(w: Multiset, u: Multiset) -> Multiset:
    d = dict(w.items())
    for q, c in u.items():
        d[q] = d.get(q, 0) + c
    return Multiset._from_items(d.items())


def mset_remove_one(w: Multiset, r: StateId) -> Multiset:
    c = w.count(r)
    if c == 0:
        raise KeyError(f"port not present: state {r}")
    return w.with_count(r, c - 1)


def mset_len(w: Multiset) -> int:
    return len(w)


@dataclass(frozen=True)
class SubzeroAutomaton:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    transitions: frozenset[Transition]
    q_all: frozenset[StateId]
    q_zero: frozenset[StateId]
    start: Optional[StateId] = None
    _by_source: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "transitions", frozenset(Transition(*t) for t in self.transitions))
        object.__setattr__(self, "q_all", frozenset(self.q_all))
        object.__setattr__(self, "q_zero", frozenset(self.q_zero))
        by_source: dict[int, list[Transition]] = {}
        for t in sorted(self.transitions):
            by_source.setdefault(t.source, []).append(t)
        object.__setattr__(self, "_by_source", by_source)

    @classmethod
    def from_names(cls, states, alphabet, transitions, q_all=(), q_zero=(), start=None):
        """Build an automaton from identifier names.

        ``states`` must be listed in ascending priority.  Transitions are
        4-tuples ``(source, letter, left, right)`` of names.
        """
        if len(set(states)) != len(states) or len(set(alphabet)) != len(alphabet):
            raise AutomatonError("duplicate state or letter name")
        sidx = {s: i for i, s in enumerate(states)}
        lidx = {a: i for i, a in enumerate(alphabet)}

        def st(name):
            if name not in sidx:
                raise AutomatonError(f"unknown state {name!r}")
            return sidx[name]

        def lt(name):
            if name not in lidx:
                raise AutomatonError(f"unknown letter {name!r}")
            return lidx[name]

        trans = [Transition(st(s), lt(a), st(l), st(r)) for s, a, l, r in transitions]
        if len(set(trans)) != len(trans):
            raise AutomatonError("duplicate transition")
        return cls(
            states=tuple(states),
            alphabet=tuple(alphabet),
            transitions=frozenset(trans),
            q_all=frozenset(st(q) for q in q_all),
            q_zero=frozenset(st(q) for q in q_zero),
            start=None if start is None else st(start),
        )

    @property
    def size(self) -> int:
        return len(self.states)

    def state_id(self, name: str) -> StateId:
        try:
            return self.states.index(name)
        except ValueError:
            raise AutomatonError(f"unknown state {name!r}") from None

    def letter_id(self, name: str) -> Letter:
        try:
            return self.alphabet.index(name)
        except ValueError:
            raise AutomatonError(f"unknown letter {name!r}") from None

    def outgoing(self, q: StateId) -> list[Transition]:
        return self._by_source.get(q, [])

    def sorted_transitions(self) -> list[Transition]:
        return sorted(self.transitions)

    def fmt_state(self, q: StateId) -> str:
        return self.states[q] if 0 <= q < len(self.states) else f"?{q}"

    def fmt_multiset(self, w: Multiset) -> str:
        return "{" + ", ".join(self.fmt_state(q) for q in w.elements()) + "}"


def validate_automaton(a: SubzeroAutomaton) -> list[str]:
    """Return the list of invariant violations; empty means ok."""
    problems = []
    n, m = len(a.states), len(a.alphabet)
    if len(set(a.states)) != n:
        problems.append("states: duplicate state name")
    if len(set(a.alphabet)) != m:
        problems.append("alphabet: duplicate letter name")
    for name in ("q_all", "q_zero"):
        for q in sorted(getattr(a, name)):
            if not 0 <= q < n:
                problems.append(f"{name}: unknown state {q}")
    if a.start is not None and not 0 <= a.start < n:
        problems.append(f"start: unknown state {a.start}")
    for t in a.sorted_transitions():
        for part in ("source", "left", "right"):
            if not 0 <= getattr(t, part) < n:
                problems.append(f"transitions: unknown state in {part} of {tuple(t)}")
        if not 0 <= t.letter < m:
            problems.append(f"transitions: unknown letter in {tuple(t)}")
    return problems
