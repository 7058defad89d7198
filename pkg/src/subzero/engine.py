"""Derivability and regular emptiness by fixpoint saturation.

The saturation works on exact port multisets whose multiplicities are
capped at ``cap``; a conclusion that exceeds the cap is deduplicated down to
it, so every stored profile is genuinely derivable.  Because deduplication
can always lower a multiplicity to any value >= 1, a stored profile stands
for every profile with the same root, bound and support and pointwise
smaller counts.  The search keeps only maximal profiles per
(root, bound, support) group and, when applying a rule at port ``r``,
tries the premise both as stored and with ``r`` deduplicated to a single
copy; together these cover every deduplicated variant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional

from .calculus import (
    Derivation,
    Profile,
    apply_axiom,
    apply_d,
    apply_sl,
    apply_u,
    apply_wl,
)
from .core import EMPTY, Multiset, StateId, SubzeroAutomaton, Transition, mset_remove_one, mset_sum, validate_automaton

DEFAULT_CAP = 3


class NormalProfile(NamedTuple):
    root: StateId
    bound: StateId
    port_set: frozenset

    def fmt(self, a: SubzeroAutomaton) -> str:
        ports = ", ".join(a.fmt_state(q) for q in sorted(self.port_set))
        return f"{a.fmt_state(self.root)} ->{a.fmt_state(self.bound)} {{{ports}}}"


def normalize(p: Profile) -> NormalProfile:
    return NormalProfile(p.root, p.bound, p.ports.support())


def _sort_key(p: Profile):
    return (p.root, p.bound, p.ports.items())


@dataclass(frozen=True)
class Step:
    """How a stored profile was first obtained.

    ``used`` holds, for each premise, the port multiset it is deduplicated
    to before the rule fires.
    """

    rule: str
    premises: tuple[Profile, ...] = ()
    used: tuple[Multiset, ...] = ()
    port: Optional[StateId] = None
    transition: Optional[Transition] = None
    round: int = 0


@dataclass(frozen=True, eq=False)
class SaturationResult:
    automaton: SubzeroAutomaton
    cap: int
    provenance: dict  # Profile -> Step, insertion order is discovery order
    derived: frozenset = field(default=frozenset())

    def profiles(self) -> list[Profile]:
        return list(self.provenance)

    def covering(self, target: Profile | NormalProfile) -> Optional[Profile]:
        """First-found stored profile from which ``target`` follows by deduplication."""
        if isinstance(target, NormalProfile):
            target = Profile(target.root, target.bound, Multiset({q: 1 for q in target.port_set}))
        support = target.ports.support()
        for p in self.provenance:
            if (
                p.root == target.root
                and p.bound == target.bound
                and p.ports.support() == support
                and target.ports <= p.ports
            ):
                return p
        return None

    def covers(self, target: Profile | NormalProfile) -> bool:
        return self.covering(target) is not None


class _Saturator:
    def __init__(self, a: SubzeroAutomaton, cap: int, shuffle_seed: Optional[int]):
        self.a = a
        self.cap = cap
        self.rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
        self.prov: dict[Profile, Step] = {}
        self.alive: set[Profile] = set()
        self.groups: dict[tuple, list[Profile]] = {}
        self.by_root: dict[int, list[Profile]] = {}
        self.by_port: dict[int, list[Profile]] = {}
        self.pending: list[Profile] = []

    def add(self, ports: Multiset, root: int, bound: int, step: Step) -> None:
        cand = Profile(root, bound, ports.capped(self.cap))
        if cand in self.prov:
            return
        g = (root, bound, cand.ports.support())
        members = self.groups.setdefault(g, [])
        if any(cand.ports <= z.ports for z in members if z in self.alive):
            return
        for z in members:
            if z in self.alive and z.ports <= cand.ports:
                self.alive.discard(z)
        members.append(cand)
        self.prov[cand] = step
        self.alive.add(cand)
        self.by_root.setdefault(root, []).append(cand)
        for q in cand.ports.support():
            self.by_port.setdefault(q, []).append(cand)
        self.pending.append(cand)

    @staticmethod
    def variants(w: Multiset, r: int) -> list[Multiset]:
        c = w.count(r)
        return [w] if c == 1 else [w, w.with_count(r, 1)]

    def run(self) -> SaturationResult:
        a = self.a
        for t in a.sorted_transitions():
            self.add(Multiset((t.left, t.right)), t.source, t.source, Step("A", transition=t))
        rnd = 0
        while self.pending:
            rnd += 1
            batch = sorted(self.pending, key=_sort_key)
            if self.rng is not None:
                self.rng.shuffle(batch)
            self.pending = []
            for x in batch:
                if x in self.alive:
                    self.expand(x, rnd)
        derived = frozenset(normalize(p) for p in self.prov)
        return SaturationResult(a, self.cap, dict(self.prov), derived)

    def expand(self, x: Profile, rnd: int) -> None:
        a = self.a
        p, q, w = x
        if p == q and w.count(p) >= 1 and p in a.q_all:
            for used in self.variants(w, p):
                rest = mset_remove_one(used, p)
                if p not in a.q_zero:
                    self.add(rest, p, p, Step("WL", (x,), (used,), round=rnd))
                if rest:
                    self.add(rest, p, p, Step("SL", (x,), (used,), round=rnd))
        # x as the first premise of U
        for r in sorted(w.support()):
            for y in list(self.by_root.get(r, ())):
                if y in self.alive and x in self.alive:
                    self._unify(x, y, r, rnd)
        # x as the second premise of U
        for z in list(self.by_port.get(p, ())):
            if z in self.alive and x in self.alive:
                self._unify(z, x, p, rnd)

    def _unify(self, x: Profile, y: Profile, r: int, rnd: int) -> None:
        for used in self.variants(x.ports, r):
            ports = mset_sum(mset_remove_one(used, r), y.ports)
            step = Step("U", (x, y), (used, y.ports), port=r, round=rnd)
            self.add(ports, x.root, max(x.bound, y.bound, r), step)


def saturate(a: SubzeroAutomaton, cap: int = DEFAULT_CAP, *, shuffle_seed: Optional[int] = None) -> SaturationResult:
    """Least set of (capped) profiles closed under the five rules.

    ``shuffle_seed`` permutes the worklist inside each round; the derived
    normal profiles do not depend on it, only the provenance may.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    problems = validate_automaton(a)
    if problems:
        raise ValueError("invalid automaton: " + "; ".join(problems))
    if shuffle_seed is None:
        return _saturate_cached(a, cap)
    return _Saturator(a, cap, shuffle_seed).run()


@lru_cache(maxsize=256)
def _saturate_cached(a: SubzeroAutomaton, cap: int) -> SaturationResult:
    return _Saturator(a, cap, None).run()


def derivable(a: SubzeroAutomaton, target: Profile, cap: int = DEFAULT_CAP) -> bool:
    """Whether the deduplicated form of ``target`` is derivable.

    Deduplication only lowers multiplicities, so this is implied by
    derivability of ``target`` itself.
    """
    return saturate(a, cap).covers(normalize(target))


def _reduce_to(d: Derivation, ports: Multiset) -> Derivation:
    for q, c in d.conclusion.ports.items():
        want = ports.count(q)
        if want < 1 or want > c:
            raise ValueError(f"cannot deduplicate {d.conclusion.ports!r} down to {ports!r}")
        for _ in range(c - want):
            d = apply_d(d, q)
    if d.conclusion.ports != ports:
        raise ValueError(f"cannot deduplicate {d.conclusion.ports!r} down to {ports!r}")
    return d


def extract_witness(s: SaturationResult, target: Profile | NormalProfile) -> Derivation:
    """Rebuild a derivation of ``target`` from the saturation provenance.

    Sub-derivations used several times are shared objects; the tree they
    denote is what ``derivation_size`` counts.
    """
    if isinstance(target, NormalProfile):
        target = Profile(target.root, target.bound, Multiset({q: 1 for q in target.port_set}))
    source = s.covering(target)
    if source is None:
        raise LookupError("no witness: target not derived")
    a = s.automaton
    memo: dict[Profile, Derivation] = {}

    def build(key: Profile) -> Derivation:
        # iterative post-order so deep provenance chains do not hit the recursion limit
        stack = [key]
        while stack:
            k = stack[-1]
            if k in memo:
                stack.pop()
                continue
            step = s.provenance[k]
            missing = [pk for pk in step.premises if pk not in memo]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            prem = [_reduce_to(memo[pk], u) for pk, u in zip(step.premises, step.used)]
            if step.rule == "A":
                d = apply_axiom(a, step.transition)
            elif step.rule == "WL":
                d = apply_wl(a, prem[0])
            elif step.rule == "SL":
                d = apply_sl(a, prem[0])
            else:
                d = apply_u(prem[0], prem[1], step.port)
            memo[k] = _reduce_to(d, k.ports)
        return memo[key]

    return _reduce_to(build(source), target.ports)


@dataclass(frozen=True)
class Verdict:
    nonempty: bool
    state: StateId
    witness: Optional[Derivation] = None

    def __str__(self) -> str:
        return "NONEMPTY" if self.nonempty else "EMPTY"


def decide_regular_emptiness(a: SubzeroAutomaton, q0: StateId, cap: int = DEFAULT_CAP) -> Verdict:
    """Does the automaton accept some regular tree from ``q0``?

    Nonempty iff some profile ``q0 ->q {}`` is derived, for any bound q.
    """
    if not 0 <= q0 < a.size:
        raise ValueError(f"unknown state {q0}")
    s = saturate(a, cap)
    for p in s.provenance:
        if p.root == q0 and not p.ports:
            return Verdict(True, q0, extract_witness(s, p))
    return Verdict(False, q0)


def closure_violations(s: SaturationResult) -> list[str]:
    """Re-apply every rule to every pair of stored profiles and report
    conclusions that are not covered.  Used as a post-hoc fixpoint check."""
    a = s.automaton
    items = list(s.provenance)
    out = []

    def need(root, bound, ports, what):
        tgt = Profile(root, bound, ports.capped(s.cap))
        if not s.covers(tgt):
            out.append(f"{what} yields uncovered {tgt.fmt(a)}")

    for x in items:
        p, q, w = x
        if p == q and w.count(p) >= 1 and p in a.q_all:
            for c in range(1, w.count(p) + 1):
                rest = mset_remove_one(w.with_count(p, c), p)
                if p not in a.q_zero:
                    need(p, p, rest, f"WL on {x.fmt(a)}")
                if rest:
                    need(p, p, rest, f"SL on {x.fmt(a)}")
        for y in items:
            r = y.root
            for c in range(1, w.count(r) + 1):
                ports = mset_sum(mset_remove_one(w.with_count(r, c), r), y.ports)
                need(p, max(q, y.bound, r), ports, f"U of {x.fmt(a)} with {y.fmt(a)}")
    return out
