"""Profiles, derivation trees and checked rule application.

A profile ``(root, bound, ports)`` says that some partial run has its root
labelled ``root``, no inner state above ``bound`` and exactly the port
multiset ``ports``.  Derivations are trees built from five rules:

    A   axiom from a transition (p, a, q, r)       p ->p {q, r}
    WL  weak looping, p in Q_all minus Q_zero       p ->p {p} + w   /  p ->p w
    SL  strong looping, p in Q_all, w nonempty      p ->p {p} + w   /  p ->p w
    U   unification at port r                       p ->q {r} + w, r ->s v  /  p ->max(q,s,r) w + v
    D   deduplication of port r                     p ->q w + {r, r}  /  p ->q w + {r}
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .core import Multiset, StateId, SubzeroAutomaton, Transition, mset_remove_one, mset_sum

RULES = ("A", "WL", "SL", "U", "D")


class RuleError(ValueError):
    """A rule was applied to premises that do not fit its shape.

    ``reason`` is a short machine-readable tag, e.g. ``"side-condition"``.
    """

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


class Profile(NamedTuple):
    root: StateId
    bound: StateId
    ports: Multiset

    def normal(self) -> "Profile":
        return Profile(self.root, self.bound, self.ports.normalized())

    def fmt(self, a: SubzeroAutomaton) -> str:
        return f"{a.fmt_state(self.root)} ->{a.fmt_state(self.bound)} {a.fmt_multiset(self.ports)}"


@dataclass(frozen=True, eq=False)
class Derivation:
    rule: str
    conclusion: Profile
    premises: tuple["Derivation", ...] = ()
    transition: Optional[Transition] = None
    port: Optional[StateId] = None

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        if self is other:
            return True
        return (
            self.rule == other.rule
            and self.conclusion == other.conclusion
            and self.transition == other.transition
            and self.port == other.port
            and self.premises == other.premises
        )

    def __hash__(self):
        return hash((self.rule, self.conclusion, self.transition, self.port, len(self.premises)))


def apply_axiom(a: SubzeroAutomaton, t: Transition) -> Derivation:
    t = Transition(*t)
    if t not in a.transitions:
        raise RuleError("unknown-transition", f"transition {tuple(t)} is not in the automaton")
    return Derivation("A", Profile(t.source, t.source, Multiset((t.left, t.right))), transition=t)


def _check_loop(a: SubzeroAutomaton, d: Derivation, rule: str) -> tuple[StateId, Multiset]:
    p, q, w = d.conclusion
    if p != q:
        raise RuleError("root-not-bound", f"{rule}: root {p} differs from bound {q}")
    if w.count(p) < 1:
        raise RuleError("port-not-present", f"{rule}: no port of the root state {p}")
    return p, mset_remove_one(w, p)


def apply_wl(a: SubzeroAutomaton, d: Derivation) -> Derivation:
    p, rest = _check_loop(a, d, "WL")
    if p not in a.q_all or p in a.q_zero:
        raise RuleError("side-condition", f"WL: state {p} must be in Q_all and not in Q_zero")
    return Derivation("WL", Profile(p, p, rest), (d,))


def apply_sl(a: SubzeroAutomaton, d: Derivation) -> Derivation:
    p, rest = _check_loop(a, d, "SL")
    if p not in a.q_all:
        raise RuleError("side-condition", f"SL: state {p} must be in Q_all")
    if not rest:
        raise RuleError("empty-remainder", "strong looping requires a remaining port")
    return Derivation("SL", Profile(p, p, rest), (d,))


def apply_u(d1: Derivation, d2: Derivation, r: StateId) -> Derivation:
    p, q, w = d1.conclusion
    r2, s, v = d2.conclusion
    if w.count(r) < 1:
        raise RuleError("port-not-present", f"U: port {r} not present in the first premise")
    if r2 != r:
        raise RuleError("root-mismatch", f"U: second premise has root {r2}, expected {r}")
    conclusion = Profile(p, max(q, s, r), mset_sum(mset_remove_one(w, r), v))
    return Derivation("U", conclusion, (d1, d2), port=r)


def apply_d(d: Derivation, r: StateId) -> Derivation:
    p, q, w = d.conclusion
    if w.count(r) < 2:
        raise RuleError("nothing-to-deduplicate", f"D: port {r} has multiplicity {w.count(r)} < 2")
    return Derivation("D", Profile(p, q, mset_remove_one(w, r)), (d,), port=r)


def derivation_size(d: Derivation) -> int:
    """Number of vertices of the derivation tree (shared subtrees count once per use)."""
    memo: dict[int, int] = {}

    def size(x: Derivation) -> int:
        k = id(x)
        if k not in memo:
            memo[k] = 1 + sum(size(p) for p in x.premises)
        return memo[k]

    return size(d)


def derivation_depth(d: Derivation) -> int:
    memo: dict[int, int] = {}

    def depth(x: Derivation) -> int:
        k = id(x)
        if k not in memo:
            memo[k] = 1 + max((depth(p) for p in x.premises), default=0)
        return memo[k]

    return depth(d)


def _reapply(a: SubzeroAutomaton, d: Derivation) -> Derivation:
    """Rebuild node ``d`` from its own premises; raises RuleError on mismatch of shape."""
    arity = {"A": 0, "WL": 1, "SL": 1, "D": 1, "U": 2}
    if d.rule not in arity:
        raise RuleError("unknown-rule", f"unknown rule {d.rule!r}")
    if len(d.premises) != arity[d.rule]:
        raise RuleError("arity", f"{d.rule} expects {arity[d.rule]} premises, got {len(d.premises)}")
    if d.rule == "A":
        if d.transition is None:
            raise RuleError("missing-witness", "axiom without transition")
        return apply_axiom(a, d.transition)
    if d.rule == "WL":
        return apply_wl(a, d.premises[0])
    if d.rule == "SL":
        return apply_sl(a, d.premises[0])
    if d.port is None:
        raise RuleError("missing-witness", f"{d.rule} without port state")
    if d.rule == "D":
        return apply_d(d.premises[0], d.port)
    return apply_u(d.premises[0], d.premises[1], d.port)


def validate_derivation(a: SubzeroAutomaton, d: Derivation) -> list[str]:
    """Check every node of ``d`` against its rule.

    Returns a list of violations, each prefixed with the path of the
    offending node (``root``, ``root.0``, ``root.1.0`` ...).  Empty means ok.
    """
    problems: list[str] = []
    n = a.size
    seen: set[int] = set()
    stack = [(d, "root")]
    while stack:
        node, path = stack.pop()
        # shared subtrees are checked once
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.extend((p, f"{path}.{i}") for i, p in reversed(list(enumerate(node.premises))))
        root, bound, ports = node.conclusion
        states = [root, bound, *ports.support()]
        if any(not 0 <= s < n for s in states):
            problems.append(f"{path}: conclusion mentions an unknown state")
            continue
        if root > bound:
            problems.append(f"{path}: root above bound")
        try:
            expected = _reapply(a, node)
        except RuleError as e:
            problems.append(f"{path}: {e}")
            continue
        if expected.conclusion != node.conclusion:
            problems.append(
                f"{path}: {node.rule} concludes {node.conclusion.fmt(a)}, "
                f"expected {expected.conclusion.fmt(a)}"
            )
    return problems


def iter_nodes(d: Derivation):
    """Pre-order traversal of the derivation tree."""
    stack = [d]
    while stack:
        x = stack.pop()
        yield x
        stack.extend(reversed(x.premises))
