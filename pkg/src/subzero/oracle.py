"""Brute-force procedures used to cross-check the engine and run checker.

None of these is a decision procedure: they either find something within
their caps or report that nothing was found within the caps.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .calculus import Derivation, Profile, apply_axiom, apply_d, apply_sl, apply_u, apply_wl
from .core import EMPTY, Multiset, StateId, SubzeroAutomaton, Transition, mset_remove_one, mset_sum
from .realizer import Inner, Port, RunGraph


@dataclass(frozen=True)
class EnumerationCaps:
    size: int = 12
    multiplicity: int = 3
    depth: int = 4

    def __post_init__(self):
        if min(self.size, self.multiplicity, self.depth) < 1:
            raise ValueError("all caps must be >= 1")


class _Layered:
    """Profiles by minimal derivation size, exact multisets, explicit D."""

    def __init__(self, a: SubzeroAutomaton, caps: EnumerationCaps):
        self.a = a
        self.caps = caps
        self.best: dict[Profile, tuple] = {}  # profile -> (size, rule, premises, port, transition)
        self.layers: list[list[Profile]] = [[], []]
        for t in a.sorted_transitions():
            self._put(Profile(t.source, t.source, Multiset((t.left, t.right))), 1, ("A", (), None, t))
        for size in range(2, caps.size + 1):
            self.layers.append([])
            for x in list(self.layers[size - 1]):
                self._unary(x, size)
            for i in range(1, size - 1):
                j = size - 1 - i
                for x in list(self.layers[i]):
                    for y in list(self.layers[j]):
                        if x.ports.count(y.root):
                            conc = Profile(x.root, max(x.bound, y.bound, y.root),
                                           mset_sum(mset_remove_one(x.ports, y.root), y.ports))
                            self._put(conc, size, ("U", (x, y), y.root, None))

    def _put(self, p: Profile, size: int, how: tuple) -> None:
        if p in self.best or any(c > self.caps.multiplicity for _, c in p.ports.items()):
            return
        self.best[p] = (size,) + how
        self.layers[size].append(p)

    def _unary(self, x: Profile, size: int) -> None:
        a = self.a
        p, q, w = x
        if p == q and w.count(p) and p in a.q_all:
            rest = mset_remove_one(w, p)
            if p not in a.q_zero:
                self._put(Profile(p, p, rest), size, ("WL", (x,), None, None))
            if rest:
                self._put(Profile(p, p, rest), size, ("SL", (x,), None, None))
        for r, c in w.items():
            if c >= 2:
                self._put(Profile(p, q, mset_remove_one(w, r)), size, ("D", (x,), r, None))

    def derivation(self, p: Profile) -> Derivation:
        _, rule, prem, port, t = self.best[p]
        if rule == "A":
            return apply_axiom(self.a, t)
        ds = [self.derivation(x) for x in prem]
        if rule == "WL":
            return apply_wl(self.a, ds[0])
        if rule == "SL":
            return apply_sl(self.a, ds[0])
        if rule == "D":
            return apply_d(ds[0], port)
        return apply_u(ds[0], ds[1], port)


def enumerate_profiles(a: SubzeroAutomaton, caps: EnumerationCaps) -> dict[Profile, int]:
    """Every profile with a derivation inside the caps, mapped to its minimal size."""
    lay = _Layered(a, caps)
    return {p: v[0] for p, v in lay.best.items()}


def enumerate_derivations(a: SubzeroAutomaton, target: Profile, caps: EnumerationCaps) -> Optional[Derivation]:
    """Smallest derivation of exactly ``target`` within the caps, or ``None``.

    ``target.bound`` may be ``None`` to accept any bound (smallest size
    first, then lowest bound).
    """
    lay = _Layered(a, caps)
    hits = [
        p for p in lay.best
        if p.root == target.root and p.ports == target.ports
        and (target.bound is None or p.bound == target.bound)
    ]
    if not hits:
        return None
    best = min(hits, key=lambda p: (lay.best[p][0], p.bound))
    return lay.derivation(best)


def enumerate_finite_runs(a: SubzeroAutomaton, root: StateId, depth: int) -> set[Profile]:
    """Profiles of all finite transition-consistent trees of depth <= ``depth``.

    Depth counts inner levels: depth 1 is a single transition with two
    leaf ports.  Depth 0 yields nothing, a bare port is not a partial run.
    """
    memo: dict[tuple[int, int], set[tuple[int, Multiset]]] = {}

    def runs(s: int, d: int) -> set[tuple[int, Multiset]]:
        if d <= 0:
            return set()
        key = (s, d)
        if key in memo:
            return memo[key]
        out: set[tuple[int, Multiset]] = set()
        for t in a.outgoing(s):
            left = [(-1, Multiset((t.left,)))] + sorted(runs(t.left, d - 1), key=_k)
            right = [(-1, Multiset((t.right,)))] + sorted(runs(t.right, d - 1), key=_k)
            for (bl, wl), (br, wr) in itertools.product(left, right):
                out.add((max(s, bl, br), mset_sum(wl, wr)))
        memo[key] = out
        return out

    return {Profile(root, b, w) for b, w in runs(root, depth)}


def _k(item):
    return (item[0], item[1].items())


def _bottom_bad(a: SubzeroAutomaton, g: RunGraph, order: list[int]) -> np.ndarray:
    """Boolean mask over ``order``: node sits in a bottom component peaking in Q_zero."""
    n = len(order)
    idx = {v: i for i, v in enumerate(order)}
    adj = np.zeros((n, n), dtype=bool)
    for v in order:
        for w in g.successors(v):
            adj[idx[v], idx[w]] = True
    reach = adj | np.eye(n, dtype=bool)
    for _ in range(max(1, n.bit_length() + 1)):
        reach = reach | ((reach.astype(np.int64) @ reach.astype(np.int64)) > 0)
    mask = np.zeros(n, dtype=bool)
    for i, v in enumerate(order):
        if isinstance(g.nodes[v], Port):
            continue
        members = np.nonzero(reach[i])[0]
        if all(reach[j, i] for j in members):
            top = max(g.nodes[order[j]].state for j in members)
            mask[i] = top in a.q_zero
    return mask


def mc_zero_measure(a: SubzeroAutomaton, g: RunGraph, samples: int = 100_000,
                    horizon: int = 200, seed: int = 0) -> float:
    """Monte Carlo estimate of the Q_zero branch measure.

    Walkers start at the root, flip a fair coin at every inner node and
    stay put at ports; the estimate is the fraction sitting in a bad bottom
    component after ``horizon`` steps.
    """
    order = g.reachable()
    idx = {v: i for i, v in enumerate(order)}
    left = np.arange(len(order))
    right = np.arange(len(order))
    for v in order:
        n = g.nodes[v]
        if isinstance(n, Inner):
            left[idx[v]] = idx[n.left]
            right[idx[v]] = idx[n.right]
    bad = _bottom_bad(a, g, order)
    rng = np.random.default_rng(seed)
    pos = np.full(samples, idx[g.root])
    for _ in range(horizon):
        coin = rng.integers(0, 2, size=samples, dtype=np.int8).astype(bool)
        pos = np.where(coin, right[pos], left[pos])
    return float(bad[pos].mean())


def random_automaton(rng: random.Random, max_states: int = 3, max_letters: int = 2,
                     max_transitions: int = 6, p_all: float = 0.5, p_zero: float = 0.4,
                     zero: bool = True) -> SubzeroAutomaton:
    """Seeded random automaton; ``zero=False`` gives a parity automaton (empty Q_zero)."""
    n = rng.randint(1, max_states)
    m = rng.randint(1, max_letters)
    pool = [Transition(s, a, l, r) for s in range(n) for a in range(m) for l in range(n) for r in range(n)]
    k = rng.randint(1, min(max_transitions, len(pool)))
    trans = rng.sample(pool, k)
    q_all = {q for q in range(n) if rng.random() < p_all}
    q_zero = {q for q in range(n) if zero and rng.random() < p_zero}
    return SubzeroAutomaton(
        states=tuple(f"s{i}" for i in range(n)),
        alphabet=tuple("abcdefgh"[i] for i in range(m)),
        transitions=frozenset(trans),
        q_all=frozenset(q_all),
        q_zero=frozenset(q_zero),
    )


def random_run_graph(rng: random.Random, max_nodes: int = 8, n_states: int = 3,
                     p_port: float = 0.2, p_forward: float = 0.7) -> tuple[SubzeroAutomaton, RunGraph]:
    """Random run graph plus an automaton that has exactly its transitions.

    Every node hangs off a free child slot of an earlier inner node, so the
    whole graph is reachable; the remaining slots point anywhere.
    """
    size = rng.randint(1, max_nodes)
    kinds = ["inner"] + ["port" if rng.random() < p_port else "inner" for _ in range(size - 1)]
    states = [rng.randrange(n_states) for _ in range(size)]
    child = {}
    free = [(0, 0), (0, 1)]
    for v in range(1, size):
        if len(free) == 1:
            kinds[v] = "inner"  # keep a slot open for the nodes still to come
        child[free.pop(rng.randrange(len(free)))] = v
        if kinds[v] == "inner":
            free += [(v, 0), (v, 1)]
    nodes = {}
    for v in range(size):
        if kinds[v] == "port":
            nodes[v] = Port(states[v])
        else:
            # spare slots lean forward so that several bottom components appear
            kids = [child.get((v, i), rng.randrange(v if rng.random() < p_forward else 0, size)) for i in (0, 1)]
            nodes[v] = Inner(states[v], 0, *kids)
    trans = {
        Transition(n.state, 0, nodes[n.left].state, nodes[n.right].state)
        for n in nodes.values() if isinstance(n, Inner)
    }
    q_all = {q for q in range(n_states) if rng.random() < 0.6}
    q_zero = {q for q in range(n_states) if rng.random() < 0.5}
    a = SubzeroAutomaton(tuple(f"s{i}" for i in range(n_states)), ("a",), frozenset(trans),
                         frozenset(q_all), frozenset(q_zero))
    return a, RunGraph(nodes, 0)


def search_accepting_graphs(a: SubzeroAutomaton, q0: StateId, max_nodes: int) -> Optional[RunGraph]:
    """Exhaustive search for a port-free accepting run graph with at most
    ``max_nodes`` nodes whose root is labelled ``q0``."""
    from .runcheck import is_accepting_run

    trans = a.sorted_transitions()
    for n in range(1, max_nodes + 1):
        for choice in itertools.product(trans, repeat=n):
            if choice[0].source != q0:
                continue
            slots = []
            for t in choice:
                lefts = [i for i in range(n) if choice[i].source == t.left]
                rights = [i for i in range(n) if choice[i].source == t.right]
                if not lefts or not rights:
                    break
                slots.append(list(itertools.product(lefts, rights)))
            else:
                for kids in itertools.product(*slots):
                    nodes = {i: Inner(t.source, t.letter, l, r) for i, (t, (l, r)) in enumerate(zip(choice, kids))}
                    g = RunGraph(nodes, 0)
                    if is_accepting_run(a, g):
                        return g
    return None
