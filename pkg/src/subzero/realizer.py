"""Compile derivations into finite run graphs.

A run graph is a finite rooted graph whose unfolding is a regular partial
run.  Inner nodes carry a state, a letter and two successors; port nodes
are leaves where another partial run may later be plugged in.  Ports are
counted as port *nodes*: after a looping rule the unfolding may have
infinitely many leaf occurrences of one port node.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple, Union

from ._graphs import reachable
from .calculus import Derivation, Profile
from .core import Multiset, StateId, SubzeroAutomaton


class Inner(NamedTuple):
    state: StateId
    letter: int
    left: int
    right: int


class Port(NamedTuple):
    state: StateId


Node = Union[Inner, Port]


class StructureError(ValueError):
    """Run graph refers to node ids that do not exist."""


@dataclass(frozen=True)
class RunGraph:
    nodes: Mapping[int, Node]
    root: int

    def successors(self, v: int) -> tuple[int, ...]:
        n = self.nodes[v]
        return (n.left, n.right) if isinstance(n, Inner) else ()

    def check_structure(self) -> None:
        if self.root not in self.nodes:
            raise StructureError(f"root {self.root} is not a node")
        for v, n in self.nodes.items():
            if isinstance(n, Inner):
                for w in (n.left, n.right):
                    if w not in self.nodes:
                        raise StructureError(f"node {v} points to missing node {w}")
            elif not isinstance(n, Port):
                raise StructureError(f"node {v} has unknown kind")

    def reachable(self) -> list[int]:
        self.check_structure()
        return reachable(self.root, self.successors)

    def port_nodes(self) -> list[int]:
        return [v for v in self.reachable() if isinstance(self.nodes[v], Port)]

    def __len__(self) -> int:
        return len(self.nodes)


def canonical(nodes: Mapping[int, Node], root: int) -> RunGraph:
    """Drop unreachable nodes and renumber in BFS order (left before right)."""
    g = RunGraph(nodes, root)
    order = g.reachable()
    ren = {v: i for i, v in enumerate(order)}
    out: dict[int, Node] = {}
    for v in order:
        n = nodes[v]
        out[ren[v]] = Inner(n.state, n.letter, ren[n.left], ren[n.right]) if isinstance(n, Inner) else n
    return RunGraph(out, 0)


def _redirect(nodes: dict, old: int, new: int) -> None:
    del nodes[old]
    for v, n in list(nodes.items()):
        if isinstance(n, Inner) and (n.left == old or n.right == old):
            nodes[v] = n._replace(
                left=new if n.left == old else n.left,
                right=new if n.right == old else n.right,
            )


def _ports_of(g: RunGraph, r: StateId) -> list[int]:
    return sorted(v for v, n in g.nodes.items() if isinstance(n, Port) and n.state == r)


def axiom_graph(t) -> RunGraph:
    return RunGraph({0: Inner(t.source, t.letter, 1, 2), 1: Port(t.left), 2: Port(t.right)}, 0)


def loop_graph(g: RunGraph, p: StateId) -> RunGraph:
    """Send the first port of state ``p`` back to the root."""
    ports = _ports_of(g, p)
    if not ports:
        raise ValueError(f"no port of state {p} to loop")
    nodes = dict(g.nodes)
    _redirect(nodes, ports[0], g.root)
    return canonical(nodes, g.root)


def plug_graph(g1: RunGraph, g2: RunGraph, r: StateId) -> RunGraph:
    """Replace the first port of state ``r`` in ``g1`` by a copy of ``g2``."""
    ports = _ports_of(g1, r)
    if not ports:
        raise ValueError(f"no port of state {r} to plug")
    off = max(g1.nodes) + 1
    nodes = dict(g1.nodes)
    for v, n in g2.nodes.items():
        nodes[v + off] = n._replace(left=n.left + off, right=n.right + off) if isinstance(n, Inner) else n
    _redirect(nodes, ports[0], g2.root + off)
    return canonical(nodes, g1.root)


def merge_ports(g: RunGraph, r: StateId) -> RunGraph:
    ports = _ports_of(g, r)
    if len(ports) < 2:
        raise ValueError(f"fewer than two ports of state {r}")
    nodes = dict(g.nodes)
    _redirect(nodes, ports[1], ports[0])
    return canonical(nodes, g.root)


def realize(a: SubzeroAutomaton, d: Derivation) -> RunGraph:
    """Build a run graph whose profile is the conclusion of ``d``.

    The derivation must be valid for ``a`` (see ``validate_derivation``);
    graphs for shared sub-derivations are built once and copied on use.
    """
    from .calculus import validate_derivation

    problems = validate_derivation(a, d)
    if problems:
        raise ValueError("invalid derivation: " + "; ".join(problems[:3]))
    memo: dict[int, RunGraph] = {}
    stack = [d]
    while stack:
        x = stack[-1]
        if id(x) in memo:
            stack.pop()
            continue
        missing = [p for p in x.premises if id(p) not in memo]
        if missing:
            stack.extend(missing)
            continue
        stack.pop()
        prem = [memo[id(p)] for p in x.premises]
        if x.rule == "A":
            g = axiom_graph(x.transition)
        elif x.rule in ("WL", "SL"):
            g = loop_graph(prem[0], x.conclusion.root)
        elif x.rule == "U":
            g = plug_graph(prem[0], prem[1], x.port)
        else:
            g = merge_ports(prem[0], x.port)
        memo[id(x)] = g
    return memo[id(d)]


def graph_profile(a: SubzeroAutomaton, g: RunGraph) -> Profile:
    order = g.reachable()
    root = g.nodes[g.root]
    if not isinstance(root, Inner):
        raise StructureError("root of a partial run must be an inner node")
    inner = [g.nodes[v].state for v in order if isinstance(g.nodes[v], Inner)]
    ports = Multiset(g.nodes[v].state for v in order if isinstance(g.nodes[v], Port))
    return Profile(root.state, max(inner), ports)
