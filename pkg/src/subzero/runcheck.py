"""Acceptance checks for (partial) runs given as finite graphs.

The measure of a set of branches is taken under the coin-flipping measure:
from an inner node each successor is chosen with probability 1/2 and port
nodes absorb.  Almost every branch either stops at a port or ends up in a
bottom strongly connected component of inner nodes and visits all of its
nodes infinitely often, so its maxinf is that component's maximum state.
Branches that never settle form a null set and are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ._graphs import reachable, shortest_cycle_through, tarjan
from .core import SubzeroAutomaton, Transition
from .realizer import Inner, Port, RunGraph, StructureError


@dataclass(frozen=True)
class AcceptanceReport:
    transitions_ok: bool
    all_counterexample: Optional[list[int]]
    zero_measure: Fraction
    transition_errors: list = field(default_factory=list)
    port_count: int = 0

    @property
    def all_ok(self) -> bool:
        return self.all_counterexample is None

    @property
    def zero_ok(self) -> bool:
        return self.zero_measure == 0

    @property
    def ok(self) -> bool:
        return self.transitions_ok and self.all_ok and self.zero_ok


def transition_errors(a: SubzeroAutomaton, g: RunGraph) -> list[str]:
    errs = []
    for v in g.reachable():
        n = g.nodes[v]
        if isinstance(n, Inner):
            t = Transition(n.state, n.letter, g.nodes[n.left].state, g.nodes[n.right].state)
            if t not in a.transitions:
                errs.append(f"node {v}: no transition {tuple(t)}")
    return errs


def check_all_condition(a: SubzeroAutomaton, g: RunGraph) -> Optional[list[int]]:
    """``None`` if every reachable cycle peaks in Q_all, else a violating cycle."""
    order = g.reachable()
    inner = [v for v in order if isinstance(g.nodes[v], Inner)]
    for q in range(a.size):
        if q in a.q_all:
            continue
        allowed = {v for v in inner if g.nodes[v].state <= q}
        if not any(g.nodes[v].state == q for v in allowed):
            continue

        def succ(v, allowed=allowed):
            return [w for w in g.successors(v) if w in allowed]

        comps = tarjan(sorted(allowed), succ)
        for comp in sorted(comps, key=min):
            members = set(comp)
            tops = sorted(v for v in comp if g.nodes[v].state == q)
            best = None
            for v in tops:
                cyc = shortest_cycle_through(v, succ, members)
                if cyc is not None and (best is None or len(cyc) < len(best)):
                    best = cyc
            if best is not None:
                return best
    return None


def bottom_components(g: RunGraph) -> list[list[int]]:
    """Bottom SCCs of the reachable part, ports included as singletons."""
    order = g.reachable()
    comps = tarjan(order, g.successors)
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    out = []
    for i, c in enumerate(comps):
        if all(comp_of[w] == i for v in c for w in g.successors(v)):
            out.append(sorted(c))
    return out


def _is_bad(a: SubzeroAutomaton, g: RunGraph, comp) -> bool:
    if isinstance(g.nodes[comp[0]], Port):
        return False
    return max(g.nodes[v].state for v in comp) in a.q_zero


def _solve(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over the rationals (nonzero pivot, row order)."""
    n = len(rhs)
    m = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular absorption system")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def zero_measure_exact(a: SubzeroAutomaton, g: RunGraph) -> Fraction:
    """Measure of the branches whose maxinf lies in Q_zero, as an exact fraction."""
    order = g.reachable()
    value: dict[int, Fraction] = {}
    for comp in bottom_components(g):
        val = Fraction(1) if _is_bad(a, g, comp) else Fraction(0)
        for v in comp:
            value[v] = val
    transient = [v for v in order if v not in value]
    if not transient:
        return value[g.root]
    idx = {v: i for i, v in enumerate(transient)}
    n = len(transient)
    half = Fraction(1, 2)
    matrix = [[Fraction(0)] * n for _ in range(n)]
    rhs = [Fraction(0)] * n
    for v in transient:
        i = idx[v]
        matrix[i][i] += 1
        for w in g.successors(v):
            if w in idx:
                matrix[i][idx[w]] -= half
            else:
                rhs[i] += half * value[w]
    sol = _solve(matrix, rhs)
    return value[g.root] if g.root in value else sol[idx[g.root]]


def bad_bottom_reachable(a: SubzeroAutomaton, g: RunGraph) -> bool:
    """Structural test for a positive zero-measure, by plain reachability.

    A node lies in a bottom component iff it can be reached back from every
    node it reaches.  Kept independent of the SCC code used above.
    """
    order = g.reachable()
    reach = {v: set(reachable(v, g.successors)) for v in order}
    for v in order:
        if all(v in reach[u] for u in reach[v]):
            comp = sorted(reach[v])
            if _is_bad(a, g, comp):
                return True
    return False


def check_partial_run(a: SubzeroAutomaton, g: RunGraph) -> AcceptanceReport:
    """Full acceptance report; raises ``StructureError`` on dangling ids."""
    g.check_structure()
    errs = transition_errors(a, g)
    return AcceptanceReport(
        transitions_ok=not errs,
        all_counterexample=check_all_condition(a, g),
        zero_measure=zero_measure_exact(a, g),
        transition_errors=errs,
        port_count=len(g.port_nodes()),
    )


def is_accepting_run(a: SubzeroAutomaton, g: RunGraph) -> bool:
    try:
        report = check_partial_run(a, g)
    except StructureError:
        return False
    return report.port_count == 0 and report.ok
