# Small graph helpers shared by the realizer and the run checker.
from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable


def tarjan(vertices: Iterable[Hashable], succ: Callable[[Hashable], Iterable[Hashable]]) -> list[list]:
    """Strongly connected components, iterative Tarjan.

    Components come out in reverse topological order (sinks first); each
    component lists its vertices in the order they were popped.
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list] = []
    counter = 0
    for v0 in vertices:
        if v0 in index:
            continue
        work = [(v0, iter(succ(v0)))]
        index[v0] = low[v0] = counter
        counter += 1
        stack.append(v0)
        on_stack.add(v0)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def reachable(start, succ) -> list:
    """Vertices reachable from ``start`` in BFS order (``start`` first)."""
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in succ(v):
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def shortest_cycle_through(v, succ, allowed: set) -> list | None:
    """Shortest cycle ``[v, ..., x]`` (x -> v closes it) inside ``allowed``."""
    parent = {}
    queue = deque()
    for w in succ(v):
        if w == v:
            return [v]
        if w in allowed and w not in parent:
            parent[w] = v
            queue.append(w)
    while queue:
        u = queue.popleft()
        for w in succ(u):
            if w == v:
                path = [u]
                while parent[path[-1]] != v:
                    path.append(parent[path[-1]])
                return [v] + path[::-1]
            if w in allowed and w not in parent:
                parent[w] = u
                queue.append(w)
    return None
