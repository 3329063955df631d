"""Special strongly connected components (those containing a special edge)."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .model import Position

TOKEN = -1


@dataclass(frozen=True)
class SpecialSCC:
    members: frozenset  # of Position
    witness: Position
    node_ids: frozenset = frozenset()


def find_special_scc(g):
    """Tarjan's algorithm, iterative, with a token marking special edges.

    A token is pushed onto the component stack each time a special edge is
    traversed, whatever kind of edge it turns out to be. A popped component
    is a candidate when a token was popped with it; candidates are then
    checked for a special edge with both endpoints inside, since a token can
    also come from an edge leaving the component. The witness of each
    component is its root, i.e. its earliest-visited member.

    Returns ``(components, ms)``.
    """
    t0 = time.perf_counter()
    n = len(g.nodes)
    succ = g.succ
    index = [0] * n  # 0 = unvisited; visit numbers start at 1
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    found: list[SpecialSCC] = []
    counter = 0

    for root in range(n):
        if index[root]:
            continue
        counter += 1
        index[root] = low[root] = counter
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            edges = succ[v]
            if i < len(edges):
                work[-1] = (v, i + 1)
                w, special = edges[i]
                if special:
                    stack.append(TOKEN)
                if not index[w]:
                    counter += 1
                    index[w] = low[w] = counter
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] != index[v]:
                continue
            members = []
            tokens = 0
            while True:
                x = stack.pop()
                if x == TOKEN:
                    tokens += 1
                    continue
                on_stack[x] = False
                members.append(x)
                if x == v:
                    break
            if tokens and _has_internal_special(succ, members):
                found.append(SpecialSCC(
                    frozenset(g.nodes[x] for x in members), g.nodes[v], frozenset(members)))
    return found, (time.perf_counter() - t0) * 1000.0


def _has_internal_special(succ, members) -> bool:
    inside = set(members)
    return any(s and w in inside for u in members for w, s in succ[u])


def special_cycle(g, comp: SpecialSCC) -> list[Position]:
    """One cycle through a special edge inside ``comp``, as a closed position list."""
    inside = set(comp.node_ids)
    for u in sorted(inside):
        for w, s in g.succ[u]:
            if s and w in inside:
                # shortest path w -> u inside the component
                parent = {w: None}
                frontier = [w]
                while u not in parent:
                    nxt = []
                    for x in frontier:
                        for y, _ in g.succ[x]:
                            if y in inside and y not in parent:
                                parent[y] = x
                                nxt.append(y)
                    frontier = nxt
                path = [u]
                while path[-1] != w:
                    path.append(parent[path[-1]])
                path.reverse()
                return [g.nodes[u]] + [g.nodes[x] for x in path]
    return []
