"""Dependency graph over predicate positions, with forward and reverse adjacency."""
from __future__ import annotations

import time
from collections import deque

from .model import Position, Predicate


class DependencyGraph:
    """Positions as integer nodes; edges are ``(node, special)`` pairs.

    ``succ[v]`` and ``pred[v]`` mirror each other. At most one normal and one
    special edge is kept per ordered node pair.
    """

    def __init__(self):
        self.nodes: list[Position] = []
        self.index: dict[Position, int] = {}
        self.succ: list[list[tuple[int, bool]]] = []
        self.pred: list[list[tuple[int, bool]]] = []
        self._first: dict[Predicate, int] = {}  # predicate -> node id of position 1
        self._edges: set[tuple[int, int, bool]] = set()

    def base(self, p: Predicate) -> int:
        """Node id of ``(p, 1)``; the positions of ``p`` are consecutive."""
        b = self._first.get(p)
        if b is None:
            b = self._first[p] = len(self.nodes)
            for pos in p.positions():
                self.index[pos] = len(self.nodes)
                self.nodes.append(pos)
                self.succ.append([])
                self.pred.append([])
        return b

    def add_edge(self, u: int, v: int, special: bool):
        key = (u, v, special)
        if key in self._edges:
            return
        self._edges.add(key)
        self.succ[u].append((v, special))
        self.pred[v].append((u, special))

    def node(self, pos: Position) -> int:
        return self.index[pos]

    def predicates(self):
        return list(self._first)

    def edges(self):
        for u, out in enumerate(self.succ):
            for v, special in out:
                yield u, v, special

    @property
    def n_edges(self):
        return len(self._edges)

    def edge_set(self) -> set[tuple[Position, Position, bool]]:
        return {(self.nodes[u], self.nodes[v], s) for u, v, s in self.edges()}

    def dump(self) -> str:
        lines = sorted(
            f"{self.nodes[u]} -[{'special' if s else 'normal'}]-> {self.nodes[v]}"
            for u, v, s in self.edges())
        return "".join(line + "\n" for line in lines)

    def __len__(self):
        return len(self.nodes)


def build_dep_graph(rules):
    """Build the dependency graph in one pass over ``rules``. Returns ``(graph, ms)``.

    For every frontier variable ``x`` and body position ``pi`` of ``x``:
    normal edges go to every head position of ``x``, special edges to every
    head position of every existential variable.
    """
    t0 = time.perf_counter()
    g = DependencyGraph()
    base = g.base
    add = g.add_edge
    for r in rules:
        body_pos: dict = {}
        for a in r.body:
            b = base(a.predicate)
            for i, t in enumerate(a.args):
                body_pos.setdefault(t, []).append(b + i)
        head_pos: dict = {}
        for a in r.head:
            b = base(a.predicate)
            for i, t in enumerate(a.args):
                head_pos.setdefault(t, []).append(b + i)
        if not r.frontier:
            continue
        ex_targets = [p for z in r.existentials for p in head_pos[z]]
        for x in r.frontier:
            targets = head_pos[x]
            for u in body_pos[x]:
                for v in targets:
                    add(u, v, False)
                for v in ex_targets:
                    add(u, v, True)
    return g, (time.perf_counter() - t0) * 1000.0


def forward_reachable(g: DependencyGraph, starts) -> set[int]:
    seen = set(starts)
    todo = deque(seen)
    while todo:
        u = todo.popleft()
        for v, _ in g.succ[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def reverse_reachable_ids(g: DependencyGraph, starts) -> set[int]:
    seen = set(starts)
    todo = deque(seen)
    while todo:
        v = todo.popleft()
        for u, _ in g.pred[v]:
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return seen


def reverse_reachable(g: DependencyGraph, starts) -> set[Position]:
    """Positions from which some start position is reachable (starts included)."""
    ids = reverse_reachable_ids(g, (g.node(p) for p in starts))
    return {g.nodes[i] for i in ids}
