"""Helpers for building labelled digraphs directly as dependency graphs."""
import random

from chaseterm.depgraph import DependencyGraph
from chaseterm.model import Position, Predicate


def node(i):
    return Position(Predicate(f"N{i}", 1), 1)


def make_graph(n, edges, order=None):
    """Graph on nodes N0..N{n-1}; ``edges`` are (i, j, special) triples."""
    g = DependencyGraph()
    for i in order if order is not None else range(n):
        g.base(Predicate(f"N{i}", 1))
    for i, j, s in edges:
        g.add_edge(g.index[node(i)], g.index[node(j)], s)
    return g


def random_edges(rng: random.Random, n, density=None, p_special=0.3):
    density = density if density is not None else rng.choice([0.02, 0.05, 0.1, 0.2])
    out = set()
    for i in range(n):
        for j in range(n):
            if rng.random() < density:
                out.add((i, j, rng.random() < p_special))
    return sorted(out)
