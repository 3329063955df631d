"""Shapes: equality patterns of atom arguments, and extracting them from data.

A shape ``R_(1,2,1)`` is a predicate tagged with an identifier tuple in
restricted-growth form (first entry 1, each later entry at most one above
the running maximum), i.e. a set partition of the argument positions.
"""
from __future__ import annotations

import time
from functools import lru_cache
from typing import NamedTuple

from .model import Atom, Database, Predicate

DEFAULT_CHUNK = 1_000_000


class Shape(NamedTuple):
    predicate: Predicate  # base predicate
    ids: tuple

    def __str__(self):
        return f"{self.predicate.name}_({','.join(map(str, self.ids))})"

    @property
    def simplified(self) -> Predicate:
        """The shape-tagged predicate; its arity is the number of blocks."""
        return Predicate(self.predicate.name, max(self.ids), self.ids)

    @property
    def blocks(self) -> int:
        return max(self.ids)


def unique_and_id(t) -> tuple[tuple, tuple]:
    """Deduplicate ``t`` keeping first occurrences, and the identifier of each entry.

    >>> unique_and_id(("x", "y", "x", "z", "y"))
    (('x', 'y', 'z'), (1, 2, 1, 3, 2))
    """
    first: dict = {}
    ids = []
    for v in t:
        k = first.get(v)
        if k is None:
            k = first[v] = len(first) + 1
        ids.append(k)
    return tuple(first), tuple(ids)


def id_tuple(t) -> tuple:
    return unique_and_id(t)[1]


def shape_of(pred: Predicate, row) -> Shape:
    return Shape(pred, id_tuple(row))


def simplify_atom(a: Atom) -> Atom:
    """``R(t)`` becomes ``R_id(t)(unique(t))``."""
    uniq, ids = unique_and_id(a.args)
    return Atom(Predicate(a.predicate.name, len(uniq), ids), uniq)


@lru_cache(maxsize=None)
def restricted_growth_strings(n: int) -> tuple[tuple, ...]:
    """All identifier tuples of length ``n`` in lexicographic order."""
    if n < 1:
        raise ValueError("arity must be positive")
    out = [(1,)]
    for _ in range(n - 1):
        out = [s + (k,) for s in out for k in range(1, max(s) + 2)]
    return tuple(sorted(out))


def enumerate_shapes(p: Predicate) -> list[Shape]:
    return [Shape(p, ids) for ids in restricted_growth_strings(p.arity)]


def is_coarsening(coarse: tuple, fine: tuple) -> bool:
    """True if every equality of ``fine`` also holds in ``coarse``."""
    seen: dict = {}
    for f, c in zip(fine, coarse):
        if seen.setdefault(f, c) != c:
            return False
    return True


def find_shapes_memory(source, chunk_size: int = DEFAULT_CHUNK, predicates=None):
    """Shapes of all facts, scanning each relation in chunks.

    ``source`` is a :class:`Database` or any object with ``catalog()`` and
    ``iter_chunks(pred, n)`` (e.g. an SQL store). Returns ``(shapes, ms)``.
    """
    t0 = time.perf_counter()
    preds = predicates if predicates is not None else source.catalog()
    shapes = set()
    for pred in sorted(preds):
        seen = set()
        for chunk in source.iter_chunks(pred, chunk_size):
            for row in chunk:
                seen.add(id_tuple(row))
        shapes.update(Shape(pred, ids) for ids in seen)
    return shapes, (time.perf_counter() - t0) * 1000.0


def _column(i):
    return f"a{i}"


def shape_conditions(ids: tuple) -> tuple[list[str], list[str]]:
    """Equality and disequality conditions characterising a shape.

    Equalities chain each column to the first column of its block;
    disequalities separate the first columns of every pair of blocks.
    """
    first: dict[int, int] = {}
    eqs = []
    for pos, b in enumerate(ids, 1):
        if b in first:
            eqs.append(f"{_column(first[b])}={_column(pos)}")
        else:
            first[b] = pos
    heads = [first[b] for b in sorted(first)]
    neqs = [f"{_column(heads[i])}!={_column(heads[j])}"
            for i in range(len(heads)) for j in range(i + 1, len(heads))]
    return eqs, neqs


def shape_query(table: str, conditions: list[str]) -> str:
    where = " AND ".join(conditions) if conditions else "1=1"
    return f"SELECT CASE WHEN EXISTS (SELECT * FROM {table} WHERE {where}) THEN 1 ELSE 0 END"


def lattice_order(arity: int) -> list[tuple]:
    """Finest partitions first; ties broken lexicographically."""
    return sorted(restricted_growth_strings(arity), key=lambda s: (-max(s), s))


def find_shapes_sql(catalog, store, skipped=None):
    """Shapes found by boolean probe queries, pruning over the partition lattice.

    For each shape a relaxed query (equalities only) runs first; the exact
    query (equalities and disequalities) runs only if it succeeds. When the
    relaxed query fails, no row satisfies those equalities, so every coarser
    shape is skipped without a query. Pruned shapes are appended to
    ``skipped`` when a list is given. Returns ``(shapes, ms)``.
    """
    from .ruleio import quote_ident

    t0 = time.perf_counter()
    shapes = set()
    for pred in sorted(catalog):
        table = quote_ident(pred.name)
        dead: list[tuple] = []
        for ids in lattice_order(pred.arity):
            if any(is_coarsening(ids, d) for d in dead):
                if skipped is not None:
                    skipped.append(Shape(pred, ids))
                continue
            eqs, neqs = shape_conditions(ids)
            if not store.exists(shape_query(table, eqs)):
                dead.append(ids)
                continue
            if not neqs or store.exists(shape_query(table, eqs + neqs)):
                shapes.add(Shape(pred, ids))
    return shapes, (time.perf_counter() - t0) * 1000.0


def render_shapes(shapes) -> str:
    return "".join(line + "\n" for line in sorted(str(s) for s in shapes))


def shapes_of_database(db: Database) -> set[Shape]:
    return find_shapes_memory(db)[0]
