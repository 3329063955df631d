import random

import pytest
from hypothesis import given, settings, strategies as st

from chaseterm.model import Atom, Database, Predicate, var
from chaseterm.ruleio import SQLiteStore
from chaseterm.shapes import (
    Shape,
    enumerate_shapes,
    find_shapes_memory,
    find_shapes_sql,
    is_coarsening,
    lattice_order,
    render_shapes,
    shape_conditions,
    simplify_atom,
    unique_and_id,
)

from oracles import bell_numbers, ids_by_definition, partition_to_ids, set_partitions

R2, R3 = Predicate("R", 2), Predicate("R", 3)


def test_unique_and_id_examples():
    assert unique_and_id(("x", "y", "x", "z", "y")) == (("x", "y", "z"), (1, 2, 1, 3, 2))
    assert unique_and_id(("a",)) == (("a",), (1,))
    assert unique_and_id(("a", "a", "a")) == (("a",), (1, 1, 1))


def test_simplify_atom_examples():
    x, z = var("x"), var("z")
    assert simplify_atom(Atom(R2, (x, x))) == Atom(Predicate("R", 1, (1, 1)), (x,))
    assert simplify_atom(Atom(R2, (z, x))) == Atom(Predicate("R", 2, (1, 2)), (z, x))
    a, b = var("a"), var("b")
    got = simplify_atom(Atom(Predicate("P", 3), (a, b, a)))
    assert got == Atom(Predicate("P", 2, (1, 2, 1)), (a, b))
    assert str(got.predicate) == "P_1_2_1"


def test_enumerate_shapes_counts_are_bell_numbers():
    bell = bell_numbers(6)
    assert bell[1:] == [1, 2, 5, 15, 52, 203]
    for n in range(1, 7):
        got = {s.ids for s in enumerate_shapes(Predicate("R", n))}
        want = {partition_to_ids(n, p) for p in set_partitions(range(n))}
        assert got == want
        assert len(got) == bell[n]


def test_shape_ids_are_restricted_growth_strings():
    for s in enumerate_shapes(Predicate("R", 5)):
        assert s.ids[0] == 1
        for i in range(1, len(s.ids)):
            assert s.ids[i] <= 1 + max(s.ids[:i])
        assert s.simplified.arity == len(set(s.ids))


def test_find_shapes_memory_examples():
    assert find_shapes_memory(Database({R2: [("a", "a")]}))[0] == {Shape(R2, (1, 1))}
    assert find_shapes_memory(Database({R2: [("a", "b")]}))[0] == {Shape(R2, (1, 2))}
    assert find_shapes_memory(Database())[0] == set()


def test_find_shapes_memory_chunks():
    rows = [(f"c{i}", f"c{i % 7}") for i in range(100)]
    db = Database({R2: rows})
    assert find_shapes_memory(db, chunk_size=3)[0] == find_shapes_memory(db)[0]


def sql_shapes(db, skipped=None):
    with SQLiteStore.from_database(db) as store:
        before = store.queries
        shapes, _ = find_shapes_sql(store.catalog(), store, skipped)
        return shapes, store.queries - before, store.log


def test_sql_all_distinct_rows_prune_coarser_shapes():
    db = Database({R3: [("a", "b", "c"), ("d", "e", "f")]})
    skipped = []
    shapes, _, log = sql_shapes(db, skipped)
    assert shapes == {Shape(R3, (1, 2, 3))}
    assert Shape(R3, (1, 1, 1)) in skipped
    assert not any("a1=a2 AND a1=a3" in q for q in log)


def test_sql_single_row():
    db = Database({R3: [("v", "v", "w")]})
    assert sql_shapes(db)[0] == {Shape(R3, (1, 1, 2))} == find_shapes_memory(db)[0]


def test_sql_empty_table_issues_no_shape_queries():
    with SQLiteStore.from_database(Database({R2: []})) as store:
        store.conn.execute('CREATE TABLE IF NOT EXISTS "R" (a1 TEXT, a2 TEXT)')
        catalog = store.catalog()
        before = store.queries
        shapes, _ = find_shapes_sql(catalog, store)
        assert shapes == set() and store.queries == before


def test_query_template():
    eqs, neqs = shape_conditions((1, 1, 2))
    assert eqs == ["a1=a2"] and neqs == ["a1!=a3"]
    eqs, neqs = shape_conditions((1, 2, 1, 3))
    assert eqs == ["a1=a3"]
    assert neqs == ["a1!=a2", "a1!=a4", "a2!=a4"]


def test_lattice_order_is_finest_first():
    order = lattice_order(3)
    assert order[0] == (1, 2, 3) and order[-1] == (1, 1, 1)
    assert order == [(1, 2, 3), (1, 1, 2), (1, 2, 1), (1, 2, 2), (1, 1, 1)]


def test_is_coarsening():
    assert is_coarsening((1, 1, 1), (1, 1, 2))
    assert not is_coarsening((1, 2, 1), (1, 1, 2))
    assert is_coarsening((1, 2, 3), (1, 2, 3))


def test_render_shapes_sorted():
    text = render_shapes({Shape(R2, (1, 2)), Shape(R2, (1, 1))})
    assert text == "R_(1,1)\nR_(1,2)\n"


def random_table_db(rng):
    db = Database()
    for k in range(rng.randint(1, 3)):
        arity = rng.randint(1, 5)
        p = Predicate(f"T{k}", arity)
        dom = rng.randint(1, 6)
        for _ in range(rng.randint(0, 25)):
            db.add(p, tuple(f"v{rng.randrange(dom)}" for _ in range(arity)))
    return db


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_sql_strategy_equals_memory_and_pruning_is_sound(seed):
    rng = random.Random(seed)
    db = random_table_db(rng)
    skipped = []
    shapes, _, _ = sql_shapes(db, skipped)
    memory = find_shapes_memory(db)[0]
    assert shapes == memory
    assert not set(skipped) & memory


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from("abc"), st.sampled_from("abc")),
                max_size=12))
def test_memory_shapes_match_definition(rows):
    db = Database({R3: rows})
    want = {Shape(R3, ids_by_definition(r)[1]) for r in rows}
    assert find_shapes_memory(db)[0] == want


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_shapes_are_monotone_under_union(seed):
    rng = random.Random(seed)
    d1, d2 = random_table_db(rng), random_table_db(rng)
    union = Database()
    for d in (d1, d2):
        for p, rows in d.relations.items():
            for row in rows:
                union.add(p, row)
    assert find_shapes_memory(d1)[0] <= find_shapes_memory(union)[0]


@pytest.mark.parametrize("n", range(1, 7))
def test_restricted_growth_count(n):
    assert len(enumerate_shapes(Predicate("R", n))) == bell_numbers(6)[n]
