import os
import random
import sqlite3

import pytest
from hypothesis import given, settings, strategies as st

from chaseterm.generators import TgdGenSpec, generate_tgds, make_schema
from chaseterm.model import Database, Predicate
from chaseterm.ruleio import (
    ArityError,
    FactSource,
    ParseError,
    SQLiteStore,
    load_database,
    parse_facts_text,
    parse_rules,
    parse_rules_text,
    render_rules,
    write_rules,
)

R2 = Predicate("R", 2)


def test_parse_simple_linear_rule():
    (r,) = parse_rules_text("R(x,y) -> R(y,z)")
    assert [t.label for t in r.frontier] == ["y"]
    assert [t.label for t in r.existentials] == ["z"]
    assert r.is_simple_linear


def test_parse_linear_non_simple_rule():
    (r,) = parse_rules_text("R(x,x) -> R(z,x)")
    assert r.is_linear and not r.is_simple_linear


def test_missing_comma_is_a_syntax_error_at_that_column():
    with pytest.raises(ParseError) as e:
        parse_rules_text("R(x y) -> S(x)")
    assert e.value.line == 1
    assert e.value.column == 5


def test_arity_conflict():
    with pytest.raises(ArityError):
        parse_rules_text("R(x,y) -> S(x)\nS(x,y) -> R(x,y)")


def test_constants_rejected_in_rules():
    with pytest.raises(ParseError):
        parse_rules_text("R(x,A) -> S(x)")


def test_reserved_suffix_rejected():
    with pytest.raises(ParseError):
        parse_rules_text("R__nf(x) -> S(x)")


def test_ids_follow_file_order_and_comments_skip():
    text = "# header\nR(x,y) -> S(x)   # trailing\n\n  S(x) -> R(x,y)\n"
    rs = parse_rules_text(text)
    assert [r.id for r in rs] == [1, 2]


def test_multi_atom_rules_parse():
    (r,) = parse_rules_text("R(x,y), S(y) -> T(x), U(x,z)")
    assert len(r.body) == 2 and len(r.head) == 2


def test_parse_rules_reports_timing(tmp_path):
    f = tmp_path / "r.tgd"
    f.write_text("R(x,y) -> R(y,z)\n")
    rf = parse_rules(f)
    assert len(rf.rules) == 1 and rf.parse_ms >= 0


def test_fact_file_example(tmp_path):
    f = tmp_path / "d.facts"
    f.write_text("R(a,a).\n")
    db, catalog = load_database(f)
    assert db.relations == {R2: {("a", "a")}}
    assert catalog == {R2}


def test_empty_fact_file(tmp_path):
    f = tmp_path / "d.facts"
    f.write_text("")
    db, catalog = load_database(f)
    assert len(db) == 0 and catalog == set()


def test_csv_directory_dedupes(tmp_path):
    rows = ["a,b", "b,c", "a,b"]
    (tmp_path / "R.csv").write_text("\n".join(rows) + "\n")
    db, catalog = load_database(tmp_path)
    assert catalog == {R2}
    # independent count: distinct lines, as `sort -u | wc -l` would give
    assert len(db.relations[R2]) == len(set(rows)) == 2


def test_csv_arity_mismatch(tmp_path):
    (tmp_path / "R.csv").write_text("a,b\nc\n")
    with pytest.raises(ArityError):
        load_database(tmp_path)


def test_fact_errors():
    with pytest.raises(ArityError):
        parse_facts_text("R(a,b).\nR(a).")
    with pytest.raises(ParseError):
        parse_facts_text("R(a,?).")
    with pytest.raises(ParseError):
        parse_facts_text("R(a,b)")


def test_unreadable_source(tmp_path):
    with pytest.raises(OSError):
        load_database(tmp_path / "missing.facts")


def test_fact_source_detection(tmp_path):
    assert FactSource.detect("sqlite:///x.db").kind == "sql-connector"
    assert FactSource.detect(tmp_path).kind == "csv-directory"
    assert FactSource.detect(tmp_path / "f.facts").kind == "fact-file"


def test_sqlite_catalog_skips_empty_tables(tmp_path):
    path = tmp_path / "d.db"
    with SQLiteStore.from_database(Database({R2: [("a", "b")]}), path) as store:
        store.conn.execute("CREATE TABLE S (a1 TEXT)")
        store.conn.commit()
        assert store.catalog() == {R2}
    db, catalog = load_database(f"sqlite:///{path}")
    assert catalog == {R2}
    assert db.relations[R2] == {("a", "b")}


def test_sql_errors_carry_the_query():
    with SQLiteStore(sqlite3.connect(":memory:")) as store:
        with pytest.raises(Exception) as e:
            store.exists("SELECT CASE WHEN EXISTS (SELECT * FROM nope) THEN 1 ELSE 0 END")
        assert "nope" in str(e.value)


def test_fact_order_does_not_matter():
    lines = [f"R(c{i},c{i % 3})." for i in range(20)]
    shuffled = lines[:]
    random.Random(4).shuffle(shuffled)
    assert parse_facts_text("\n".join(lines)) == parse_facts_text("\n".join(shuffled))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["SL", "L"]))
def test_render_parse_round_trip(seed, tclass):
    schema = make_schema(30, 1, 4, seed)
    rules = generate_tgds(TgdGenSpec(tuple(schema), 10, 1, 4, 25, tclass, seed))
    again = parse_rules_text(render_rules(rules))
    assert again == rules
    assert [r.id for r in again] == [r.id for r in rules]


def test_write_rules_round_trip(tmp_path):
    rules = parse_rules_text("R(x,y) -> R(y,z)\nR(x,x) -> S(x)")
    write_rules(rules, tmp_path / "r.tgd")
    assert parse_rules(tmp_path / "r.tgd").rules == rules
