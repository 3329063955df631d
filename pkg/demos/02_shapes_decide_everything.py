"""For linear rules only the equality pattern of each fact matters.

Two databases with the same shapes get the same simplified program, so the
verdict can be read off the shapes alone. The in-database strategy asks
SQLite which shapes occur and skips coarser patterns once a finer one is
absent.
"""
import random

from chaseterm import Database, Predicate, SQLiteStore, dyn_simplification, find_shapes_memory, find_shapes_sql
from chaseterm import parse_rules_text
from chaseterm.shapes import render_shapes

T = Predicate("T", 3)
rng = random.Random(1)
small = Database({T: [("a", "a", "b"), ("c", "d", "e")]})
big = Database({T: [("a", "a", "b")] + [tuple(rng.sample("cdefghijk", 3)) for _ in range(200)]})

for name, db in (("small", small), ("big", big)):
    shapes, ms = find_shapes_memory(db)
    print(f"{name}: {len(db)} facts, shapes found in {ms:.2f} ms")
    print(render_shapes(shapes), end="")

skipped = []
with SQLiteStore.from_database(big) as store:
    sql_shapes, _ = find_shapes_sql(store.catalog(), store, skipped)
print("SQLite agrees with the scan:", sql_shapes == find_shapes_memory(big)[0])
print("patterns never queried because a finer one was absent:", len(skipped))

rules = parse_rules_text("T(x,x,y) -> T(y,z,z)\nT(x,y,y) -> T(x,x,w)")
a = dyn_simplification(find_shapes_memory(small)[0], rules).rule_set()
b = dyn_simplification(find_shapes_memory(big)[0], rules).rule_set()
print("same simplified program for both databases:", a == b)
