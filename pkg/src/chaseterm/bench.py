"""Benchmark harness: generate fixtures per profile cell, time the checker, emit CSV."""
from __future__ import annotations

import csv
import gc
import io
import json
import random
import statistics
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from .generators import (
    DataGenSpec,
    TgdGenSpec,
    database_views,
    generate_tgds,
    induced_database,
    make_schema,
)
from .ruleio import SQLiteStore, parse_rules, write_rules
from .shapes import find_shapes_memory, find_shapes_sql
from .termination import is_chase_finite_l, is_chase_finite_sl

CSV_COLUMNS = ["mode", "pred-profile", "rule-profile", "db-size", "rep", "n-rules",
               "n-pred", "n-shapes", "verdict", "t-parse", "t-shapes", "t-graph",
               "t-comp", "t-total"]


@dataclass
class Grid:
    mode: str = "sl"
    predicate_profiles: list = field(default_factory=lambda: [[5, 50], [50, 100], [100, 200]])
    rule_profiles: list = field(default_factory=lambda: [1_000, 10_000, 100_000])
    db_sizes: list = field(default_factory=lambda: [1_000, 10_000, 100_000])
    schema_size: int = 1000
    min_arity: int = 1
    max_arity: int = 5
    db_preds: int = 20
    dsize: int | None = None  # domain size; default twice the largest db size
    shapes: str = "in-memory"
    seed: int = 0

    @classmethod
    def load(cls, path) -> "Grid":
        return cls(**json.loads(Path(path).read_text()))


def _pick(rng, profile):
    if isinstance(profile, (list, tuple)):
        return rng.randint(profile[0], profile[1])
    return int(profile)


def _label(profile):
    if isinstance(profile, (list, tuple)):
        return f"[{profile[0]},{profile[1]}]"
    return str(profile)


@contextmanager
def quiet_gc():
    """Disable the cyclic collector while timing, as ``timeit`` does."""
    was = gc.isenabled()
    gc.collect()
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()


def _row(grid, pp, rp, db_size, rep, report):
    return {
        "mode": grid.mode, "pred-profile": _label(pp), "rule-profile": _label(rp),
        "db-size": db_size, "rep": rep, "n-rules": report.n_rules,
        "n-pred": report.n_predicates, "n-shapes": report.n_shapes,
        "verdict": report.verdict,
        "t-parse": round(report.t_parse, 3), "t-shapes": round(report.t_shapes, 3),
        "t-graph": round(report.t_graph, 3), "t-comp": round(report.t_comp, 3),
        "t-total": round(report.t_total, 3),
    }


def run_sl_cell(rules_path, db=None):
    """Parse, then check against the database induced by the rules."""
    with quiet_gc():
        rf = parse_rules(rules_path)
        report = is_chase_finite_sl(db if db is not None else induced_database(rf.rules),
                                    rf.rules, t_parse=rf.parse_ms)
    return report


def run_bench(grid: Grid, reps: int = 1, workdir=None, fixtures=None):
    """Yield one CSV row (as a dict) per cell, database size and repetition.

    With ``fixtures`` (a directory) the generated rule files and databases
    are kept there; otherwise they live in a temporary directory.
    """
    rng = random.Random(grid.seed)
    schema = make_schema(grid.schema_size, grid.min_arity, grid.max_arity, grid.seed)
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        tmp = Path(tmp)
        keep = Path(fixtures) if fixtures is not None else None
        if keep is not None:
            keep.mkdir(parents=True, exist_ok=True)
        views = {}
        if grid.mode == "l" and grid.rule_profiles and grid.predicate_profiles:
            dsize = grid.dsize or max(2 * max(grid.db_sizes), grid.max_arity)
            spec = DataGenSpec(grid.db_preds, grid.min_arity, grid.max_arity, dsize, 1, grid.seed)
            views = database_views(spec, grid.db_sizes, cover_shapes=True)
            if keep is not None:
                for size, db in views.items():
                    (keep / f"db_{size}.facts").write_text(db.render(), encoding="utf-8")
        for pi, pp in enumerate(grid.predicate_profiles):
            for ri, rp in enumerate(grid.rule_profiles):
                if grid.mode == "l" and views:
                    l_schema = sorted(next(iter(views.values())).relations)
                    ssize = min(_pick(rng, pp), len(l_schema))
                    tspec = TgdGenSpec(tuple(l_schema), ssize, grid.min_arity,
                                       grid.max_arity, _pick(rng, rp), "L", rng.randrange(2**32))
                else:
                    tspec = TgdGenSpec(tuple(schema), _pick(rng, pp), grid.min_arity,
                                       grid.max_arity, _pick(rng, rp), "SL", rng.randrange(2**32))
                path = (keep or tmp) / f"rules_{pi}_{ri}.tgd"
                write_rules(generate_tgds(tspec), path)
                for rep in range(reps):
                    if grid.mode == "sl":
                        yield _row(grid, pp, rp, "", rep, run_sl_cell(path))
                        continue
                    for size, db in sorted(views.items()):
                        yield _row(grid, pp, rp, size, rep,
                                   run_l_cell(path, db, grid.shapes))


def run_l_cell(rules_path, db, strategy="in-memory"):
    with quiet_gc():
        if strategy == "in-db":
            with SQLiteStore.from_database(db) as store:
                shapes, t_shapes = find_shapes_sql(store.catalog(), store)
        else:
            shapes, t_shapes = find_shapes_memory(db)
        rf = parse_rules(rules_path)
        return is_chase_finite_l(shapes, rf.rules, t_parse=rf.parse_ms, t_shapes=t_shapes)


def write_csv(rows, out) -> int:
    """Write rows to a path or text stream; returns the number of data rows."""
    close = False
    if not isinstance(out, io.TextIOBase):
        out = open(out, "w", newline="", encoding="utf-8")
        close = True
    try:
        w = csv.DictWriter(out, fieldnames=CSV_COLUMNS)
        w.writeheader()
        n = 0
        for row in rows:
            w.writerow(row)
            n += 1
        return n
    finally:
        if close:
            out.close()


def median_timings(rows, key="t-total"):
    return statistics.median(r[key] for r in rows)
