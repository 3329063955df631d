"""Command-line entry point: ``check``, ``chase``, ``generate-db``, ``generate-tgds``, ``bench``."""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .bench import Grid, run_bench, write_csv
from .generators import DataGenSpec, TgdGenSpec, generate_database, generate_tgds, make_schema
from .oracle import run_chase
from .ruleio import ParseError, SQLiteStore, load_database, parse_rules, write_rules
from .shapes import find_shapes_memory, find_shapes_sql, render_shapes
from .simplify import render_simplified
from .model import classify_rule_set
from .termination import CSV_FIELDS, RuleClassError, is_chase_finite_l, is_chase_finite_sl

EXIT_FINITE = 0
EXIT_INFINITE = 10
EXIT_USAGE = 11
EXIT_INPUT = 12
EXIT_CLASS = 13
EXIT_INTERNAL = 14


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; errors here must be > 10."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write(path, text):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text, encoding="utf-8")


def _shapes_for(args, db, store):
    if args.shapes == "in-db":
        if store is not None:
            return find_shapes_sql(store.catalog(), store)
        with SQLiteStore.from_database(db) as mem:
            return find_shapes_sql(mem.catalog(), mem)
    return find_shapes_memory(db, args.chunk_size)


def cmd_check(args):
    rf = parse_rules(args.tgds)
    dsn = args.dsn or (os.environ.get("CHASE_DSN") if args.db is None else None)
    if args.db is None and not dsn:
        raise _UsageError("one of --db or --dsn (or CHASE_DSN) is required")
    mode = args.mode
    if mode == "auto":
        mode = {"SL": "sl", "L": "l"}.get(classify_rule_set(rf.rules))
        if mode is None:
            raise RuleClassError("rules are not linear")

    store = SQLiteStore.connect(dsn) if dsn else None
    try:
        db = None
        if store is None:
            db, catalog = load_database(args.db)
        else:
            catalog = store.catalog()
        if mode == "sl":
            rep = is_chase_finite_sl(catalog, rf.rules, t_parse=rf.parse_ms)
            if args.dump_shapes:
                if db is None:
                    shapes, _ = find_shapes_sql(catalog, store)
                else:
                    shapes, _ = _shapes_for(args, db, None)
                _write(args.dump_shapes, render_shapes(shapes))
        else:
            if db is not None and args.shapes == "in-memory":
                shapes, t_shapes = find_shapes_memory(db, args.chunk_size)
            else:
                shapes, t_shapes = _shapes_for(args, db, store)
            rep = is_chase_finite_l(shapes, rf.rules, t_parse=rf.parse_ms, t_shapes=t_shapes)
            if args.dump_shapes:
                _write(args.dump_shapes, render_shapes(shapes))
            if args.dump_simplified:
                _write(args.dump_simplified, render_simplified(rep.simplified))
    finally:
        if store is not None:
            store.close()
    if args.dump_simplified and mode == "sl":
        _write(args.dump_simplified, render_simplified(rf.rules))
    if args.dump_graph:
        _write(args.dump_graph, rep.graph.dump())

    if args.out == "json":
        print(json.dumps(rep.to_dict(), indent=2, sort_keys=True))
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        w.writerow(rep.csv_row())
    return EXIT_FINITE if rep.finite else EXIT_INFINITE


def cmd_chase(args):
    rf = parse_rules(args.tgds)
    db, _ = load_database(args.db)
    res = run_chase(db, rf.rules, args.max_atoms, args.max_rounds)
    if args.dump_instance:
        _write(args.dump_instance, res.render())
    print(json.dumps({"outcome": res.outcome, "rounds": res.rounds,
                      "atoms": len(res), "fired": res.fired}, sort_keys=True))
    return EXIT_FINITE if res.reached_fixpoint else EXIT_INFINITE


def cmd_generate_db(args):
    spec = DataGenSpec(args.preds, args.min_arity, args.max_arity, args.dsize, args.rsize,
                       args.seed)
    db = generate_database(spec)
    _write(args.out, db.render())
    print(f"{len(db)} facts over {len(db.catalog())} predicates -> {args.out}")
    return 0


def _schema_from_db(path):
    db, _ = load_database(path)
    return sorted(db.catalog())


def cmd_generate_tgds(args):
    if args.schema_db:
        schema = _schema_from_db(args.schema_db)
    else:
        schema = make_schema(args.schema_size, args.min_arity, args.max_arity, args.seed)
    spec = TgdGenSpec(tuple(schema), args.ssize, args.min_arity, args.max_arity, args.tsize,
                      args.tclass, args.seed)
    rules = generate_tgds(spec)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_rules(rules, args.out)
    print(f"{len(rules)} rules -> {args.out}")
    return 0


def cmd_bench(args):
    grid = Grid.load(args.grid) if args.grid else Grid()
    if args.seed is not None:
        grid.seed = args.seed
    n = write_csv(run_bench(grid, args.reps, fixtures=args.dump_fixtures), args.out)
    print(f"{n} rows -> {args.out}")
    return 0


class _UsageError(Exception):
    pass


def build_parser():
    p = _Parser(prog="chaseterm",
                description="Termination of the semi-oblivious chase for linear TGDs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="decide whether the chase terminates")
    c.add_argument("--tgds", required=True)
    c.add_argument("--db", help="fact file, CSV directory or sqlite: DSN")
    c.add_argument("--dsn", help="SQL connection string (default: $CHASE_DSN)")
    c.add_argument("--mode", choices=["sl", "l", "auto"], default="auto")
    c.add_argument("--shapes", choices=["in-memory", "in-db"], default="in-memory")
    c.add_argument("--out", choices=["json", "csv"], default="json")
    c.add_argument("--chunk-size", type=int, default=1_000_000)
    c.add_argument("--dump-graph", metavar="PATH")
    c.add_argument("--dump-shapes", metavar="PATH")
    c.add_argument("--dump-simplified", metavar="PATH")
    c.set_defaults(func=cmd_check)

    ch = sub.add_parser("chase", help="run the semi-oblivious chase with budgets")
    ch.add_argument("--tgds", required=True)
    ch.add_argument("--db", required=True)
    ch.add_argument("--max-atoms", type=int, default=100_000)
    ch.add_argument("--max-rounds", type=int, default=1_000)
    ch.add_argument("--dump-instance", metavar="PATH")
    ch.set_defaults(func=cmd_chase)

    g = sub.add_parser("generate-db", help="write a random fact file")
    g.add_argument("--preds", type=int, default=10)
    g.add_argument("--min-arity", type=int, default=1)
    g.add_argument("--max-arity", type=int, default=5)
    g.add_argument("--dsize", type=int, default=1000)
    g.add_argument("--rsize", type=int, default=100)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate_db)

    t = sub.add_parser("generate-tgds", help="write a random .tgd file")
    t.add_argument("--schema-size", type=int, default=1000)
    t.add_argument("--schema-db", help="take the schema from this database instead")
    t.add_argument("--ssize", type=int, default=50)
    t.add_argument("--min-arity", type=int, default=1)
    t.add_argument("--max-arity", type=int, default=5)
    t.add_argument("--tsize", type=int, default=1000)
    t.add_argument("--tclass", choices=["SL", "L"], default="SL")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_generate_tgds)

    b = sub.add_parser("bench", help="run a benchmark grid and write CSV")
    b.add_argument("--grid", help="JSON grid file (default: desk-scale grid)")
    b.add_argument("--reps", type=int, default=1)
    b.add_argument("--seed", type=int, help="overrides the grid's seed")
    b.add_argument("--out", required=True)
    b.add_argument("--dump-fixtures", metavar="DIR", help="keep generated rules and databases")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as e:
        print(f"chaseterm: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RuleClassError as e:
        print(f"chaseterm: {e}", file=sys.stderr)
        return EXIT_CLASS
    except (ParseError, OSError, ValueError) as e:
        print(f"chaseterm: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:  # noqa: BLE001 - any crash maps to an error code
        print(f"chaseterm: internal error: {e!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
