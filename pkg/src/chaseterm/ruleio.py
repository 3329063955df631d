"""Reading rule files and fact sources.

Rule syntax, one rule per line::

    A1, ..., Ak -> B1, ..., Bm     # comment

Atoms are ``Name(t1, ..., tn)``. Arguments starting with a lowercase letter
are variables; quantifiers are implicit (head-only variables are
existential). Fact files hold lines ``R(c1,...,cn).`` whose arguments are
all constants. A CSV directory holds one headerless ``<Predicate>.csv`` per
relation. SQL stores are SQLite files addressed by a DSN.
"""
from __future__ import annotations

import csv
import os
import re
import sqlite3
import time
from dataclasses import dataclass, field
from pathlib import Path

from .model import (
    RESERVED_SUFFIX,
    TGD,
    Atom,
    Database,
    Predicate,
    Term,
    VARIABLE,
)

IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
CONST = r"[A-Za-z0-9][A-Za-z0-9_\-]*"

_ATOM = rf"\s*{IDENT}\s*\(\s*{IDENT}(?:\s*,\s*{IDENT})*\s*\)\s*"
_ATOM_LIST = re.compile(rf"{_ATOM}(?:,{_ATOM})*")
_ATOM_PARTS = re.compile(rf"({IDENT})\s*\(([^()]*)\)")
_TOKEN = re.compile(rf"\s*(?:(?P<ident>{IDENT})|(?P<arrow>->)|(?P<punct>[(),])|(?P<bad>\S))")
_FACT = re.compile(rf"^\s*({IDENT})\s*\((.*)\)\s*\.\s*$")
_CONST_RE = re.compile(rf"^{CONST}$")


class ParseError(ValueError):
    def __init__(self, msg, line=None, column=None, path=None):
        self.msg, self.line, self.column, self.path = msg, line, column, path
        where = ""
        if line is not None:
            where = f"{path or '<input>'}:{line}:{column}: "
        super().__init__(where + msg)


class ArityError(ParseError):
    pass


@dataclass
class RuleFile:
    path: str | None
    rules: list[TGD] = field(default_factory=list)
    parse_ms: float = 0.0


class _Parser:
    """Rule-text parser keeping a predicate table to detect arity conflicts."""

    def __init__(self, path=None):
        self.path = path
        self.preds: dict[str, Predicate] = {}
        self.vars: dict[str, Term] = {}

    def predicate(self, name, arity, lineno, col):
        p = self.preds.get(name)
        if p is None:
            if name.endswith(RESERVED_SUFFIX):
                raise ParseError(f"predicate suffix {RESERVED_SUFFIX!r} is reserved",
                                 lineno, col, self.path)
            p = self.preds[name] = Predicate(name, arity)
        elif p.arity != arity:
            raise ArityError(f"predicate {name} used with arity {arity}, earlier {p.arity}",
                             lineno, col, self.path)
        return p

    def variable(self, name, lineno, col):
        if not name[0].islower():
            raise ParseError(f"rules are constant-free; {name!r} is not a variable",
                             lineno, col, self.path)
        t = self.vars.get(name)
        if t is None:
            t = self.vars[name] = Term(VARIABLE, name)
        return t

    def line(self, text, lineno, rule_id):
        text = text.rstrip()
        if text.endswith("."):  # tolerated, as in fact files
            text = text[:-1]
        body_txt, sep, head_txt = text.partition("->")
        if sep and "->" not in head_txt and _ATOM_LIST.fullmatch(body_txt) \
                and _ATOM_LIST.fullmatch(head_txt):
            try:
                body = self._fast_atoms(body_txt, lineno)
                head = self._fast_atoms(head_txt, lineno)
            except ParseError:
                pass
            else:
                return TGD(rule_id, body, head)
        return self._slow_line(text, lineno, rule_id)

    def _fast_atoms(self, text, lineno):
        out = []
        for m in _ATOM_PARTS.finditer(text):
            args = [a.strip() for a in m.group(2).split(",")]
            p = self.predicate(m.group(1), len(args), lineno, m.start() + 1)
            out.append(Atom(p, tuple(self.variable(a, lineno, m.start(2) + 1) for a in args)))
        return out

    def _slow_line(self, text, lineno, rule_id):
        cur = _Cursor(text, lineno, self.path)
        body = self._atoms(cur)
        cur.expect("arrow")
        head = self._atoms(cur)
        cur.expect("end")
        return TGD(rule_id, body, head)

    def _atoms(self, cur):
        out = [self._atom(cur)]
        while cur.peek() == ",":
            cur.advance()
            out.append(self._atom(cur))
        return out

    def _atom(self, cur):
        name, col = cur.expect("ident")
        cur.expect("punct", "(")
        args = [cur.expect("ident")]
        while cur.peek() == ",":
            cur.advance()
            args.append(cur.expect("ident"))
        cur.expect("punct", ")")
        p = self.predicate(name, len(args), cur.lineno, col)
        return Atom(p, tuple(self.variable(a, cur.lineno, c) for a, c in args))


class _Cursor:
    def __init__(self, text, lineno, path):
        self.lineno, self.path = lineno, path
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:  # only trailing whitespace left
                break
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        self.tokens.append(("end", "", len(text) + 1))
        self.i = 0

    def peek(self):
        return self.tokens[self.i][1]

    def advance(self):
        self.i += 1

    def expect(self, kind, value=None):
        k, v, col = self.tokens[self.i]
        if k != kind or (value is not None and v != value):
            raise ParseError(f"expected {value or kind!r}, found {v or 'end of line'!r}",
                             self.lineno, col, self.path)
        self.i += 1
        return v, col


def _logical_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield lineno, line


def parse_rules_text(text: str, path=None) -> list[TGD]:
    parser = _Parser(path)
    return [parser.line(line, lineno, rid)
            for rid, (lineno, line) in enumerate(_logical_lines(text), 1)]


def parse_rules(source) -> RuleFile:
    """Parse a ``.tgd`` file; ids follow file order from 1. Times the parse."""
    path = str(source)
    t0 = time.perf_counter()
    with open(path, encoding="utf-8") as fh:
        rules = parse_rules_text(fh.read(), path)
    ms = (time.perf_counter() - t0) * 1000.0
    return RuleFile(path, rules, ms)


def render_rules(rules) -> str:
    return "".join(f"{r}\n" for r in rules)


def write_rules(rules, path):
    Path(path).write_text(render_rules(rules), encoding="utf-8")


# -- facts --------------------------------------------------------------------

@dataclass
class FactSource:
    kind: str  # "fact-file" | "csv-directory" | "sql-connector"
    locator: str

    @classmethod
    def detect(cls, locator) -> "FactSource":
        locator = str(locator)
        if locator.startswith("sqlite:"):
            return cls("sql-connector", locator)
        if os.path.isdir(locator):
            return cls("csv-directory", locator)
        return cls("fact-file", locator)


def _check_const(tok, lineno, col, path):
    if not _CONST_RE.match(tok):
        raise ParseError(f"non-constant token {tok!r} in fact", lineno, col, path)
    return tok


def parse_facts_text(text: str, path=None) -> Database:
    db = Database()
    arities: dict[str, int] = {}
    for lineno, line in _logical_lines(text):
        m = _FACT.match(line)
        if m is None:
            raise ParseError("expected a fact 'R(c1,...,cn).'", lineno, 1, path)
        name = m.group(1)
        args = []
        offset = m.start(2)
        for tok in m.group(2).split(","):
            args.append(_check_const(tok.strip(), lineno, offset + 1, path))
            offset += len(tok) + 1
        n = arities.setdefault(name, len(args))
        if n != len(args):
            raise ArityError(f"fact for {name} has {len(args)} arguments, expected {n}",
                             lineno, 1, path)
        db.add(Predicate(name, n), tuple(args))
    return db


def load_csv_directory(path) -> Database:
    db = Database()
    for f in sorted(Path(path).glob("*.csv")):
        name = f.stem
        arity = None
        with open(f, newline="", encoding="utf-8") as fh:
            for lineno, row in enumerate(csv.reader(fh), 1):
                if not row:
                    continue
                row = [c.strip() for c in row]
                if arity is None:
                    arity = len(row)
                elif len(row) != arity:
                    raise ArityError(f"row has {len(row)} columns, expected {arity}",
                                     lineno, 1, str(f))
                for c in row:
                    _check_const(c, lineno, 1, str(f))
                db.add(Predicate(name, arity), tuple(row))
    return db


def load_database(source) -> tuple[Database, set[Predicate]]:
    """Load a database and its catalog of non-empty predicates.

    ``source`` is a :class:`FactSource`, a path, or a DSN string.
    """
    if not isinstance(source, FactSource):
        source = FactSource.detect(source)
    if source.kind == "sql-connector":
        with SQLiteStore.connect(source.locator) as store:
            catalog = store.catalog()
            db = Database()
            for pred in sorted(catalog):
                for chunk in store.iter_chunks(pred, 100_000):
                    for row in chunk:
                        db.add(pred, row)
        return db, catalog
    try:
        if source.kind == "csv-directory":
            db = load_csv_directory(source.locator)
        else:
            with open(source.locator, encoding="utf-8") as fh:
                db = parse_facts_text(fh.read(), source.locator)
    except OSError as e:
        raise OSError(f"cannot read fact source {source.locator}: {e}") from e
    return db, db.catalog()


# -- SQL store ------------------------------------------------------------------

def _dsn_path(dsn: str) -> str:
    if dsn.startswith("sqlite:///"):
        return dsn[len("sqlite:///"):] or ":memory:"
    if dsn.startswith("sqlite://"):
        return dsn[len("sqlite://"):] or ":memory:"
    if dsn.startswith("sqlite:"):
        return dsn[len("sqlite:"):] or ":memory:"
    if "://" in dsn:
        raise ValueError(f"unsupported DSN scheme in {dsn!r}; only sqlite is available")
    return dsn


def quote_ident(name: str) -> str:
    return '"' + name.replace('"', '""') + '"'


class SQLiteStore:
    """Relational store: one table per predicate with columns ``a1..an``."""

    def __init__(self, conn: sqlite3.Connection):
        self.conn = conn
        self.queries = 0
        self.log: list[str] = []

    @classmethod
    def connect(cls, dsn: str) -> "SQLiteStore":
        path = _dsn_path(dsn)
        if path != ":memory:" and not os.path.exists(path):
            raise OSError(f"database file not found: {path}")
        return cls(sqlite3.connect(path))

    @classmethod
    def from_database(cls, db: Database, path=":memory:") -> "SQLiteStore":
        store = cls(sqlite3.connect(path))
        store.write(db)
        return store

    def write(self, db: Database):
        cur = self.conn.cursor()
        for pred in sorted(db.relations):
            cols = ", ".join(f"a{i} TEXT" for i in range(1, pred.arity + 1))
            cur.execute(f"DROP TABLE IF EXISTS {quote_ident(pred.name)}")
            cur.execute(f"CREATE TABLE {quote_ident(pred.name)} ({cols})")
            marks = ", ".join("?" * pred.arity)
            cur.executemany(f"INSERT INTO {quote_ident(pred.name)} VALUES ({marks})",
                            sorted(db.relations[pred]))
        self.conn.commit()

    def tables(self) -> list[Predicate]:
        rows = self.conn.execute(
            "SELECT name FROM sqlite_master WHERE type='table' "
            "AND name NOT LIKE 'sqlite_%' ORDER BY name").fetchall()
        out = []
        for (name,) in rows:
            ncols = len(self.conn.execute(f"PRAGMA table_info({quote_ident(name)})").fetchall())
            out.append(Predicate(name, ncols))
        return out

    def catalog(self) -> set[Predicate]:
        """Non-empty tables; probes at most one row per table."""
        out = set()
        for pred in self.tables():
            (ok,) = self.conn.execute(
                f"SELECT EXISTS (SELECT 1 FROM {quote_ident(pred.name)})").fetchone()
            if ok:
                out.add(pred)
        return out

    def exists(self, sql: str) -> bool:
        self.queries += 1
        self.log.append(sql)
        try:
            (v,) = self.conn.execute(sql).fetchone()
        except sqlite3.Error as e:
            raise RuntimeError(f"query failed: {e}; SQL: {sql}") from e
        return bool(v)

    def iter_chunks(self, pred: Predicate, chunk_size: int):
        cur = self.conn.execute(f"SELECT * FROM {quote_ident(pred.name)}")
        while True:
            rows = cur.fetchmany(chunk_size)
            if not rows:
                break
            yield [tuple(str(c) for c in r) for r in rows]

    def close(self):
        self.conn.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
