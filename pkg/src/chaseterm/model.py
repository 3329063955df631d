"""Domain vocabulary: terms, predicates, positions, atoms, rules and databases."""
from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple

CONSTANT = "constant"
NULL = "null"
VARIABLE = "variable"

# Predicates introduced by the empty-frontier rewrite carry this suffix; user
# input may not use it.
RESERVED_SUFFIX = "__nf"


class Term(NamedTuple):
    kind: str
    label: str
    origin: tuple | None = None

    def __str__(self):
        return self.label

    @property
    def is_variable(self):
        return self.kind == VARIABLE


def var(name: str) -> Term:
    return Term(VARIABLE, name)


def const(name: str) -> Term:
    return Term(CONSTANT, name)


class Predicate(NamedTuple):
    """A relation symbol ``name/arity``.

    Shape-tagged predicates (the output of simplification) carry the
    identifier tuple of their shape in ``ids``; their arity is the number of
    distinct identifiers.
    """

    name: str
    arity: int
    ids: tuple = ()

    def __str__(self):
        if self.ids:
            return self.name + "_" + "_".join(map(str, self.ids))
        return self.name

    @property
    def base(self) -> "Predicate":
        if self.ids:
            return Predicate(self.name, len(self.ids))
        return self

    def positions(self):
        return [Position(self, i) for i in range(1, self.arity + 1)]


class Position(NamedTuple):
    predicate: Predicate
    index: int

    def __str__(self):
        return f"({self.predicate},{self.index})"


class Atom(NamedTuple):
    predicate: Predicate
    args: tuple

    def __str__(self):
        return f"{self.predicate}({','.join(t.label for t in self.args)})"

    def variables(self):
        return {t for t in self.args if t.kind == VARIABLE}


def positions_of_variable(atoms, v: Term) -> set[Position]:
    """All positions at which variable ``v`` occurs in ``atoms`` (an atom or a list)."""
    if isinstance(atoms, Atom):
        atoms = [atoms]
    return {
        Position(a.predicate, i)
        for a in atoms
        for i, t in enumerate(a.args, 1)
        if t == v
    }


class TGD:
    """A tuple-generating dependency ``body -> exists z. head``.

    Rules are constant-free: every argument is a variable. ``frontier`` holds
    the variables shared by body and head, ``existentials`` the head-only ones;
    both are kept in first-occurrence order so derived artefacts are
    deterministic. Equality and hashing are structural and ignore ``id``.
    """

    __slots__ = ("id", "body", "head", "frontier", "existentials", "_key")

    def __init__(self, id: int, body, head):
        body = tuple(body)
        head = tuple(head)
        if not body or not head:
            raise ValueError("rule body and head must be non-empty")
        for a in body + head:
            if len(a.args) != a.predicate.arity:
                raise ValueError(f"arity mismatch in atom {a}")
            for t in a.args:
                if t.kind != VARIABLE:
                    raise ValueError(f"rules must be constant-free, found {t.label!r} in {a}")
        self.id = id
        self.body = body
        self.head = head
        body_vars = set()
        for a in body:
            body_vars.update(a.args)
        frontier, existentials, seen = [], [], set()
        for a in head:
            for t in a.args:
                if t in seen:
                    continue
                seen.add(t)
                (frontier if t in body_vars else existentials).append(t)
        self.frontier = tuple(frontier)
        self.existentials = tuple(existentials)
        self._key = (body, head)

    def __eq__(self, other):
        return isinstance(other, TGD) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"TGD({self.id}: {self})"

    def __str__(self):
        return ", ".join(map(str, self.body)) + " -> " + ", ".join(map(str, self.head))

    @property
    def is_linear(self):
        return len(self.body) == 1

    @property
    def is_simple_linear(self):
        if len(self.body) != 1:
            return False
        args = self.body[0].args
        return len(set(args)) == len(args)

    def predicates(self):
        return {a.predicate for a in self.body + self.head}


def classify_rule_set(rules) -> str:
    """Return ``"SL"``, ``"L"`` or ``"neither"`` for a rule set."""
    rules = list(rules)
    if all(r.is_simple_linear for r in rules):
        return "SL"
    if all(r.is_linear for r in rules):
        return "L"
    return "neither"


def schema(rules) -> set[Predicate]:
    out = set()
    for r in rules:
        out.update(r.predicates())
    return out


class Database:
    """A finite set of facts, stored per predicate as sets of constant tuples."""

    def __init__(self, relations=None):
        self.relations: dict[Predicate, set[tuple[str, ...]]] = {}
        for pred, rows in (relations or {}).items():
            for row in rows:
                self.add(pred, row)

    @classmethod
    def from_facts(cls, facts: Iterable[tuple[str, tuple]]) -> "Database":
        """Build from ``(name, (c1, ..., cn))`` pairs."""
        db = cls()
        for name, row in facts:
            db.add(Predicate(name, len(row)), tuple(row))
        return db

    def add(self, pred: Predicate, row: tuple):
        if len(row) != pred.arity:
            raise ValueError(f"tuple {row} does not match arity of {pred.name}/{pred.arity}")
        self.relations.setdefault(pred, set()).add(tuple(row))

    def catalog(self) -> set[Predicate]:
        """Predicates with at least one tuple."""
        return {p for p, rows in self.relations.items() if rows}

    def facts(self) -> Iterator[Atom]:
        for pred, rows in self.relations.items():
            for row in rows:
                yield Atom(pred, tuple(Term(CONSTANT, c) for c in row))

    def iter_chunks(self, pred: Predicate, chunk_size: int):
        rows = list(self.relations.get(pred, ()))
        for i in range(0, len(rows), chunk_size):
            yield rows[i:i + chunk_size]

    def __len__(self):
        return sum(len(rows) for rows in self.relations.values())

    def __eq__(self, other):
        if not isinstance(other, Database):
            return NotImplemented
        return {p: r for p, r in self.relations.items() if r} == {
            p: r for p, r in other.relations.items() if r
        }

    def __repr__(self):
        return f"Database({len(self)} facts over {len(self.catalog())} predicates)"

    def render(self) -> str:
        """Fact-file text, sorted for byte-stable output."""
        lines = sorted(
            f"{p.name}({','.join(row)})."
            for p, rows in self.relations.items()
            for row in rows
        )
        return "".join(line + "\n" for line in lines)


def ensure_frontier(rules):
    """Rewrite a rule set so that every rule has a non-empty frontier.

    If some rule has an empty frontier, every predicate ``P/n`` becomes
    ``P__nf/(n+1)`` and every rule threads one fresh universal variable
    through its body and head atoms. Paired with :func:`extend_database`,
    which appends a single reserved constant to every fact, the rewritten
    chase is the original chase with one constant column added, so finiteness
    is preserved. Returns ``(rules, rewritten?)``; rule sets that already
    satisfy the assumption are returned unchanged.
    """
    rules = list(rules)
    if all(r.frontier for r in rules):
        return rules, False
    out = []
    for r in rules:
        used = {t.label for a in r.body + r.head for t in a.args}
        name = "w"
        while name in used:
            name += "_"
        w = var(name)
        out.append(TGD(r.id, [_extend_atom(a, w) for a in r.body],
                       [_extend_atom(a, w) for a in r.head]))
    return out, True


def _extend_atom(a: Atom, extra: Term) -> Atom:
    return Atom(extend_predicate(a.predicate), a.args + (extra,))


def extend_predicate(p: Predicate) -> Predicate:
    return Predicate(p.name + RESERVED_SUFFIX, p.arity + 1)


EXTRA_CONSTANT = "__star"


def extend_database(db: Database) -> Database:
    out = Database()
    for pred, rows in db.relations.items():
        ep = extend_predicate(pred)
        out.relations[ep] = {row + (EXTRA_CONSTANT,) for row in rows}
    return out
