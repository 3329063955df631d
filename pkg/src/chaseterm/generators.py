"""Synthetic databases and rule sets with controlled shapes."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .model import TGD, Atom, Database, Predicate, var
from .shapes import restricted_growth_strings

EXISTENTIAL_PROBABILITY = 0.10


@dataclass(frozen=True)
class DataGenSpec:
    preds: int
    min_arity: int
    max_arity: int
    dsize: int
    rsize: int
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.min_arity <= self.max_arity:
            raise ValueError("need 1 <= min arity <= max arity")
        if min(self.preds, self.dsize, self.rsize) < 1:
            raise ValueError("preds, dsize and rsize must be positive")
        if self.dsize < self.max_arity:
            raise ValueError("domain smaller than max arity cannot fill an all-distinct shape")


@dataclass(frozen=True)
class TgdGenSpec:
    schema: tuple
    ssize: int
    min_arity: int
    max_arity: int
    tsize: int
    tclass: str = "SL"
    seed: int = 0

    def __post_init__(self):
        if self.tclass not in ("SL", "L"):
            raise ValueError("tclass must be SL or L")
        eligible = [p for p in self.schema if self.min_arity <= p.arity <= self.max_arity]
        if not 1 <= self.ssize <= len(eligible):
            raise ValueError(f"ssize {self.ssize} exceeds {len(eligible)} eligible predicates")


def make_schema(n, min_arity, max_arity, seed=0, prefix="P") -> list[Predicate]:
    rng = random.Random(seed)
    return [Predicate(f"{prefix}{i}", rng.randint(min_arity, max_arity)) for i in range(1, n + 1)]


def generate_tuples(rng: random.Random, arity: int, dsize: int):
    """Endless stream of tuples, each drawn through a uniformly chosen shape."""
    shapes = restricted_growth_strings(arity)
    while True:
        ids = rng.choice(shapes)
        values = rng.sample(range(dsize), max(ids))
        yield tuple(f"c{values[b - 1]}" for b in ids)


def _covering_rows(rng, arity, dsize):
    """One tuple of every shape of the arity, in random order."""
    shapes = list(restricted_growth_strings(arity))
    rng.shuffle(shapes)
    out = []
    for ids in shapes:
        values = rng.sample(range(dsize), max(ids))
        out.append(tuple(f"c{values[b - 1]}" for b in ids))
    return out


def database_views(spec: DataGenSpec, sizes, cover_shapes=False):
    """Databases holding the first ``n`` distinct tuples per predicate, for each ``n``.

    All views are prefixes of one generated database, so smaller views are
    subsets of larger ones. ``spec.rsize`` is ignored in favour of ``sizes``.
    With ``cover_shapes`` each relation starts with one tuple of every shape,
    so all views of at least Bell(max arity) tuples share one shape set.
    """
    sizes = sorted(sizes)
    rng = random.Random(spec.seed)
    schema = make_schema(spec.preds, spec.min_arity, spec.max_arity, rng.randrange(2**32))
    ordered: dict[Predicate, list] = {}
    for p in schema:
        stream = generate_tuples(rng, p.arity, spec.dsize)
        rows = _covering_rows(rng, p.arity, spec.dsize) if cover_shapes else []
        seen = set(rows)
        attempts = 0
        while len(rows) < sizes[-1]:
            row = next(stream)
            attempts += 1
            if attempts > 50 * sizes[-1] + 1000:
                raise ValueError(f"cannot draw {sizes[-1]} distinct tuples for {p.name}/{p.arity}")
            if row not in seen:
                seen.add(row)
                rows.append(row)
        ordered[p] = rows
    return {n: Database({p: rows[:n] for p, rows in ordered.items()}) for n in sizes}


def generate_database(spec: DataGenSpec) -> Database:
    """``preds`` predicates with ``rsize`` distinct tuples each."""
    return database_views(spec, [spec.rsize])[spec.rsize]


def _shape_body(rng, pred: Predicate, tclass: str):
    if tclass == "SL":
        ids = tuple(range(1, pred.arity + 1))
    else:
        ids = rng.choice(restricted_growth_strings(pred.arity))
    return [var(f"x{b}") for b in ids]


def generate_rule(rng, preds, tclass="SL", rule_id=1, heads=1, p_exist=EXISTENTIAL_PROBABILITY,
                  allow_empty_frontier=False) -> TGD:
    """One linear rule; redrawn until its frontier is non-empty unless allowed."""
    while True:
        body_pred = rng.choice(preds)
        body_args = _shape_body(rng, body_pred, tclass)
        body_vars = list(dict.fromkeys(body_args))
        head = []
        n_ex = 0
        for _ in range(heads):
            hp = rng.choice(preds)
            args = []
            for _ in range(hp.arity):
                if rng.random() < p_exist:
                    n_ex += 1
                    args.append(var(f"z{n_ex}"))
                else:
                    args.append(rng.choice(body_vars))
            head.append(Atom(hp, tuple(args)))
        rule = TGD(rule_id, [Atom(body_pred, tuple(body_args))], head)
        if rule.frontier or allow_empty_frontier:
            return rule


def generate_tgds(spec: TgdGenSpec) -> list[TGD]:
    rng = random.Random(spec.seed)
    eligible = [p for p in spec.schema if spec.min_arity <= p.arity <= spec.max_arity]
    chosen = rng.sample(eligible, spec.ssize)
    return [generate_rule(rng, chosen, spec.tclass, i) for i in range(1, spec.tsize + 1)]


def induced_database(rules) -> Database:
    """One all-distinct fact per predicate of the rules."""
    from .model import schema

    db = Database()
    for p in schema(rules):
        db.add(p, tuple(f"c{i}" for i in range(1, p.arity + 1)))
    return db


def random_instance(rng: random.Random, tclass="SL", max_preds=5, max_arity=3,
                    max_rules=10, max_facts=20, max_heads=2, p_exist=0.25,
                    p_empty_frontier=0.05):
    """A small random (database, rules) pair for oracle comparisons.

    A few rules are allowed an empty frontier so the rewrite that removes
    them is exercised too. Facts use a small domain so repeated constants,
    and hence non-trivial shapes, are common.
    """
    preds = [Predicate(f"R{i}", rng.randint(1, max_arity))
             for i in range(1, rng.randint(1, max_preds) + 1)]
    rules = []
    for i in range(1, rng.randint(1, max_rules) + 1):
        allow = rng.random() < p_empty_frontier
        rules.append(generate_rule(rng, preds, tclass, i, rng.randint(1, max_heads),
                                   p_exist, allow_empty_frontier=allow))
    db = Database()
    domain = [f"c{i}" for i in range(rng.randint(1, 4))]
    for _ in range(rng.randint(0, max_facts)):
        p = rng.choice(preds)
        db.add(p, tuple(rng.choice(domain) for _ in range(p.arity)))
    return db, rules
