"""Reference semi-oblivious chase and a literal weak-acyclicity checker.

Both are deliberately naive: they exist to check the graph-based decision
procedures, not to be fast.
"""
from __future__ import annotations

import hashlib
from operator import itemgetter
from collections import defaultdict, deque
from dataclasses import dataclass

from .model import CONSTANT, NULL, TGD, Atom, Database, Predicate, Term

NULL_PREFIX = "_:n"

FIXPOINT = "fixpoint"
BUDGET_EXCEEDED = "budget-exceeded"


def frontier_fingerprint(rule: TGD, h: dict) -> str:
    """Canonical text of ``h`` restricted to the frontier, sorted by variable."""
    return ";".join(f"{x.label}={h[x].label}" for x in sorted(rule.frontier, key=lambda t: t.label))


def null_label(rule_id, fingerprint: str, var_name: str) -> str:
    digest = hashlib.blake2b(f"{rule_id}|{fingerprint}|{var_name}".encode(), digest_size=10)
    return NULL_PREFIX + digest.hexdigest()


def make_null(rule: TGD, fingerprint: str, z: Term) -> Term:
    return Term(NULL, null_label(rule.id, fingerprint, z.label), (rule.id, fingerprint, z.label))


@dataclass(frozen=True)
class Trigger:
    rule: TGD
    h: tuple  # pairs (variable, term)

    @classmethod
    def of(cls, rule, h: dict):
        return cls(rule, tuple(sorted(h.items(), key=lambda kv: kv[0].label)))

    def identity(self):
        """Semi-oblivious identity: the rule and the frontier image."""
        return self.rule.id, frontier_fingerprint(self.rule, dict(self.h))


def trigger_result(t: Trigger) -> set[Atom]:
    """Head atoms of the trigger with each existential replaced by its named null."""
    h = dict(t.h)
    fp = frontier_fingerprint(t.rule, h)
    mu = {x: h[x] for x in t.rule.frontier}
    for z in t.rule.existentials:
        mu[z] = make_null(t.rule, fp, z)
    return {Atom(a.predicate, tuple(mu[x] for x in a.args)) for a in t.rule.head}


def match(atom: Atom, fact_args: tuple):
    """Homomorphism from a body atom to a fact, or None."""
    h = {}
    for x, c in zip(atom.args, fact_args):
        if h.setdefault(x, c) != c:
            return None
    return h


class _Terms:
    """Interns constants and nulls as consecutive ints.

    A null is keyed by its origin (rule id, frontier image as ints, variable
    name). Its frontier terms always have smaller ids, so labels can be
    computed in id order without recursion.
    """

    def __init__(self):
        self.ids: dict = {}
        self.keys: list = []
        self._labels: list = []

    def intern(self, key) -> int:
        i = self.ids.get(key)
        if i is None:
            i = self.ids[key] = len(self.keys)
            self.keys.append(key)
        return i

    def const(self, label: str) -> int:
        return self.intern(label)

    def label(self, i: int) -> str:
        labels = self._labels
        while len(labels) <= i:
            key = self.keys[len(labels)]
            if isinstance(key, str):
                labels.append(key)
            else:
                rule_id, names, fp, z = key
                text = ";".join(f"{n}={labels[v]}" for n, v in zip(names, fp))
                labels.append(null_label(rule_id, text, z))
        return labels[i]

    def term(self, i: int) -> Term:
        key = self.keys[i]
        if isinstance(key, str):
            return Term(CONSTANT, key)
        self.label(i)
        rule_id, names, fp, z = key
        text = ";".join(f"{n}={self._labels[v]}" for n, v in zip(names, fp))
        return Term(NULL, self._labels[i], (rule_id, text, z))


class ChaseResult:
    """Outcome of a bounded chase run; labels are only computed when asked for."""

    def __init__(self, outcome, rounds, rows, terms, fired):
        self.outcome = outcome
        self.rounds = rounds
        self.fired = fired
        self._rows = rows  # Predicate -> set of int tuples
        self._terms = terms
        self._facts = None

    @property
    def reached_fixpoint(self):
        return self.outcome == FIXPOINT

    def __len__(self):
        return sum(len(v) for v in self._rows.values())

    @property
    def facts(self) -> dict:
        """Predicate -> set of label tuples."""
        if self._facts is None:
            lab = self._terms.label
            self._facts = {p: {tuple(lab(i) for i in row) for row in rows}
                           for p, rows in self._rows.items() if rows}
        return self._facts

    def atoms(self) -> set[Atom]:
        """The instance as atoms; nulls carry their origin triple."""
        term = self._terms.term
        return {Atom(p, tuple(term(i) for i in row))
                for p, rows in self._rows.items() for row in rows}

    def render(self) -> str:
        lines = sorted(f"{p}({','.join(row)})." for p, rows in self.facts.items() for row in rows)
        return "".join(line + "\n" for line in lines)


def _getter(indices):
    """Like ``itemgetter`` but always returns a tuple."""
    if len(indices) == 1:
        i = indices[0]
        return lambda seq: (seq[i],)
    if not indices:
        return lambda seq: ()
    return itemgetter(*indices)


class _Compiled:
    """A rule as index templates over the tuple of its distinct body variables.

    Head templates index ``vals + nulls``: the values of the distinct body
    variables followed by the nulls made for the existentials.
    """

    def __init__(self, r: TGD):
        self.rule = r
        self.vars = list(dict.fromkeys(t for a in r.body for t in a.args))
        slot = {v: k for k, v in enumerate(self.vars)}
        n = len(self.vars)
        frontier = sorted(r.frontier, key=lambda t: t.label)
        self.names = tuple(x.label for x in frontier)
        self.frontier_of = _getter([slot[x] for x in frontier])
        self.exnames = [z.label for z in r.existentials]
        ex = {z: n + k for k, z in enumerate(r.existentials)}
        self.heads = [(a.predicate, _getter([slot[t] if t in slot else ex[t] for t in a.args]))
                      for a in r.head]
        if len(r.body) == 1:
            args = r.body[0].args
            first = {}
            self.eqs = [(i, first.setdefault(t, i)) for i, t in enumerate(args)
                        if first.setdefault(t, i) != i]
            take = [first[v] for v in self.vars]
            self.take = None if take == list(range(len(args))) else _getter(take)


def run_chase(db: Database, rules, max_atoms=100_000, max_rounds=1_000) -> ChaseResult:
    """Breadth-first semi-oblivious chase.

    Round ``i`` applies every trigger on the instance after round ``i-1``.
    Rules here may have several body atoms; triggers involving only atoms
    from before the previous round were already applied, so each round only
    enumerates matches that touch the previous round's new atoms. Stops at a
    round that adds nothing (``fixpoint``) or as soon as either budget is
    reached, possibly in the middle of a round (``budget-exceeded``).
    """
    if max_atoms < 1 or max_rounds < 1:
        raise ValueError("budgets must be positive")
    rules = list(rules)
    terms = _Terms()
    facts: dict[Predicate, set] = defaultdict(set)
    # intern in a fixed order so ids, and thus set iteration, ignore str hashing
    for p in sorted(db.relations):
        for row in sorted(db.relations[p]):
            facts[p].add(tuple(terms.const(c) for c in row))
    size = sum(len(v) for v in facts.values())
    by_body_pred = defaultdict(list)
    for r in rules:
        c = _Compiled(r)
        for i, a in enumerate(r.body):
            by_body_pred[a.predicate].append((c, i))
    fired: dict = defaultdict(set)  # rule id -> frontier images already fired
    delta = {p: set(rows) for p, rows in facts.items()}
    rounds = 0

    def result(outcome, extra=None):
        if extra:
            for p, rows in extra.items():
                facts[p] |= rows
        return ChaseResult(outcome, rounds, dict(facts), terms, sum(map(len, fired.values())))

    if size >= max_atoms:
        return result(BUDGET_EXCEEDED)
    while True:
        if rounds >= max_rounds:
            return result(BUDGET_EXCEEDED)
        rounds += 1
        new: dict[Predicate, set] = defaultdict(set)
        for p, rows in sorted(delta.items()):
            for c, i in by_body_pred.get(p, ()):
                rid = c.rule.id
                done = fired[rid]
                frontier_of, exnames, names = c.frontier_of, c.exnames, c.names
                for vals in _matches(c, i, rows, facts):
                    fp = frontier_of(vals)
                    if fp in done:
                        continue
                    done.add(fp)
                    if exnames:
                        vals = vals + tuple(terms.intern((rid, names, fp, z)) for z in exnames)
                    for hp, make in c.heads:
                        hrow = make(vals)
                        if hrow in facts[hp] or hrow in new[hp]:
                            continue
                        new[hp].add(hrow)
                        size += 1
                        if size >= max_atoms:
                            return result(BUDGET_EXCEEDED, new)
        if not new:
            return result(FIXPOINT)
        for p, rows in new.items():
            facts[p] |= rows
        delta = new


def _matches(c: _Compiled, pinned: int, rows, facts):
    """Value tuples (one per distinct body variable) of matches using ``rows`` at atom ``pinned``."""
    r = c.rule
    if len(r.body) == 1:
        eqs, take = c.eqs, c.take
        for row in rows:
            if eqs and any(row[i] != row[j] for i, j in eqs):
                continue
            yield row if take is None else take(row)
        return
    for row in rows:
        for h in _extend(r, pinned, row, facts):
            yield tuple(h[v] for v in c.vars)


def _extend(r: TGD, pinned: int, row, facts):
    """All homomorphisms of ``r.body`` with atom ``pinned`` mapped to ``row``."""
    h0 = {}
    for x, c in zip(r.body[pinned].args, row):
        if h0.setdefault(x, c) != c:
            return
    rest = [a for j, a in enumerate(r.body) if j != pinned]

    def go(k, h):
        if k == len(rest):
            yield h
            return
        a = rest[k]
        for frow in facts.get(a.predicate, ()):
            h2 = dict(h)
            ok = True
            for x, c in zip(a.args, frow):
                if h2.setdefault(x, c) != c:
                    ok = False
                    break
            if ok:
                yield from go(k + 1, h2)

    yield from go(0, h0)


# -- literal weak-acyclicity ----------------------------------------------------

def literal_edges(rules):
    """Dependency-graph edges straight from the definition (no indexes)."""
    edges = set()
    for r in rules:
        for x in r.frontier:
            for ba in r.body:
                for i, t in enumerate(ba.args, 1):
                    if t != x:
                        continue
                    src = (ba.predicate, i)
                    for ha in r.head:
                        for j, s in enumerate(ha.args, 1):
                            if s == x:
                                edges.add((src, (ha.predicate, j), False))
                            elif s in r.existentials:
                                edges.add((src, (ha.predicate, j), True))
    return edges


def naive_wa_check(db_predicates, rules, max_nodes=200):
    """Literal check that no database-supported cycle carries a special edge.

    ``db_predicates`` is a :class:`Database` or a set of predicates occurring
    in it. For each special edge ``(u, v)`` a simple path back from ``v`` to
    ``u`` is searched by DFS; the resulting cycle is supported when one of
    its positions belongs to a predicate reachable from a database predicate.
    Returns ``(acyclic, witness_cycle_or_None)``.
    """
    if isinstance(db_predicates, Database):
        db_predicates = db_predicates.catalog()
    edges = literal_edges(rules)
    nodes = {e[0] for e in edges} | {e[1] for e in edges}
    if len(nodes) > max_nodes:
        raise ValueError(f"graph has {len(nodes)} nodes; too large for the naive check")
    succ = defaultdict(set)
    for u, v, _ in edges:
        succ[u].add(v)

    reachable_preds = set(db_predicates)
    todo = deque(n for n in nodes if n[0] in reachable_preds)
    seen = set(todo)
    while todo:
        u = todo.popleft()
        reachable_preds.add(u[0])
        for v in succ[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)

    for u, v, special in sorted(edges, key=str):
        if not special:
            continue
        path = _simple_path(succ, v, u)
        if path is None:
            continue
        cycle = [u] + path
        if any(n[0] in reachable_preds for n in cycle):
            return False, cycle
    return True, None


def _simple_path(succ, start, goal):
    stack = [(start, [start])]
    visited = {start}
    while stack:
        node, path = stack.pop()
        if node == goal:
            return path
        for nxt in sorted(succ[node], key=str):
            if nxt not in visited:
                visited.add(nxt)
                stack.append((nxt, path + [nxt]))
    return None


def simplify_database(db: Database) -> Database:
    """The database of simplified facts ``R_id(unique(c))``."""
    from .shapes import unique_and_id

    out = Database()
    for p, rows in db.relations.items():
        for row in rows:
            uniq, ids = unique_and_id(row)
            out.add(Predicate(p.name, len(uniq), ids), uniq)
    return out
