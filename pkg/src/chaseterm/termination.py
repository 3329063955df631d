"""Deciding finiteness of the semi-oblivious chase for (simple-)linear rules."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

from .depgraph import build_dep_graph, reverse_reachable_ids
from .model import (
    Database,
    classify_rule_set,
    ensure_frontier,
    extend_predicate,
    schema,
)
from .scc import find_special_scc, special_cycle
from .shapes import Shape, find_shapes_memory
from .simplify import dyn_simplification

FINITE = "finite"
INFINITE = "infinite"

CSV_FIELDS = ["verdict", "mode", "n_rules", "n_predicates", "n_shapes",
              "n_simplified_rules", "n_nodes", "n_edges",
              "t_parse", "t_shapes", "t_graph", "t_comp", "t_total"]


@dataclass
class TerminationReport:
    verdict: str
    mode: str
    t_parse: float = 0.0
    t_shapes: float = 0.0
    t_graph: float = 0.0
    t_comp: float = 0.0
    t_total: float = 0.0
    n_rules: int = 0
    n_predicates: int = 0
    n_shapes: int = 0
    n_simplified_rules: int = 0
    n_nodes: int = 0
    n_edges: int = 0
    frontier_rewritten: bool = False
    witness_scc: list = field(default_factory=list)
    witness_predicate: str | None = None
    witness_cycle: list = field(default_factory=list)

    # Artefacts kept for dumps; not part of the serialised report.
    graph = None
    simplified = None

    @property
    def finite(self) -> bool:
        return self.verdict == FINITE

    def finish(self):
        self.t_total = self.t_parse + self.t_shapes + self.t_graph + self.t_comp
        return self

    def to_dict(self):
        return asdict(self)

    def csv_row(self):
        d = self.to_dict()
        return [d[k] for k in CSV_FIELDS]


class RuleClassError(ValueError):
    pass


def supports(catalog, starts, g) -> str | None:
    """Name of a database predicate from which some start node is reachable, else None.

    ``starts`` are node ids of ``g``. The reverse traversal includes the
    starts themselves, covering a predicate reaching itself.
    """
    catalog = set(catalog)
    if not catalog or not starts:
        return None
    for v in sorted(reverse_reachable_ids(g, starts)):
        p = g.nodes[v].predicate
        if p in catalog:
            return str(p)
    return None


def _catalog_of(db):
    if isinstance(db, Database):
        return db.catalog()
    return set(db)


def is_chase_finite_sl(db, rules, t_parse=0.0) -> TerminationReport:
    """Decide finiteness for simple-linear rules.

    ``db`` is a :class:`Database` or just its catalog (the set of non-empty
    predicates): only which relations are non-empty matters here.
    """
    rules = list(rules)
    if classify_rule_set(rules) != "SL":
        raise RuleClassError("rules are not simple-linear")
    catalog = _catalog_of(db)
    rules, rewritten = ensure_frontier(rules)
    if rewritten:
        catalog = {extend_predicate(p) for p in catalog}
    rep = TerminationReport(FINITE, "SL", t_parse=t_parse, n_rules=len(rules),
                            n_predicates=len(schema(rules)), frontier_rewritten=rewritten)
    g, rep.t_graph = build_dep_graph(rules)
    rep.graph = g
    rep.n_nodes, rep.n_edges = len(g), g.n_edges
    t0 = time.perf_counter()
    comps, _ = find_special_scc(g)
    witnesses = {g.index[c.witness]: c for c in comps}
    hit = supports(catalog, list(witnesses), g)
    rep.t_comp = (time.perf_counter() - t0) * 1000.0
    if hit is not None:
        rep.verdict = INFINITE
        rep.witness_predicate = hit
        for v, c in sorted(witnesses.items()):
            if supports(catalog, [v], g) is not None:
                rep.witness_scc = sorted(map(str, c.members))
                rep.witness_cycle = [str(p) for p in special_cycle(g, c)]
                break
    return rep.finish()


def _extend_shape(s: Shape) -> Shape:
    return Shape(extend_predicate(s.predicate), s.ids + (max(s.ids) + 1,))


def is_chase_finite_l(db_or_shapes, rules, t_parse=0.0, t_shapes=None,
                      chunk_size=1_000_000) -> TerminationReport:
    """Decide finiteness for linear rules via dynamic simplification.

    ``db_or_shapes`` is a :class:`Database` (shapes are then extracted in
    memory and timed) or a precomputed set of :class:`Shape`.
    """
    rules = list(rules)
    if classify_rule_set(rules) == "neither":
        raise RuleClassError("rules are not linear")
    if isinstance(db_or_shapes, Database):
        shapes, ms = find_shapes_memory(db_or_shapes, chunk_size)
        t_shapes = ms if t_shapes is None else t_shapes
    else:
        shapes = set(db_or_shapes)
    rules, rewritten = ensure_frontier(rules)
    if rewritten:
        shapes = {_extend_shape(s) for s in shapes}
    rep = TerminationReport(FINITE, "L", t_parse=t_parse, t_shapes=t_shapes or 0.0,
                            n_rules=len(rules), n_predicates=len(schema(rules)),
                            n_shapes=len(shapes), frontier_rewritten=rewritten)
    t0 = time.perf_counter()
    simplified = dyn_simplification(shapes, rules)
    g, _ = build_dep_graph(simplified.rules)
    rep.t_graph = (time.perf_counter() - t0) * 1000.0
    rep.n_simplified_rules = len(simplified)
    rep.n_nodes, rep.n_edges = len(g), g.n_edges
    comps, rep.t_comp = find_special_scc(g)
    if comps:
        rep.verdict = INFINITE
        first = min(comps, key=lambda c: g.index[c.witness])
        rep.witness_scc = sorted(map(str, first.members))
        rep.witness_cycle = [str(p) for p in special_cycle(g, first)]
    rep.simplified = simplified
    rep.graph = g
    return rep.finish()


def is_chase_finite(db, rules, mode="auto", **kw) -> TerminationReport:
    rules = list(rules)
    cls = classify_rule_set(rules)
    if mode == "auto":
        mode = {"SL": "sl", "L": "l"}.get(cls)
        if mode is None:
            raise RuleClassError("rules are not linear")
    if mode == "sl":
        return is_chase_finite_sl(db, rules, t_parse=kw.get("t_parse", 0.0))
    return is_chase_finite_l(db, rules, **kw)
