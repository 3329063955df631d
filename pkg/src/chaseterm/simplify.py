"""Turning linear rules into simple-linear rules over shape-tagged predicates.

Static simplification applies every specialization of a rule's body
variables. Dynamic simplification only keeps the specializations whose body
shape is derivable from the shapes of a database, which is usually a far
smaller set.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .model import TGD, Atom, Predicate
from .shapes import Shape, id_tuple, simplify_atom


@dataclass(frozen=True)
class Specialization:
    """A merge of body variables: each variable maps to itself or an earlier image."""

    over: tuple
    mapping: tuple  # pairs (variable, image), in first-occurrence order

    def __call__(self, t):
        return dict(self.mapping).get(t, t)

    def as_dict(self):
        return dict(self.mapping)

    def __str__(self):
        return "{" + ", ".join(f"{a.label}->{b.label}" for a, b in self.mapping if a != b) + "}"


def _distinct(xs):
    return tuple(dict.fromkeys(xs))


def specializations(xs) -> list[Specialization]:
    """Every valid specialization of the variable tuple ``xs``.

    Repeated variables share one image, so the count is the Bell number of
    the number of distinct variables.
    """
    xs = tuple(xs)
    distinct = _distinct(xs)
    results: list[list] = [[]]
    for v in distinct:
        grown = []
        for partial in results:
            images = _distinct(img for _, img in partial)
            for img in images + (v,):
                grown.append(partial + [(v, img)])
        results = grown
    return [Specialization(xs, tuple(m)) for m in results]


def _apply(f: dict, a: Atom) -> Atom:
    return Atom(a.predicate, tuple(f.get(t, t) for t in a.args))


def simplify_rule(rule: TGD, f, rule_id=None) -> TGD:
    """Simplification of a linear rule induced by specialization ``f``."""
    if not rule.is_linear:
        raise ValueError("only linear rules can be simplified")
    m = f.as_dict() if isinstance(f, Specialization) else dict(f)
    body = simplify_atom(_apply(m, rule.body[0]))
    head = [simplify_atom(_apply(m, a)) for a in rule.head]
    return TGD(rule.id if rule_id is None else rule_id, [body], head)


@dataclass
class SimplifiedRuleSet:
    rules: list = field(default_factory=list)
    provenance: list = field(default_factory=list)  # (source rule id, Specialization)
    shapes: set = field(default_factory=set)  # derived shapes, when dynamic
    iterations: int = 0
    _seen: set = field(default_factory=set, repr=False)

    def add(self, rule: TGD, source_id, spec):
        if rule in self._seen:
            return False
        self._seen.add(rule)
        self.rules.append(rule)
        self.provenance.append((source_id, spec))
        return True

    def rule_set(self) -> set:
        return set(self.rules)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def static_simplify(rules, max_rules=None) -> SimplifiedRuleSet:
    """Union of all simplifications of all rules.

    Grows exponentially with arity; ``max_rules`` aborts with ``MemoryError``
    once that many rules would be produced.
    """
    out = SimplifiedRuleSet()
    produced = 0
    for r in rules:
        for f in specializations(r.body[0].args):
            produced += 1
            if max_rules is not None and produced > max_rules:
                raise MemoryError(f"static simplification exceeds {max_rules} rules")
            out.add(simplify_rule(r, f), r.id, f)
    return out


class ApplicableIndex:
    """Maps each body predicate to its rules, with each rule's body shape memoised."""

    def __init__(self, rules):
        self.by_pred: dict[Predicate, list] = defaultdict(list)
        for r in rules:
            if not r.is_linear:
                raise ValueError(f"rule {r.id} is not linear")
            args = r.body[0].args
            self.by_pred[r.body[0].predicate].append((r, id_tuple(args), args))

    def rules_for(self, pred: Predicate):
        return self.by_pred.get(pred, ())


def _h_specialization(args, shape_ids):
    """Map each body variable to the first variable in its block of ``shape_ids``."""
    first_var: dict[int, object] = {}
    m = {}
    for t, b in zip(args, shape_ids):
        img = first_var.setdefault(b, t)
        m.setdefault(t, img)
    return m


def _compatible(body_ids, shape_ids) -> bool:
    """A homomorphism body -> DB[{shape}] exists iff the shape coarsens the body pattern."""
    seen: dict = {}
    for b, s in zip(body_ids, shape_ids):
        if seen.setdefault(b, s) != s:
            return False
    return True


def applicable(delta_shapes, rules=None, index: ApplicableIndex | None = None):
    """Simplified rules whose body shape lies in ``delta_shapes``.

    Returns a list of ``(simplified rule, source rule, specialization dict)``
    in a deterministic order.
    """
    if index is None:
        index = ApplicableIndex(rules)
    out = []
    for shape in sorted(delta_shapes):
        for r, body_ids, args in index.rules_for(shape.predicate):
            if not _compatible(body_ids, shape.ids):
                continue
            m = _h_specialization(args, shape.ids)
            out.append((simplify_rule(r, m), r, m))
    return out


def _to_spec(args, m) -> Specialization:
    distinct = _distinct(args)
    return Specialization(tuple(args), tuple((v, m[v]) for v in distinct))


def head_shapes(rule: TGD) -> set[Shape]:
    """Shapes named by the (shape-tagged) head atoms of a simplified rule."""
    return {Shape(a.predicate.base, a.predicate.ids) for a in rule.head}


def dyn_simplification(initial_shapes, rules, index=None, *, full_rescan=False) -> SimplifiedRuleSet:
    """Worklist computation of the database-relative simplification.

    Each round applies the rules to the newly derived shapes only; with
    ``full_rescan`` every round re-applies them to all shapes known so far
    (the slower, obviously correct variant).
    """
    if index is None:
        index = ApplicableIndex(rules)
    out = SimplifiedRuleSet()
    known = set(initial_shapes)
    delta = set(known)
    while delta:
        out.iterations += 1
        batch = applicable(known if full_rescan else delta, index=index)
        new_shapes = set()
        for simple, src, m in batch:
            out.add(simple, src.id, _to_spec(src.body[0].args, m))
            new_shapes |= head_shapes(simple)
        delta = new_shapes - known
        known |= delta
    out.shapes = known
    return out


def immediate_consequence(shapes, rules) -> set[Shape]:
    """One application of the shape-derivation operator to a full shape set."""
    out = set(shapes)
    for simple, _, _ in applicable(shapes, rules):
        out |= head_shapes(simple)
    return out


def derived_shapes(shapes, rules) -> set[Shape]:
    """Least fixpoint of :func:`immediate_consequence` above ``shapes``."""
    cur = set(shapes)
    while True:
        nxt = immediate_consequence(cur, rules)
        if nxt == cur:
            return cur
        cur = nxt


def all_shapes(rules) -> set[Shape]:
    from .model import schema
    from .shapes import enumerate_shapes

    out = set()
    for p in schema(rules):
        out.update(enumerate_shapes(p))
    return out


def render_simplified(rs) -> str:
    return "".join(f"{r}\n" for r in rs)
