import random

import pytest
from hypothesis import given, settings, strategies as st

from chaseterm.generators import random_instance
from chaseterm.model import TGD, Atom, Database, Predicate, var
from chaseterm.ruleio import parse_facts_text, parse_rules_text
from chaseterm.shapes import Shape, find_shapes_memory, simplify_atom
from chaseterm.simplify import (
    all_shapes,
    applicable,
    derived_shapes,
    dyn_simplification,
    render_simplified,
    simplify_rule,
    specializations,
    static_simplify,
)

from oracles import specializations_by_definition

R2 = Predicate("R", 2)
x, y, z = var("x"), var("y"), var("z")


def tagged(name, ids):
    return Predicate(name, max(ids), ids)


def rule(text):
    return parse_rules_text(text)[0]


def simplify_by_definition(r, f):
    """simple(R(f(x))) -> simple(psi(f(y), z)) straight from the definition."""
    def app(a):
        return Atom(a.predicate, tuple(f.get(t, t) for t in a.args))
    return TGD(r.id, [simplify_atom(app(r.body[0]))], [simplify_atom(app(a)) for a in r.head])


def test_specializations_examples():
    assert len(specializations((x, y))) == 2
    assert {frozenset(s.as_dict().items()) for s in specializations((x, y))} == {
        frozenset({(x, x), (y, y)}), frozenset({(x, x), (y, x)})}
    assert len(specializations((x,))) == 1
    assert len(specializations((x, y, z))) == 5


@pytest.mark.parametrize("args", ["xy", "xyz", "xyzu", "xxy", "xyx", "xyzxu", "x"])
def test_specializations_match_definition(args):
    xs = tuple(var(c) for c in args)
    got = {frozenset(s.as_dict().items()) for s in specializations(xs)}
    want = {frozenset(f.items()) for f in specializations_by_definition(xs)}
    assert got == want


def test_simplify_rule_examples():
    r = rule("R(x,x) -> R(z,x)")
    (f,) = specializations(r.body[0].args)
    assert str(simplify_rule(r, f)) == "R_1_1(x) -> R_1_2(z,x)"
    r = rule("R(x,y) -> R(y,z)")
    assert str(simplify_rule(r, {x: x, y: y})) == "R_1_2(x,y) -> R_1_2(y,z)"
    assert str(simplify_rule(r, {x: x, y: x})) == "R_1_1(x) -> R_1_2(x,z)"


def test_static_simplify_examples():
    assert len(static_simplify(parse_rules_text("R(x,y) -> R(y,z)"))) == 2
    assert len(static_simplify(parse_rules_text("R(x,x) -> R(z,x)"))) == 1
    assert len(static_simplify([])) == 0


def test_static_simplify_budget():
    rules = parse_rules_text("R(a,b,c,d,e,f,g) -> S(a)")
    with pytest.raises(MemoryError):
        static_simplify(rules, max_rules=100)


def test_applicable_examples():
    r1 = parse_rules_text("R(x,x) -> R(z,x)")
    assert applicable({Shape(R2, (1, 2))}, r1) == []
    r2 = parse_rules_text("R(x,y) -> R(y,z)")
    (got,) = applicable({Shape(R2, (1, 1))}, r2)
    assert str(got[0]) == "R_1_1(x) -> R_1_2(x,z)"
    assert applicable(set(), r2) == []


def test_dyn_simplification_examples():
    shapes = {Shape(R2, (1, 2))}
    assert len(dyn_simplification(shapes, parse_rules_text("R(x,x) -> R(z,x)"))) == 0

    out = dyn_simplification({Shape(R2, (1, 1))}, parse_rules_text("R(x,y) -> R(z,x)"))
    got = {str(r) for r in out}
    assert "R_1_1(x) -> R_1_2(z,x)" in got
    assert "R_1_2(x,y) -> R_1_2(z,x)" in got


def test_dump_uses_tagged_names():
    out = dyn_simplification({Shape(R2, (1, 1))}, parse_rules_text("R(x,y) -> R(z,x)"))
    text = render_simplified(out)
    assert "R_1_1(x) -> R_1_2(z,x)\n" in text
    # dumps parse back as simple-linear rules
    assert all(r.is_simple_linear for r in parse_rules_text(text))


def check_against_static(db, rules):
    shapes = find_shapes_memory(db)[0]
    dyn = dyn_simplification(shapes, rules)
    static = static_simplify(rules)
    reach = derived_shapes(shapes, rules)
    want = {r for r in static.rules
            if Shape(r.body[0].predicate.base, r.body[0].predicate.ids) in reach}
    return dyn, static, want, reach


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_dynamic_is_static_filtered_by_derivable_shapes(seed):
    rng = random.Random(seed)
    db, rules = random_instance(rng, "L", max_preds=4, max_arity=3, max_rules=8)
    rules = [r for r in rules if r.frontier]
    dyn, static, want, reach = check_against_static(db, rules)
    assert dyn.rule_set() <= static.rule_set()
    assert dyn.rule_set() == want
    assert all(r.is_simple_linear for r in dyn)
    assert dyn.shapes == reach
    assert dyn.iterations <= max(1, len(all_shapes(rules)))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_worklist_equals_full_rescan(seed):
    rng = random.Random(seed)
    db, rules = random_instance(rng, "L", max_preds=4, max_arity=3, max_rules=8)
    shapes = find_shapes_memory(db)[0]
    a = dyn_simplification(shapes, rules)
    b = dyn_simplification(shapes, rules, full_rescan=True)
    assert a.rule_set() == b.rule_set()
    assert a.shapes == b.shapes


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_applicable_matches_homomorphism_search(seed):
    rng = random.Random(seed)
    _, rules = random_instance(rng, "L", max_preds=3, max_arity=4, max_rules=6)
    shapes = all_shapes(rules)
    delta = set(rng.sample(sorted(shapes), min(len(shapes), rng.randint(0, 6))))
    got = {simple for simple, _, _ in applicable(delta, rules)}
    # oracle: simplification by every specialization whose simplified body shape is in delta
    want = set()
    for r in rules:
        for f in specializations(r.body[0].args):
            s = simplify_rule(r, f)
            b = s.body[0].predicate
            if Shape(b.base, b.ids) in delta:
                want.add(s)
    assert got == want


def test_dsimple_depends_only_on_shapes():
    rules = parse_rules_text("R(x,y) -> R(y,z)\nR(x,x) -> S(x,x,y)\nS(x,y,x) -> R(y,x)")
    d1 = parse_facts_text("R(a,b).\nR(c,c).")
    d2 = parse_facts_text("R(u,v).\nR(w,w).\nR(p,q).\nR(k,k).")
    s1, s2 = find_shapes_memory(d1)[0], find_shapes_memory(d2)[0]
    assert s1 == s2
    assert dyn_simplification(s1, rules).rule_set() == dyn_simplification(s2, rules).rule_set()


def test_empty_database_gives_empty_simplification():
    rules = parse_rules_text("R(x,y) -> R(y,z)")
    assert len(dyn_simplification(set(), rules)) == 0
    assert len(dyn_simplification(find_shapes_memory(Database())[0], rules)) == 0
