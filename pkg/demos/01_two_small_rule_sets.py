"""Two one-rule programs that look alike but behave differently.

R(x,y) -> R(z,x) feeds x back into the second column and invents a fresh
first column every time, so the chase never stops. With the body R(x,x)
the rule only fires on diagonal facts, and the facts it makes are never
diagonal, so on a database without diagonal facts the chase stops at once.
"""
from chaseterm import is_chase_finite_l, is_chase_finite_sl, parse_facts_text, parse_rules_text, run_chase

db = parse_facts_text("R(a,b).\nR(c,c).")

loop = parse_rules_text("R(x,y) -> R(z,x)")
rep = is_chase_finite_sl(db, loop)
print("R(x,y) -> R(z,x):", rep.verdict)
print("  special cycle through", rep.witness_cycle)
res = run_chase(db, loop, max_atoms=50, max_rounds=100)
print(f"  bounded chase: {res.outcome} after {res.rounds} rounds, {len(res)} atoms")

diag = parse_rules_text("R(x,x) -> R(z,x)")
rep = is_chase_finite_l(db, diag)
print("R(x,x) -> R(z,x):", rep.verdict)
print("  rules that can actually fire:")
for r in rep.simplified.rules:
    print("   ", r)
res = run_chase(db, diag)
print(f"  bounded chase: {res.outcome} after {res.rounds} rounds")
print(res.render(), end="")
