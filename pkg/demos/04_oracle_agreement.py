"""Cross-check the static verdict against an actual bounded chase.

An infinite verdict should make the chase hit its budget; a finite one
should reach a fixpoint well inside it.
"""
import random

from chaseterm import is_chase_finite_l, run_chase
from chaseterm.generators import random_instance

rng = random.Random(4)
tally = {"agree": 0, "disagree": 0}
for _ in range(200):
    db, rules = random_instance(rng, "L", max_preds=4, max_arity=3, max_rules=6)
    verdict = is_chase_finite_l(db, rules).finite
    chase = run_chase(db, rules, max_atoms=20_000, max_rounds=500)
    tally["agree" if verdict == chase.reached_fixpoint else "disagree"] += 1
print(tally)
