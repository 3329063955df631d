"""Time the simple-linear check on generated rule sets of growing size.

Parsing and graph building should grow linearly; the component search is a
small slice of the total.
"""
import tempfile
from pathlib import Path

from chaseterm.bench import run_sl_cell
from chaseterm.generators import TgdGenSpec, generate_tgds, make_schema
from chaseterm.ruleio import write_rules

schema = make_schema(1000, 1, 5, seed=3)
with tempfile.TemporaryDirectory() as tmp:
    print(f"{'rules':>8} {'parse':>9} {'graph':>9} {'comp':>9} {'total':>9}  verdict")
    for n in (1_000, 10_000, 50_000):
        path = Path(tmp) / f"r{n}.tgd"
        write_rules(generate_tgds(TgdGenSpec(tuple(schema), 100, 1, 5, n, "SL", 3)), path)
        rep = run_sl_cell(path)
        print(f"{n:>8} {rep.t_parse:>8.1f}ms {rep.t_graph:>8.1f}ms {rep.t_comp:>8.1f}ms "
              f"{rep.t_total:>8.1f}ms  {rep.verdict}")
