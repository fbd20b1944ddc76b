"""Check codes exactly, catch a broken one, and search for codes that do not exist."""

import numpy as np

from securegraph import build, exhaustive_converse_search, load_instance, verify_code
from securegraph.codes import _finish
from securegraph.verify import format_report

g = load_instance("cycle4")
code = build(g, mode="m1", q_override=5)
print(format_report(verify_code(code, oracle=True, audit=True)))

# Dropping the key from V2 breaks both edges touching it: each pair neither
# decodes its source nor hides the other one. Rank test and enumeration agree.
rows = dict(code.matrices)
rows["V2"] = np.array([[2, 1, 0]])
broken = _finish(code.field, g, rows, code.zdim, "m1", 0)
print(format_report(verify_code(broken, oracle=True)))

# fig4 has an edge carrying W1 inside a W1-free path: no rate-1 scalar code.
for q in (2, 3):
    found = exhaustive_converse_search(load_instance("fig4"), q, node_dim=1, zdim=1)
    print(f"fig4, q={q}: {'code found' if found else 'no rate-1 scalar linear code'}")
