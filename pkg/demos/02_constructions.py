"""Build a code for every bundled graph and store/recover a message with it."""

import numpy as np

from securegraph import build, decode, encode, load_instance
from securegraph.codes import BuildError, emit_code
from securegraph.instances import BUNDLED

rng = np.random.default_rng(1)

for name in BUNDLED:
    g = load_instance(name)
    try:
        code = build(g, seed=1)
    except BuildError as exc:
        print(f"{name}: no construction ({exc})\n")
        continue
    rate = "no key needed" if code.rate is None else f"rate {code.rate}"
    print(f"{name}: {code.kind} code over GF({code.q}), {code.zdim} key symbols, {rate}")

    w = rng.integers(0, code.q, size=g.K)
    z = rng.integers(0, code.q, size=code.zdim)
    stored = encode(code, w, z)
    for e in g.qualified_edges():
        got = decode(code, e.ref, stored[e.a], stored[e.b])
        want = [int(w[k - 1]) for k in sorted(e.label)]
        assert got.tolist() == want
    print(f"  sources {w.tolist()} recovered on all {len(g.qualified_edges())} qualified edges")
    if name == "cycle4":
        print(emit_code(code))
    print()
