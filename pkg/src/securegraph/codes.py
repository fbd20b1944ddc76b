"""Linear secure storage codes: construction, encoding, decoding, file format.

Every node ``n`` stores ``A_n @ x`` where ``x = (W_1..W_K, Z_1..Z_zdim)`` and
each source is a single field symbol. Three constructions are provided:

* ``build_m1``: one key symbol; node rows are component indices per source.
* ``build_general``: ``M`` key symbols; random coding vectors per component,
  redrawn until every qualified edge's difference map is invertible.
* ``build_keyless``: no key; nodes store random mixes of their common sources.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .classify import Regime, classify
from .field import PrimeField, next_prime_at_least
from .graph import StorageGraph
from .structure import ComponentAnalysis, analyze

log = logging.getLogger(__name__)

KINDS = ("m1", "general", "keyless", "search")
MAX_ESCALATIONS = 3


class BuildError(Exception):
    pass


class PreconditionError(BuildError):
    pass


class CodeFormatError(Exception):
    pass


@dataclass(frozen=True)
class LinearSecureCode:
    field: PrimeField
    graph: StorageGraph
    zdim: int
    matrices: dict  # node -> (dim_n, K + zdim) array
    decoders: dict  # (a, b) -> (M, dim_a + dim_b) array, qualified edges only
    kind: str
    seed: int = 0
    attempts: int = 1
    escalations: int = 0
    source_len: int = 1

    @property
    def K(self) -> int:
        return self.graph.K

    @property
    def M(self) -> int:
        return self.graph.M

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def width(self) -> int:
        return self.K + self.zdim

    @property
    def rate(self):
        """Source key rate ``L / L_Z``; None when no key is used."""
        return Fraction(self.source_len, self.zdim) if self.zdim else None

    def stacked(self, a: str, b: str) -> np.ndarray:
        return np.vstack([self.matrices[a], self.matrices[b]])


def selector(K: int, width: int, sources) -> np.ndarray:
    """Unit rows picking ``W_k`` for ``k`` in ``sources`` (ascending)."""
    sources = sorted(sources)
    s = np.zeros((len(sources), width), dtype=np.int64)
    for i, k in enumerate(sources):
        s[i, k - 1] = 1
    return s


def synthesize_decoders(field: PrimeField, g: StorageGraph, matrices: dict, width: int) -> dict:
    """Decoders for every qualified edge whose sources are recoverable."""
    decoders = {}
    for e in g.qualified_edges():
        stacked = np.vstack([matrices[e.a], matrices[e.b]])
        d = field.solve_left(stacked, selector(g.K, width, e.label))
        if d is not None:
            decoders[e.ref] = d
    return decoders


def _finish(field, g, matrices, zdim, kind, seed, attempts=1, escalations=0) -> LinearSecureCode:
    width = g.K + zdim
    matrices = {v: np.mod(np.asarray(matrices[v], dtype=np.int64).reshape(-1, width), field.q)
                for v in g.nodes}
    decoders = synthesize_decoders(field, g, matrices, width)
    return LinearSecureCode(field, g, zdim, matrices, decoders, kind, seed, attempts, escalations)


def _degenerate_rows(g: StorageGraph, a: ComponentAnalysis, v: str, width: int) -> np.ndarray:
    c = a.common_sources[v]
    if c:
        return selector(g.K, width, c)
    return np.zeros((1, width), dtype=np.int64)


def _pick_field(required_min: int, q_override: int | None) -> PrimeField:
    """``required_min`` is the smallest admissible modulus."""
    if q_override is None:
        return PrimeField(next_prime_at_least(required_min))
    try:
        f = PrimeField(q_override)
    except ValueError as exc:
        raise BuildError(str(exc)) from None
    if q_override < required_min:
        raise BuildError(f"q={q_override} is below the required bound (need q >= {required_min})")
    return f


def _require(g, a, expected, what):
    r = classify(g, a)
    if r.regime not in expected:
        raise PreconditionError(f"{what} needs regime {'/'.join(x.value for x in expected)}, "
                                f"graph is {r.regime.value}")
    return r


def build_m1(g: StorageGraph, a: ComponentAnalysis | None = None,
             q_override: int | None = None) -> LinearSecureCode:
    """Explicit rate-1 code for ``M = 1``. Deterministic; takes no seed."""
    a = analyze(g) if a is None else a
    if g.M != 1:
        raise PreconditionError(f"build_m1 needs M=1, graph has M={g.M}")
    _require(g, a, (Regime.EXTREMAL,), "build_m1")
    max_u = max(s.core_U for s in a.per_source.values())
    field = _pick_field(max(max_u + 1, g.K + 1), q_override)
    width = g.K + 1
    matrices = {}
    for v in g.nodes:
        if v in a.degenerate:
            matrices[v] = _degenerate_rows(g, a, v, width)
            continue
        row = np.zeros((1, width), dtype=np.int64)
        for k in range(1, g.K + 1):
            row[0, k - 1] = a.per_source[k].core_component_id[v]
        row[0, g.K] = g.K  # shared key summed over all K sources
        matrices[v] = row
    code = _finish(field, g, matrices, 1, "m1", 0)
    _assert_decodable(code)
    return code


def _assert_decodable(code: LinearSecureCode):
    missing = [e.ref for e in code.graph.qualified_edges() if e.ref not in code.decoders]
    if missing:
        raise BuildError(f"construction left edge {{{missing[0][0]},{missing[0][1]}}} undecodable")


def _escalating(draw, accept, field: PrimeField, max_retries: int, seed: int, what: str,
                max_escalations: int = MAX_ESCALATIONS):
    """Rejection-sample ``draw(field, rng)`` until ``accept`` holds.

    Returns ``(field, sample, attempts, escalations)``.
    """
    rng = np.random.default_rng(seed)
    attempts = 0
    for esc in range(max_escalations + 1):
        for _ in range(max_retries):
            attempts += 1
            sample = draw(field, rng)
            if accept(field, sample):
                return field, sample, attempts, esc
        if esc < max_escalations:
            nxt = PrimeField(next_prime_at_least(2 * field.q))
            log.info("%s: %d draws rejected over GF(%d), escalating to GF(%d)",
                     what, max_retries, field.q, nxt.q)
            field = nxt
    raise BuildError(f"{what}: no acceptable draw after {attempts} attempts "
                     f"(seed={seed}, final q={field.q})")


def general_difference_matrix(coding: dict, a: ComponentAnalysis, edge) -> np.ndarray:
    """``M x M`` map from the edge's sources to ``V_i - V_j``."""
    cols = []
    for k in sorted(edge.label):
        comp = a.per_source[k].core_component_id
        cols.append(coding[k][comp[edge.a] - 1] - coding[k][comp[edge.b] - 1])
    return np.stack(cols, axis=1)


def build_general(g: StorageGraph, a: ComponentAnalysis | None = None, seed: int = 0,
                  q_override: int | None = None, max_retries: int = 64,
                  check_regime: bool = True,
                  max_escalations: int = MAX_ESCALATIONS) -> LinearSecureCode:
    """Randomized rate-``1/M`` code using ``M`` key symbols."""
    a = analyze(g) if a is None else a
    if check_regime:
        _require(g, a, (Regime.EXTREMAL,), "build_general")
    M, K = g.M, g.K
    max_u = max(s.core_U for s in a.per_source.values())
    field = _pick_field(max(M * len(g.edges) + 1, K + 1, max_u + 1), q_override)
    core = set(a.nondegenerate_nodes)
    checked = [e for e in g.qualified_edges() if e.a in core and e.b in core]

    def draw(f, rng):
        return {k: f.sample(a.per_source[k].core_U, M, rng) for k in range(1, K + 1)}

    def accept(f, coding):
        return all(f.rank(general_difference_matrix(coding, a, e)) == M for e in checked)

    field, coding, attempts, esc = _escalating(draw, accept, field, max_retries, seed,
                                               "build_general", max_escalations)
    width = K + M
    matrices = {}
    for v in g.nodes:
        if v in a.degenerate:
            matrices[v] = _degenerate_rows(g, a, v, width)
            continue
        rows = np.zeros((M, width), dtype=np.int64)
        for k in range(1, K + 1):
            rows[:, k - 1] = coding[k][a.per_source[k].core_component_id[v] - 1]
        rows[:, K:] = (K % field.q) * np.eye(M, dtype=np.int64)
        matrices[v] = rows
    code = _finish(field, g, matrices, M, "general", seed, attempts, esc)
    _assert_decodable(code)
    return code


def build_keyless(g: StorageGraph, a: ComponentAnalysis | None = None, seed: int = 0,
                  q_override: int | None = None, max_retries: int = 64,
                  max_escalations: int = MAX_ESCALATIONS) -> LinearSecureCode:
    """Key-free code: each node stores random combinations of its common sources."""
    a = analyze(g) if a is None else a
    _require(g, a, (Regime.KEYLESS,), "build_keyless")
    K = g.K
    field = _pick_field(max(g.M * len(g.edges) + 1, 2), q_override)
    common = {v: sorted(a.common_sources[v]) for v in g.nodes}

    def draw(f, rng):
        out = {}
        for v in g.nodes:
            c = common[v]
            rows = np.zeros((len(c), K), dtype=np.int64)
            if c:
                rows[:, [k - 1 for k in c]] = f.sample(len(c), len(c), rng)
            out[v] = rows
        return out

    def accept(f, mats):
        for e in g.qualified_edges():
            stacked = np.vstack([mats[e.a], mats[e.b]])[:, [k - 1 for k in sorted(e.label)]]
            if f.rank(stacked) != g.M:
                return False
        return True

    field, mats, attempts, esc = _escalating(draw, accept, field, max_retries, seed,
                                             "build_keyless", max_escalations)
    code = _finish(field, g, mats, 0, "keyless", seed, attempts, esc)
    _assert_decodable(code)
    return code


def build(g: StorageGraph, mode: str = "auto", seed: int = 0, q_override: int | None = None,
          max_retries: int = 64) -> LinearSecureCode:
    """Dispatch on ``mode``; ``auto`` routes by regime.

    Uncharacterized graphs get a best-effort general construction, accepted
    only if every edge then passes the linear checks.
    """
    a = analyze(g)
    if mode == "m1":
        return build_m1(g, a, q_override)
    if mode == "general":
        return build_general(g, a, seed, q_override, max_retries)
    if mode == "keyless":
        return build_keyless(g, a, seed, q_override, max_retries)
    if mode != "auto":
        raise ValueError(f"unknown build mode {mode!r}")
    regime = classify(g, a).regime
    if regime is Regime.KEYLESS:
        return build_keyless(g, a, seed, q_override, max_retries)
    if regime is Regime.EXTREMAL:
        if g.M == 1:
            return build_m1(g, a, q_override)
        return build_general(g, a, seed, q_override, max_retries)
    if regime is Regime.SUB_EXTREMAL:
        raise PreconditionError("graph has an internal qualified edge; no extremal construction")
    from .verify import verify_code  # circular at import time

    code = build_general(g, a, seed, q_override, max_retries, check_regime=False)
    if not verify_code(code).valid:
        raise BuildError("best-effort construction failed verification")
    return code


# -- encode / decode -------------------------------------------------------

def encode(code: LinearSecureCode, w, z=()) -> dict:
    w = np.asarray(w, dtype=np.int64).reshape(-1)
    z = np.asarray(z, dtype=np.int64).reshape(-1)
    if w.size != code.K:
        raise ValueError(f"expected {code.K} source symbols, got {w.size}")
    if z.size != code.zdim:
        raise ValueError(f"expected {code.zdim} key symbols, got {z.size}")
    x = np.mod(np.concatenate([w, z]), code.q)
    return {v: code.field.matmul(code.matrices[v], x) for v in code.graph.nodes}


def decode(code: LinearSecureCode, edge, vi, vj) -> np.ndarray:
    """Recover the edge's sources (ascending index) from its two stored vectors.

    ``vi`` belongs to ``edge[0]`` and ``vj`` to ``edge[1]``.
    """
    a, b = edge
    e = code.graph.edge(a, b)
    if not e.label:
        raise ValueError(f"edge {{{a},{b}}} is unqualified; nothing to decode")
    if (a, b) != e.ref:
        vi, vj = vj, vi
    vi = np.asarray(vi, dtype=np.int64).reshape(-1)
    vj = np.asarray(vj, dtype=np.int64).reshape(-1)
    for v, vec in ((e.a, vi), (e.b, vj)):
        if vec.size != code.matrices[v].shape[0]:
            raise ValueError(f"node {v} stores {code.matrices[v].shape[0]} symbols, got {vec.size}")
    d = code.decoders.get(e.ref)
    if d is None:
        raise BuildError(f"no decoder for edge {{{e.a},{e.b}}}")
    return code.field.matmul(d, np.concatenate([vi, vj]))


# -- file format -----------------------------------------------------------

def emit_code(code: LinearSecureCode) -> str:
    lines = [f"q {code.q}", f"K {code.K}", f"M {code.M}", f"zdim {code.zdim}",
             f"kind {code.kind}", f"seed {code.seed}"]
    for v in code.graph.nodes:
        lines.append(f"node {v}")
        for row in code.matrices[v]:
            lines.append("row " + " ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_code(text: str, g: StorageGraph) -> LinearSecureCode:
    header = {}
    matrices: dict = {}
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        key = tok[0]
        if key in ("q", "K", "M", "zdim", "kind", "seed"):
            if len(tok) != 2 or key in header:
                raise CodeFormatError(f"line {lineno}: bad or repeated header {key}")
            header[key] = tok[1]
        elif key == "node":
            if len(tok) != 2 or tok[1] in matrices:
                raise CodeFormatError(f"line {lineno}: bad or repeated node line")
            current = tok[1]
            matrices[current] = []
        elif key == "row":
            if current is None:
                raise CodeFormatError(f"line {lineno}: row before any node")
            try:
                matrices[current].append([int(x) for x in tok[1:]])
            except ValueError:
                raise CodeFormatError(f"line {lineno}: non-integer coefficient") from None
        else:
            raise CodeFormatError(f"line {lineno}: unknown directive {key!r}")
    missing = [h for h in ("q", "K", "M", "zdim", "kind", "seed") if h not in header]
    if missing:
        raise CodeFormatError(f"missing header {missing[0]}")
    try:
        q, K, M, zdim, seed = (int(header[h]) for h in ("q", "K", "M", "zdim", "seed"))
    except ValueError:
        raise CodeFormatError("non-integer header value") from None
    kind = header["kind"]
    if kind not in KINDS:
        raise CodeFormatError(f"unknown code kind {kind!r}")
    if (K, M) != (g.K, g.M):
        raise CodeFormatError(f"code is for K={K}, M={M}; graph has K={g.K}, M={g.M}")
    if set(matrices) != set(g.nodes):
        raise CodeFormatError("code nodes do not match graph nodes")
    try:
        field = PrimeField(q)
    except ValueError as exc:
        raise CodeFormatError(str(exc)) from None
    width = K + zdim
    for v, rows in matrices.items():
        if any(len(r) != width for r in rows):
            raise CodeFormatError(f"node {v}: rows must have {width} coefficients")
        if any(not 0 <= x < q for r in rows for x in r):
            raise CodeFormatError(f"node {v}: coefficient outside [0, {q})")
    return _finish(field, g, {v: np.array(r, dtype=np.int64).reshape(-1, width)
                              for v, r in matrices.items()}, zdim, kind, seed)
