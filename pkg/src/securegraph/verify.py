"""Exact correctness/security verification of linear secure storage codes.

Two independent routes:

* linear: for independent uniform inputs ``X`` and a linear map ``A``,
  ``H(A X | X_S) = rank(A[:, not S])`` in units of ``log q``.
* oracle: enumerate every input tuple and compare the induced distributions by
  counting. No floating point anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .codes import LinearSecureCode, _finish, selector
from .field import PrimeField
from .graph import StorageGraph
from .structure import ComponentAnalysis, analyze

DEFAULT_BUDGET = 10**7


class BudgetExceeded(Exception):
    pass


def cond_entropy_linear(field: PrimeField, rows: np.ndarray, given) -> int:
    """``H(rows @ X | X_given)`` in log_q units."""
    rows = np.asarray(rows)
    keep = [c for c in range(rows.shape[1]) if c not in set(given)]
    if rows.shape[0] == 0 or not keep:
        return 0
    return field.rank(rows[:, keep])


def _w_cols(code: LinearSecureCode, sources) -> list[int]:
    return [k - 1 for k in sorted(sources)]


def check_correctness_linear(code: LinearSecureCode, edge) -> bool:
    e = code.graph.edge(*edge)
    if not e.label:
        raise ValueError(f"edge {{{e.a},{e.b}}} is unqualified")
    stacked = code.stacked(e.a, e.b)
    sel = selector(code.K, code.width, e.label)
    f = code.field
    return f.rank(np.vstack([stacked, sel])) == f.rank(stacked)


def check_security_linear(code: LinearSecureCode, edge) -> bool:
    e = code.graph.edge(*edge)
    stacked = code.stacked(e.a, e.b)
    given_desired = _w_cols(code, e.label)
    given_all = list(range(code.K))
    return (cond_entropy_linear(code.field, stacked, given_desired)
            == cond_entropy_linear(code.field, stacked, given_all))


# -- enumeration oracle ----------------------------------------------------

@dataclass(frozen=True)
class OracleResult:
    correct: bool | None  # None on unqualified edges
    secure: bool
    # log_q units; exact because outputs of a linear map are uniform on a coset
    H_joint: int
    H_given_desired: int
    H_given_all: int


def _exact_log(count: int, q: int) -> int:
    r, x = 0, 1
    while x < count:
        x *= q
        r += 1
    if x != count:
        raise ArithmeticError(f"support size {count} is not a power of {q}")
    return r


def _uniform_support(keys: np.ndarray) -> int:
    _, counts = np.unique(keys, return_counts=True)
    if counts.min() != counts.max():
        raise ArithmeticError("non-uniform output distribution from a linear map")
    return counts.size


def entropy_oracle(code: LinearSecureCode, edge, budget: int = DEFAULT_BUDGET) -> OracleResult:
    """Brute-force verdicts for one edge by enumerating all ``q^(K+zdim)`` inputs."""
    e = code.graph.edge(*edge)
    q = code.q
    total = q ** code.width
    if total > budget:
        raise BudgetExceeded(f"{total} input tuples exceed budget {budget}")
    desired = _w_cols(code, e.label)
    rest = [c for c in range(code.K) if c not in desired]
    zcols = list(range(code.K, code.width))
    order = desired + rest + zcols  # most significant digit first
    Fn, Rn, Zn = q ** len(desired), q ** len(rest), q ** len(zcols)

    idx = np.arange(total, dtype=np.int64)
    stacked = code.stacked(e.a, e.b)
    d = stacked.shape[0]
    out = np.zeros((total, d), dtype=np.int64)
    for pos, col in enumerate(order):
        digit = (idx // q ** (len(order) - 1 - pos)) % q
        out = (out + np.outer(digit, stacked[:, col])) % q
    if d == 0:
        keys = np.zeros(total, dtype=np.int64)
    elif q ** d < 2**62:
        keys = out @ (q ** np.arange(d, dtype=np.int64))
    else:
        _, keys = np.unique(out, axis=0, return_inverse=True)
        keys = keys.reshape(-1)
    wf = idx // (Rn * Zn)

    correct = None
    if e.label:
        by_key = np.argsort(keys, kind="stable")
        ks, fs = keys[by_key], wf[by_key]
        same = ks[1:] == ks[:-1]
        correct = bool(np.all(fs[1:][same] == fs[:-1][same]))

    grid = np.sort(keys.reshape(Fn, Rn, Zn), axis=2)
    secure = bool(np.all(grid == grid[:, :1, :]))

    H_joint = _exact_log(_uniform_support(keys), q)
    H_given_desired = _exact_log(_uniform_support(keys.reshape(Fn, Rn * Zn)[0]), q)
    H_given_all = _exact_log(_uniform_support(keys.reshape(Fn * Rn, Zn)[0]), q)
    return OracleResult(correct, secure, H_joint, H_given_desired, H_given_all)


# -- lemma audits ----------------------------------------------------------

@dataclass
class AuditRecord:
    skipped: bool = False
    failures: list = field(default_factory=list)
    node_rank: dict = field(default_factory=dict)
    node_key_rank: dict = field(default_factory=dict)
    edge_rank: dict = field(default_factory=dict)
    global_key_rank: int = 0

    @property
    def passed(self) -> bool:
        return not self.skipped and not self.failures


def audit_lemmas(code: LinearSecureCode, g: StorageGraph | None = None,
                 a: ComponentAnalysis | None = None) -> AuditRecord:
    """Finite-length rank analogs of the entropy lemmas behind the rate-1/M converse.

    * every non-degenerate node: rank(A_n) = M and its key columns have rank M;
    * every qualified edge between non-degenerate nodes: rank(A_edge) = 2M;
    * the key columns of all nodes together have rank M;
    * every node is independent of its non-common sources, with and without
      conditioning on the common ones.
    """
    g = code.graph if g is None else g
    a = analyze(g) if a is None else a
    rec = AuditRecord()
    if code.zdim == 0:
        rec.skipped = True
        return rec
    f, M, K = code.field, code.M, code.K
    zc = list(range(K, code.width))
    all_w = list(range(K))
    for v in a.nondegenerate_nodes:
        A = code.matrices[v]
        rec.node_rank[v] = f.rank(A)
        rec.node_key_rank[v] = f.rank(A[:, zc])
        if rec.node_rank[v] != M:
            rec.failures.append(f"message size: rank(A_{v}) = {rec.node_rank[v]} != {M}")
        if rec.node_key_rank[v] != M:
            rec.failures.append(f"noise size: key rank at {v} = {rec.node_key_rank[v]} != {M}")
    core = set(a.nondegenerate_nodes)
    for e in g.qualified_edges():
        if e.a in core and e.b in core:
            r = f.rank(code.stacked(e.a, e.b))
            rec.edge_rank[e.ref] = r
            if r != 2 * M:
                rec.failures.append(f"qualified edge size: rank on {{{e.a},{e.b}}} = {r} != {2 * M}")
    rec.global_key_rank = f.rank(np.vstack([code.matrices[v][:, zc] for v in g.nodes]))
    if rec.global_key_rank != M:
        rec.failures.append(f"noise alignment: global key rank {rec.global_key_rank} != {M}")
    for v in g.nodes:
        A = code.matrices[v]
        common = _w_cols(code, a.common_sources[v])
        non_common = [c for c in all_w if c not in common]
        if cond_entropy_linear(f, A, common) != cond_entropy_linear(f, A, all_w):
            rec.failures.append(f"independence: {v} leaks non-common sources given common ones")
        if cond_entropy_linear(f, A, non_common) != f.rank(A):
            rec.failures.append(f"independence: {v} leaks non-common sources")
    return rec


# -- reports ---------------------------------------------------------------

@dataclass
class EdgeVerdict:
    edge: tuple
    label: frozenset
    correct: bool | None
    secure: bool
    method: str = "linear"
    oracle: OracleResult | None = None

    @property
    def agrees(self) -> bool:
        o = self.oracle
        return o is None or (o.correct == self.correct and o.secure == self.secure)


@dataclass
class VerificationReport:
    code: LinearSecureCode
    edges: list
    node_entropy: dict
    edge_entropy: dict
    key_entropy: int
    audit: AuditRecord | None = None
    oracle_skipped: list = field(default_factory=list)

    @property
    def rate(self):
        return self.code.rate

    @property
    def valid(self) -> bool:
        ok = all(ev.correct is not False and ev.secure and ev.agrees for ev in self.edges)
        if self.audit is not None and not self.audit.skipped:
            ok = ok and self.audit.passed
        return ok


def verify_code(code: LinearSecureCode, oracle: bool = False, audit: bool = False,
                budget: int = DEFAULT_BUDGET) -> VerificationReport:
    g = code.graph
    f = code.field
    verdicts = []
    skipped = []
    for e in g.edges:
        correct = check_correctness_linear(code, e.ref) if e.label else None
        ev = EdgeVerdict(e.ref, e.label, correct, check_security_linear(code, e.ref))
        if oracle:
            try:
                ev.oracle = entropy_oracle(code, e.ref, budget)
                ev.method = "linear+oracle"
            except BudgetExceeded:
                skipped.append(e.ref)
        verdicts.append(ev)
    zc = list(range(code.K, code.width))
    return VerificationReport(
        code=code,
        edges=verdicts,
        node_entropy={v: f.rank(code.matrices[v]) for v in g.nodes},
        edge_entropy={e.ref: f.rank(code.stacked(e.a, e.b)) for e in g.qualified_edges()},
        key_entropy=cond_entropy_linear(
            f, np.vstack([code.matrices[v] for v in g.nodes]), range(code.K)) if zc else 0,
        audit=audit_lemmas(code) if audit else None,
        oracle_skipped=skipped,
    )


def _flag(x) -> str:
    return "-" if x is None else ("pass" if x else "FAIL")


def format_report(r: VerificationReport) -> str:
    c = r.code
    rate = "unbounded" if r.rate is None else str(r.rate)
    out = [f"code\tkind={c.kind}\tq={c.q}\tzdim={c.zdim}\trate={rate}"]
    for ev in r.edges:
        lab = ",".join(map(str, sorted(ev.label))) or "-"
        line = (f"edge\t{{{ev.edge[0]},{ev.edge[1]}}}\t{lab}\tcorrect={_flag(ev.correct)}"
                f"\tsecure={_flag(ev.secure)}\tmethod={ev.method}")
        if ev.oracle is not None:
            o = ev.oracle
            line += (f"\toracle_correct={_flag(o.correct)}\toracle_secure={_flag(o.secure)}"
                     f"\tH={o.H_joint}\tH|desired={o.H_given_desired}\tH|W={o.H_given_all}")
        out.append(line)
    for e in r.oracle_skipped:
        out.append(f"oracle_skipped\t{{{e[0]},{e[1]}}}")
    for v, h in r.node_entropy.items():
        out.append(f"H_node\t{v}\t{h}")
    for (a, b), h in r.edge_entropy.items():
        out.append(f"H_edge\t{{{a},{b}}}\t{h}")
    out.append(f"H_all_given_W\t{r.key_entropy}")
    if r.audit is not None:
        if r.audit.skipped:
            out.append("audit\tskipped")
        else:
            out.append(f"audit\t{'pass' if r.audit.passed else 'FAIL'}")
            out += [f"audit_failure\t{msg}" for msg in r.audit.failures]
    out.append("VALID" if r.valid else "INVALID")
    return "\n".join(out) + "\n"


# -- converse search -------------------------------------------------------

def exhaustive_converse_search(g: StorageGraph, q: int, node_dim: int, zdim: int,
                               budget: int = DEFAULT_BUDGET) -> LinearSecureCode | None:
    """First scalar-linear code of the given shape that is correct and secure
    on every edge, or None if the whole space is empty of them.

    Search is depth-first over nodes in order, pruning as soon as an edge with
    both endpoints assigned fails; the space covered is the full product of
    per-node coefficient matrices.
    """
    field = PrimeField(q)
    width = g.K + zdim
    space = q ** (node_dim * width * g.N)
    if space > budget:
        raise BudgetExceeded(f"{space} candidate codes exceed budget {budget}")
    options = [np.array(t, dtype=np.int64).reshape(node_dim, width)
               for t in itertools.product(range(q), repeat=node_dim * width)]
    cache: dict = {}

    def edge_ok(label, i, j) -> bool:
        key = (label, i, j)
        if key not in cache:
            stacked = np.vstack([options[i], options[j]])
            desired = [k - 1 for k in sorted(label)]
            ok = (cond_entropy_linear(field, stacked, desired)
                  == cond_entropy_linear(field, stacked, range(g.K)))
            if ok and label:
                sel = selector(g.K, width, label)
                ok = field.rank(np.vstack([stacked, sel])) == field.rank(stacked)
            cache[key] = ok
        return cache[key]

    pos = {v: i for i, v in enumerate(g.nodes)}
    # edges become checkable once their later endpoint is assigned
    due = {v: [] for v in g.nodes}
    for e in g.edges:
        later = e.a if pos[e.a] > pos[e.b] else e.b
        due[later].append(e)
    choice: dict = {}

    def dfs(depth: int) -> bool:
        if depth == g.N:
            return True
        v = g.nodes[depth]
        for i in range(len(options)):
            choice[v] = i
            if all(edge_ok(e.label, choice[e.a], choice[e.b]) for e in due[v]):
                if dfs(depth + 1):
                    return True
        del choice[v]
        return False

    if not dfs(0):
        return None
    return _finish(field, g, {v: options[choice[v]] for v in g.nodes}, zdim, "search", 0)

