"""Labeled storage graphs and their line-oriented text format.

Format::

    # comment
    K 3
    M 2
    edge V1 V2 1,2
    edge V2 V5 -

``-`` marks an unqualified edge (empty label set).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple

_NODE_RE = re.compile(r"^[A-Za-z0-9_]+$")


class GraphError(Exception):
    """Base class for graph parse/validation failures."""


class GraphSyntaxError(GraphError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class GraphValidationError(GraphError):
    pass


class Edge(NamedTuple):
    a: str
    b: str
    label: frozenset

    @property
    def ref(self) -> tuple[str, str]:
        return (self.a, self.b)

    @property
    def qualified(self) -> bool:
        return bool(self.label)


EdgeRef = tuple  # (a, b), canonical: a precedes b in node order


@dataclass(frozen=True)
class StorageGraph:
    K: int
    M: int
    nodes: tuple
    edges: tuple
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.K < 1:
            raise GraphValidationError(f"K must be >= 1, got {self.K}")
        if self.M < 1:
            raise GraphValidationError(f"M must be >= 1, got {self.M}")
        if self.M > self.K:
            raise GraphValidationError(f"M={self.M} exceeds K={self.K}")
        order = {v: i for i, v in enumerate(self.nodes)}
        if len(order) != len(self.nodes):
            raise GraphValidationError("duplicate node identifiers")
        index = {}
        touched = set()
        for e in self.edges:
            if e.a == e.b:
                raise GraphValidationError(f"self-loop at {e.a}")
            for v in (e.a, e.b):
                if v not in order:
                    raise GraphValidationError(f"edge references unknown node {v}")
            if order[e.a] > order[e.b]:
                raise GraphValidationError(f"edge {e.a}-{e.b} is not canonically ordered")
            if e.ref in index:
                raise GraphValidationError(f"duplicate edge {{{e.a},{e.b}}}")
            if len(e.label) not in (0, self.M):
                raise GraphValidationError(
                    f"edge {{{e.a},{e.b}}}: label cardinality {len(e.label)} not in {{0, {self.M}}}")
            bad = [k for k in e.label if not 1 <= k <= self.K]
            if bad:
                raise GraphValidationError(
                    f"edge {{{e.a},{e.b}}}: source index {bad[0]} outside 1..{self.K}")
            index[e.ref] = e
            touched.update(e.ref)
        isolated = [v for v in self.nodes if v not in touched]
        if isolated:
            raise GraphValidationError(f"isolated node {isolated[0]}")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_edges(cls, K: int, M: int, edges, nodes=None) -> StorageGraph:
        """Build from ``(a, b, labels)`` triples; node order is first appearance
        unless ``nodes`` is given."""
        edges = [(a, b, frozenset(lab)) for a, b, lab in edges]
        if nodes is None:
            nodes = []
            for a, b, _ in edges:
                for v in (a, b):
                    if v not in nodes:
                        nodes.append(v)
        order = {v: i for i, v in enumerate(nodes)}
        canon = []
        for a, b, lab in edges:
            if a in order and b in order and order[a] > order[b]:
                a, b = b, a
            canon.append(Edge(a, b, lab))
        return cls(K, M, tuple(nodes), tuple(canon))

    @property
    def N(self) -> int:
        return len(self.nodes)

    def position(self, v: str) -> int:
        return self.nodes.index(v)

    def edge(self, a: str, b: str) -> Edge:
        ref = self.canonical(a, b)
        try:
            return self._index[ref]
        except KeyError:
            raise KeyError(f"no edge {{{a},{b}}}") from None

    def canonical(self, a: str, b: str) -> tuple[str, str]:
        if a not in self.nodes or b not in self.nodes:
            raise KeyError(f"unknown node in {{{a},{b}}}")
        return (a, b) if self.position(a) < self.position(b) else (b, a)

    def label(self, a: str, b: str) -> frozenset:
        return self.edge(a, b).label

    def has_edge(self, a: str, b: str) -> bool:
        return (a, b) in self._index or (b, a) in self._index

    def incident(self, v: str) -> list[Edge]:
        return [e for e in self.edges if v in e.ref]

    def qualified_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.label]


def _format_label(label) -> str:
    return ",".join(str(k) for k in sorted(label)) if label else "-"


def parse_graph(text: str) -> StorageGraph:
    K = M = None
    raw_edges = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0]
        if head in ("K", "M"):
            if len(tok) != 2:
                raise GraphSyntaxError(lineno, f"expected '{head} <int>'")
            if raw_edges:
                raise GraphSyntaxError(lineno, f"header {head} after first edge")
            try:
                val = int(tok[1])
            except ValueError:
                raise GraphSyntaxError(lineno, f"{head} value {tok[1]!r} is not an integer") from None
            if head == "K":
                if K is not None:
                    raise GraphSyntaxError(lineno, "duplicate K header")
                K = val
            else:
                if M is not None:
                    raise GraphSyntaxError(lineno, "duplicate M header")
                M = val
        elif head == "edge":
            if len(tok) != 4:
                raise GraphSyntaxError(lineno, "expected 'edge <nodeA> <nodeB> <labels>'")
            if K is None or M is None:
                raise GraphValidationError(f"line {lineno}: missing K/M header before first edge")
            a, b, labels = tok[1:]
            for v in (a, b):
                if not _NODE_RE.match(v):
                    raise GraphSyntaxError(lineno, f"bad node identifier {v!r}")
            if labels == "-":
                lab = frozenset()
            else:
                try:
                    items = [int(x) for x in labels.split(",")]
                except ValueError:
                    raise GraphSyntaxError(lineno, f"bad label list {labels!r}") from None
                if len(set(items)) != len(items):
                    raise GraphSyntaxError(lineno, f"repeated source in label {labels!r}")
                lab = frozenset(items)
            raw_edges.append((lineno, a, b, lab))
        else:
            raise GraphSyntaxError(lineno, f"unknown directive {head!r}")
    if K is None or M is None:
        raise GraphValidationError("missing K/M header")
    if not raw_edges:
        raise GraphValidationError("graph has no edges")
    seen = set()
    for lineno, a, b, _ in raw_edges:
        if a == b:
            raise GraphValidationError(f"line {lineno}: self-loop at {a}")
        key = frozenset((a, b))
        if key in seen:
            raise GraphValidationError(f"line {lineno}: duplicate edge {{{a},{b}}}")
        seen.add(key)
    return StorageGraph.from_edges(K, M, [(a, b, lab) for _, a, b, lab in raw_edges])


def emit_graph(g: StorageGraph) -> str:
    lines = [f"K {g.K}", f"M {g.M}"]
    lines += [f"edge {e.a} {e.b} {_format_label(e.label)}" for e in g.edges]
    return "\n".join(lines) + "\n"
