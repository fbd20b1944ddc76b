"""Per-source structure of a storage graph.

For every source ``k`` the graph is split into edges that demand ``W_k``
(qualified in the characteristic view) and the rest. Nodes joined by a path of
non-demanding edges form an unqualified component; a demanding edge with both
endpoints inside one component is an internal qualified edge.

Components are reported twice: over the full node set, and over the
non-degenerate core (degenerate nodes and their edges removed). The core
version is the one that matters for extremality.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import Edge, StorageGraph


@dataclass(frozen=True)
class CharacteristicView:
    source: int
    nodes: tuple
    qualified_edges: tuple
    unqualified_edges: tuple


@dataclass(frozen=True)
class SourceStructure:
    source: int
    component_id: dict
    U: int
    internal_qualified: tuple
    core_component_id: dict
    core_U: int
    core_internal_qualified: tuple


@dataclass(frozen=True)
class ComponentAnalysis:
    nodes: tuple
    per_source: dict  # k -> SourceStructure
    common_sources: dict  # node -> frozenset
    degenerate: frozenset
    nondegenerate_nodes: tuple
    core_edges: tuple

    def source(self, k: int) -> SourceStructure:
        return self.per_source[k]


def characteristic_view(g: StorageGraph, k: int, nodes=None) -> CharacteristicView:
    """Split edges by whether they demand source ``k``.

    ``nodes`` restricts the view to an induced subgraph.
    """
    if not 1 <= k <= g.K:
        raise ValueError(f"source index {k} outside 1..{g.K}")
    keep = g.nodes if nodes is None else tuple(v for v in g.nodes if v in set(nodes))
    inside = set(keep)
    edges = [e for e in g.edges if e.a in inside and e.b in inside]
    return CharacteristicView(
        source=k,
        nodes=keep,
        qualified_edges=tuple(e for e in edges if k in e.label),
        unqualified_edges=tuple(e for e in edges if k not in e.label),
    )


def unqualified_components(view: CharacteristicView) -> tuple[dict, int]:
    """Component ids 1..U by breadth-first search in node order."""
    adj = {v: [] for v in view.nodes}
    for e in view.unqualified_edges:
        adj[e.a].append(e.b)
        adj[e.b].append(e.a)
    comp: dict = {}
    U = 0
    for start in view.nodes:
        if start in comp:
            continue
        U += 1
        comp[start] = U
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in comp:
                    comp[w] = U
                    queue.append(w)
    return comp, U


def internal_qualified_edges(view: CharacteristicView, component_id: dict) -> list[Edge]:
    return [e for e in view.qualified_edges if component_id[e.a] == component_id[e.b]]


def common_sources(g: StorageGraph, v: str) -> frozenset:
    if v not in g.nodes:
        raise KeyError(f"unknown node {v}")
    labels = [e.label for e in g.incident(v)]
    return frozenset.intersection(*labels)


def is_degenerate(g: StorageGraph, v: str, common=None) -> bool:
    c = common_sources(g, v) if common is None else common
    return all(e.label == c for e in g.incident(v))


def analyze(g: StorageGraph) -> ComponentAnalysis:
    common = {v: common_sources(g, v) for v in g.nodes}
    degenerate = frozenset(v for v in g.nodes if is_degenerate(g, v, common[v]))
    core_nodes = tuple(v for v in g.nodes if v not in degenerate)
    per_source = {}
    for k in range(1, g.K + 1):
        full = characteristic_view(g, k)
        comp, U = unqualified_components(full)
        core = characteristic_view(g, k, core_nodes)
        core_comp, core_U = unqualified_components(core)
        per_source[k] = SourceStructure(
            source=k,
            component_id=comp,
            U=U,
            internal_qualified=tuple(internal_qualified_edges(full, comp)),
            core_component_id=core_comp,
            core_U=core_U,
            core_internal_qualified=tuple(internal_qualified_edges(core, core_comp)),
        )
    inside = set(core_nodes)
    return ComponentAnalysis(
        nodes=g.nodes,
        per_source=per_source,
        common_sources=common,
        degenerate=degenerate,
        nondegenerate_nodes=core_nodes,
        core_edges=tuple(e for e in g.edges if e.a in inside and e.b in inside),
    )


def format_analysis(g: StorageGraph, a: ComponentAnalysis) -> str:
    """Tab-separated, one record per line."""
    out = []
    for k in range(1, g.K + 1):
        s = a.per_source[k]
        out.append(f"source\t{k}\tU\t{s.U}\tcore_U\t{s.core_U}")
        for v in g.nodes:
            core = s.core_component_id.get(v, "-")
            out.append(f"component\t{k}\t{v}\t{s.component_id[v]}\t{core}")
        for e in s.internal_qualified:
            out.append(f"internal\t{k}\t{e.a}\t{e.b}")
        for e in s.core_internal_qualified:
            out.append(f"core_internal\t{k}\t{e.a}\t{e.b}")
    for v in g.nodes:
        c = a.common_sources[v]
        out.append(f"common\t{v}\t{','.join(map(str, sorted(c))) if c else '-'}")
    for v in g.nodes:
        if v in a.degenerate:
            out.append(f"degenerate\t{v}")
    return "\n".join(out) + "\n"
