import networkx as nx
import pytest
from hypothesis import given

from securegraph.graph import StorageGraph, parse_graph
from securegraph.structure import (
    analyze,
    characteristic_view,
    common_sources,
    internal_qualified_edges,
    unqualified_components,
)

from conftest import storage_graphs

CYCLE_ALT = "K 2\nM 1\nedge V1 V2 1\nedge V2 V3 2\nedge V3 V4 1\nedge V4 V1 2"


def refs(edges):
    return [e.ref for e in edges]


def test_characteristic_view_fig4(instance):
    g = instance("fig4_literal")
    v = characteristic_view(g, 1)
    assert refs(v.qualified_edges) == [("V1", "V3")]
    assert sorted(refs(v.unqualified_edges)) == [("V1", "V2"), ("V2", "V4"), ("V3", "V4")]


def test_characteristic_view_edge_cases():
    g = parse_graph("K 3\nM 1\nedge A B 1\nedge B C 2")
    assert characteristic_view(g, 3).qualified_edges == ()
    assert len(characteristic_view(g, 3).unqualified_edges) == 2
    single = parse_graph("K 1\nM 1\nedge A B 1")
    assert refs(characteristic_view(single, 1).qualified_edges) == [("A", "B")]
    with pytest.raises(ValueError):
        characteristic_view(single, 2)


def test_components_examples(instance):
    v = characteristic_view(instance("fig4_literal"), 1)
    comp, U = unqualified_components(v)
    assert U == 1 and set(comp.values()) == {1}

    g = parse_graph("K 1\nM 1\nedge A B 1\nedge B C 1\nedge C D 1")
    comp, U = unqualified_components(characteristic_view(g, 1))
    assert U == 4 and comp == {"A": 1, "B": 2, "C": 3, "D": 4}

    g = parse_graph("K 2\nM 1\nedge A B 2\nedge C D 2\nedge B C 1")
    comp, U = unqualified_components(characteristic_view(g, 1))
    assert U == 2 and comp["A"] == comp["B"] != comp["C"] == comp["D"]


def test_internal_qualified_examples(instance):
    v = characteristic_view(instance("fig4_literal"), 1)
    comp, _ = unqualified_components(v)
    assert refs(internal_qualified_edges(v, comp)) == [("V1", "V3")]

    g = parse_graph(CYCLE_ALT)
    for k in (1, 2):
        v = characteristic_view(g, k)
        comp, U = unqualified_components(v)
        assert U == 2
        assert internal_qualified_edges(v, comp) == []

    g = parse_graph("K 2\nM 1\nedge A B 2")
    v = characteristic_view(g, 1)
    assert internal_qualified_edges(v, unqualified_components(v)[0]) == []


def test_common_sources_examples():
    g = StorageGraph.from_edges(3, 2, [("V1", "A", {1, 2}), ("V1", "B", {2, 3}),
                                       ("V1", "C", {1, 3})])
    assert common_sources(g, "V1") == frozenset()
    g = StorageGraph.from_edges(3, 2, [("V3", "A", {1, 2}), ("V3", "B", {1, 3})])
    assert common_sources(g, "V3") == {1}
    g = StorageGraph.from_edges(3, 2, [("V", "A", {2, 3})])
    assert common_sources(g, "V") == {2, 3}
    g = StorageGraph.from_edges(2, 1, [("V", "A", {1}), ("V", "B", set())])
    assert common_sources(g, "V") == frozenset()
    with pytest.raises(KeyError):
        common_sources(g, "nope")


def test_analyze_examples(instance):
    a = analyze(instance("fig2_like"))
    assert a.degenerate == set(instance("fig2_like").nodes)
    assert a.nondegenerate_nodes == ()

    a = analyze(instance("fig4_literal"))
    assert a.degenerate == {"V2", "V4"}
    assert a.nondegenerate_nodes == ("V1", "V3")

    a = analyze(instance("fig4"))
    assert a.degenerate == frozenset()
    assert refs(a.source(1).core_internal_qualified) == [("V1", "V3")]

    a = analyze(parse_graph("K 1\nM 1\nedge A B 1"))
    assert a.degenerate == {"A", "B"}


def test_core_components_drop_degenerate_paths(instance):
    a = analyze(instance("fig4_literal"))
    s = a.source(1)
    assert refs(s.internal_qualified) == [("V1", "V3")]
    assert s.core_internal_qualified == ()
    assert set(s.core_component_id) == {"V1", "V3"} and s.core_U == 2


def _nx_partition(g, k, nodes):
    h = nx.Graph()
    h.add_nodes_from(nodes)
    h.add_edges_from(e.ref for e in g.edges
                     if k not in e.label and e.a in nodes and e.b in nodes)
    return {frozenset(c) for c in nx.connected_components(h)}


def _partition(comp):
    groups = {}
    for v, c in comp.items():
        groups.setdefault(c, set()).add(v)
    return {frozenset(s) for s in groups.values()}


@given(storage_graphs())
def test_analysis_invariants(g):
    a = analyze(g)
    for k in range(1, g.K + 1):
        s = a.source(k)
        assert _partition(s.component_id) == _nx_partition(g, k, set(g.nodes))
        assert _partition(s.core_component_id) == _nx_partition(g, k, set(a.nondegenerate_nodes))
        assert sorted(s.component_id.values()) == sorted(s.component_id.values())
        assert set(s.component_id.values()) == set(range(1, s.U + 1))
        expected = [e for e in g.edges if k in e.label
                    and s.component_id[e.a] == s.component_id[e.b]]
        assert list(s.internal_qualified) == expected
    for v in g.nodes:
        c = a.common_sources[v]
        inc = g.incident(v)
        assert all(c <= e.label for e in inc)
        assert (v in a.degenerate) == all(e.label == c for e in inc)
    for e in g.edges:
        assert a.common_sources[e.a] | a.common_sources[e.b] <= e.label


@given(storage_graphs())
def test_component_ids_invariant_under_relabeling(g):
    rename = {v: f"X{len(g.nodes) - i}" for i, v in enumerate(g.nodes)}
    h = StorageGraph.from_edges(g.K, g.M, [(rename[e.a], rename[e.b], e.label) for e in g.edges],
                                nodes=[rename[v] for v in g.nodes])
    a, b = analyze(g), analyze(h)
    for k in range(1, g.K + 1):
        pa = {frozenset(rename[v] for v in part) for part in _partition(a.source(k).component_id)}
        assert pa == _partition(b.source(k).component_id)
    assert {rename[v] for v in a.degenerate} == b.degenerate
