import pytest
from hypothesis import given

from securegraph.graph import (
    GraphSyntaxError,
    GraphValidationError,
    StorageGraph,
    emit_graph,
    parse_graph,
)

from conftest import storage_graphs


def test_parse_fig4_literal():
    g = parse_graph("K 2\nM 1\nedge V1 V3 1\nedge V1 V2 2\nedge V2 V4 2\nedge V3 V4 2")
    assert g.N == 4 and len(g.edges) == 4
    assert g.nodes == ("V1", "V3", "V2", "V4")
    assert g.label("V1", "V3") == {1}
    assert g.label("V3", "V1") == {1}


def test_parse_minimal():
    g = parse_graph("K 1\nM 1\nedge A B 1")
    assert g.nodes == ("A", "B") and g.edges[0].label == {1}


def test_comments_and_blank_lines():
    g = parse_graph("# header\n\nK 2 # two sources\nM 1\n\nedge A B 2  # trailing\n")
    assert g.label("A", "B") == {2}


@pytest.mark.parametrize("text, exc, match", [
    ("K 2\nM 2\nedge A B 1", GraphValidationError, "cardinality 1"),
    ("K 1\nM 1\nedge A A 1", GraphValidationError, "self-loop"),
    ("K 1\nM 1\nedge A B 1\nedge B A -", GraphValidationError, "duplicate edge"),
    ("K 1\nM 1\nedge A B 1\nedge A B 1", GraphValidationError, "duplicate edge"),
    ("K 2\nM 1\nedge A B 3", GraphValidationError, "source index 3"),
    ("K 2\nM 1\nedge A B 0", GraphValidationError, "source index 0"),
    ("M 1\nedge A B 1", GraphValidationError, "missing K/M"),
    ("K 1\nedge A B 1", GraphValidationError, "missing K/M"),
    ("K 1\nM 1", GraphValidationError, "no edges"),
    ("K 1\nM 2\nedge A B -", GraphValidationError, "exceeds K"),
])
def test_validation_errors(text, exc, match):
    with pytest.raises(exc, match=match):
        parse_graph(text)


@pytest.mark.parametrize("text, lineno", [
    ("K 1\nM 1\nvertex A", 3),
    ("K x\nM 1\nedge A B 1", 1),
    ("K 1\nK 1\nM 1\nedge A B 1", 2),
    ("K 1\nM 1\nedge A B", 3),
    ("K 1\nM 1\nedge A B 1\nM 1", 4),
    ("K 2\nM 1\nedge A B a", 3),
    ("K 2\nM 2\nedge A B 1,1", 3),
    ("K 1\nM 1\nedge A-1 B 1", 3),
])
def test_syntax_errors_report_line(text, lineno):
    with pytest.raises(GraphSyntaxError) as info:
        parse_graph(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_isolated_node_rejected():
    with pytest.raises(GraphValidationError, match="isolated"):
        StorageGraph.from_edges(1, 1, [("A", "B", {1})], nodes=["A", "B", "C"])


def test_emit_examples():
    g = parse_graph("K 1\nM 1\nedge A B 1")
    assert emit_graph(g) == "K 1\nM 1\nedge A B 1\n"
    g = parse_graph("K 2\nM 1\nedge X Y -\nedge Y Z 2")
    assert "edge X Y -\n" in emit_graph(g)


def test_emit_roundtrip_bundled(instance):
    for name in ("fig4", "fig5_like", "fig6_like"):
        g = instance(name)
        assert parse_graph(emit_graph(g)) == g


@given(storage_graphs())
def test_roundtrip_property(g):
    assert parse_graph(emit_graph(g)) == g


def test_edge_orientation_is_canonical():
    g1 = parse_graph("K 1\nM 1\nedge A B 1\nedge C B -")
    g2 = parse_graph("K 1\nM 1\nedge A B 1\nedge B C -")
    assert g1.edge("B", "C") == g2.edge("C", "B")
