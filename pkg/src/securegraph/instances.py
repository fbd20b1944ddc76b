"""Bundled example graphs and random generators for each regime."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .classify import Regime, classify
from .graph import StorageGraph, parse_graph

BUNDLED = ("cycle4", "fig2_like", "fig4", "fig4_literal", "fig5_like", "fig6_like")


def instance_text(name: str) -> str:
    return resources.files("securegraph.data").joinpath(f"{name}.graph").read_text()


def load_instance(name: str) -> StorageGraph:
    if name not in BUNDLED:
        raise KeyError(f"no bundled instance {name!r}")
    return parse_graph(instance_text(name))


def _grow_signatures(rng, n_nodes, K, M, p_unqualified, extra_edges):
    """Random signature tree plus chords.

    Each node gets a vector in {0..3}^K. Edges only join nodes that differ in
    exactly M coordinates (labelled with those) or in none (unqualified), so
    unqualified paths never change a coordinate and no qualified edge can be
    internal.
    """
    sigs = [tuple(int(x) for x in rng.integers(0, 4, size=K))]
    edges = []
    for n in range(1, n_nodes):
        parent = int(rng.integers(0, n))
        s = list(sigs[parent])
        if rng.random() >= p_unqualified:
            for k in rng.choice(K, size=M, replace=False):
                s[k] = (s[k] + int(rng.integers(1, 4))) % 4
        sigs.append(tuple(s))
        edges.append((parent, n))
    present = {frozenset(e) for e in edges}
    for _ in range(extra_edges):
        i, j = (int(x) for x in rng.choice(n_nodes, size=2, replace=False))
        diff = sum(a != b for a, b in zip(sigs[i], sigs[j]))
        if diff in (0, M) and frozenset((i, j)) not in present:
            edges.append((i, j))
            present.add(frozenset((i, j)))
    out = []
    for i, j in edges:
        label = {k + 1 for k in range(K) if sigs[i][k] != sigs[j][k]}
        out.append((f"V{i + 1}", f"V{j + 1}", label))
    return out


def random_extremal_graph(rng: np.random.Generator, K: int, M: int, max_nodes: int,
                          max_tries: int = 1000) -> StorageGraph:
    """Random graph classified ExtremalOneOverM (rejection sampling on the
    common-source condition)."""
    for _ in range(max_tries):
        n = int(rng.integers(3, max_nodes + 1))
        edges = _grow_signatures(rng, n, K, M, p_unqualified=0.3,
                                 extra_edges=int(rng.integers(0, n + 1)))
        g = StorageGraph.from_edges(K, M, edges)
        if classify(g).regime is Regime.EXTREMAL:
            return g
    raise RuntimeError("could not sample an extremal-class graph")


def random_keyless_graph(rng: np.random.Generator, K: int, M: int, max_nodes: int,
                         max_tries: int = 1000) -> StorageGraph:
    """Random graph satisfying the keyless union condition.

    Nodes get planned common sets; an edge is allowed when the union of its
    endpoints' sets is empty or has exactly M elements, and takes that union
    as its label.
    """
    for _ in range(max_tries):
        n = int(rng.integers(2, max_nodes + 1))
        plans = [frozenset(int(k) + 1 for k in rng.choice(K, size=int(rng.integers(0, M + 1)),
                                                          replace=False))]
        edges = []
        for v in range(1, n):
            parent = int(rng.integers(0, v))
            for _ in range(50):
                c = frozenset(int(k) + 1 for k in rng.choice(K, size=int(rng.integers(0, M + 1)),
                                                             replace=False))
                if len(plans[parent] | c) in (0, M):
                    break
            else:
                c = frozenset()
                if len(plans[parent]) not in (0, M):
                    continue
            plans.append(c)
            edges.append((parent, len(plans) - 1))
        m = len(plans)
        if m < 2:
            continue
        present = {frozenset(e) for e in edges}
        for _ in range(int(rng.integers(0, m + 1))):
            i, j = (int(x) for x in rng.choice(m, size=2, replace=False))
            if len(plans[i] | plans[j]) in (0, M) and frozenset((i, j)) not in present:
                edges.append((i, j))
                present.add(frozenset((i, j)))
        g = StorageGraph.from_edges(
            K, M, [(f"V{i + 1}", f"V{j + 1}", plans[i] | plans[j]) for i, j in edges])
        if classify(g).regime is Regime.KEYLESS:
            return g
    raise RuntimeError("could not sample a keyless-class graph")
