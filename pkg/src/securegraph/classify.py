"""Extremal key-rate regime of a storage graph, with checkable witnesses."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .graph import StorageGraph
from .structure import ComponentAnalysis, analyze


class Regime(str, enum.Enum):
    KEYLESS = "Keyless"
    EXTREMAL = "ExtremalOneOverM"
    SUB_EXTREMAL = "SubExtremal"
    UNCHARACTERIZED = "Uncharacterized"


@dataclass(frozen=True)
class ClassificationResult:
    regime: Regime
    M: int
    # SubExtremal: (k, edge) pairs. Uncharacterized: see the two lists below.
    witnesses: tuple = ()
    nonempty_common: tuple = ()
    union_violations: tuple = ()
    claimed_capacity: object = "unknown"

    @property
    def capacity_text(self) -> str:
        c = self.claimed_capacity
        return str(c) if isinstance(c, Fraction) else c

    @property
    def positive(self) -> bool:
        return self.regime in (Regime.KEYLESS, Regime.EXTREMAL)


def union_condition_violations(g: StorageGraph, a: ComponentAnalysis) -> list:
    """Edges whose label differs from the union of endpoint common sources."""
    c = a.common_sources
    return [e for e in g.edges if (c[e.a] | c[e.b]) != e.label]


def classify(g: StorageGraph, a: ComponentAnalysis | None = None) -> ClassificationResult:
    if a is None:
        a = analyze(g)
    elif a.nodes != g.nodes or a != analyze(g):
        raise ValueError("component analysis was not derived from this graph")

    violations = union_condition_violations(g, a)
    if not violations:
        return ClassificationResult(Regime.KEYLESS, g.M, claimed_capacity="unbounded")

    core = a.nondegenerate_nodes
    with_common = tuple(v for v in core if a.common_sources[v])
    if core and not with_common:
        witnesses = tuple(
            (k, e) for k in range(1, g.K + 1) for e in a.per_source[k].core_internal_qualified
        )
        if not witnesses:
            return ClassificationResult(Regime.EXTREMAL, g.M, claimed_capacity=Fraction(1, g.M))
        return ClassificationResult(
            Regime.SUB_EXTREMAL, g.M, witnesses=witnesses,
            claimed_capacity=f"< {Fraction(1, g.M)}",
        )
    return ClassificationResult(
        Regime.UNCHARACTERIZED, g.M,
        nonempty_common=with_common,
        union_violations=tuple(violations),
    )


def format_classification(r: ClassificationResult) -> str:
    lines = [f"regime\t{r.regime.value}", f"capacity\t{r.capacity_text}"]
    for k, e in r.witnesses:
        lines.append(f"witness\tk={k}\tedge\t{{{e.a},{e.b}}}")
    for v in r.nonempty_common:
        lines.append(f"common_nonempty\t{v}")
    for e in r.union_violations:
        lines.append(f"union_violation\t{{{e.a},{e.b}}}")
    return "\n".join(lines) + "\n"
