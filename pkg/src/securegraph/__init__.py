"""Secure storage codes over labeled graphs: structure analysis, extremal
key-rate classification, linear code synthesis over prime fields, and exact
verification."""

from .classify import ClassificationResult, Regime, classify
from .codes import (
    BuildError,
    LinearSecureCode,
    PreconditionError,
    build,
    build_general,
    build_keyless,
    build_m1,
    decode,
    emit_code,
    encode,
    parse_code,
)
from .field import PrimeField, next_prime_at_least
from .graph import GraphError, StorageGraph, emit_graph, parse_graph
from .instances import load_instance
from .structure import ComponentAnalysis, analyze
from .verify import (
    audit_lemmas,
    entropy_oracle,
    exhaustive_converse_search,
    verify_code,
)

__all__ = [
    "BuildError", "ClassificationResult", "ComponentAnalysis", "GraphError",
    "LinearSecureCode", "PreconditionError", "PrimeField", "Regime", "StorageGraph",
    "analyze", "audit_lemmas", "build", "build_general", "build_keyless", "build_m1",
    "classify", "decode", "emit_code", "emit_graph", "encode", "entropy_oracle",
    "exhaustive_converse_search", "load_instance", "next_prime_at_least", "parse_code",
    "parse_graph", "verify_code",
]
