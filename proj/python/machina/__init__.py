"""Majorization analysis of classical and quantum process models."""

from ._machina import (
    ClassicalModel,
    MachinaError,
    QuantumModel,
    build_qmachine,
    compare,
    completeness_residual,
    counterexample,
    isomorphic,
    lorenz_curve,
    parse_model,
    parse_quantum_model,
    process,
    process_names,
    renyi_entropy,
    strong_advantage_report,
    strong_minimality_report,
    transfer_chain,
    validate,
)

INF = float("inf")

__all__ = [
    "ClassicalModel",
    "INF",
    "MachinaError",
    "QuantumModel",
    "build_qmachine",
    "compare",
    "completeness_residual",
    "counterexample",
    "isomorphic",
    "lorenz_curve",
    "parse_model",
    "parse_quantum_model",
    "process",
    "process_names",
    "renyi_entropy",
    "strong_advantage_report",
    "strong_minimality_report",
    "transfer_chain",
    "validate",
]
