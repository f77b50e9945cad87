"""Executable exact completion of finite sets: weak limits, proof-relevant
logic, full families, dependent products and an axiom audit."""

__version__ = "0.1.0"
