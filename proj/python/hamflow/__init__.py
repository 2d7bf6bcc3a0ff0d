"""Logistics network flow models compiled to integer Hamiltonians."""

from ._hamflow import (
    Error,
    Hamiltonian,
    InfeasibleError,
    Instance,
    Model,
    ParseError,
    SearchSpaceTooLarge,
    ValidationError,
    anneal,
    case_study,
    compile_hamiltonian,
    expand,
    load_instance,
    parse_instance,
    reconstruct,
    report_tables,
    solve_exact,
    validate,
    verify,
)

__all__ = [
    "Error",
    "Hamiltonian",
    "InfeasibleError",
    "Instance",
    "Model",
    "ParseError",
    "SearchSpaceTooLarge",
    "ValidationError",
    "anneal",
    "case_study",
    "compile_hamiltonian",
    "expand",
    "load_instance",
    "parse_instance",
    "reconstruct",
    "report_tables",
    "solve_exact",
    "validate",
    "verify",
]
