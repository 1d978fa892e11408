"""Derived formula families and axiom schemata."""

from .flows import (
    AlreadyDifferential, CalculusError, NonArithmetic, UninterpretedSymbol,
    differential, entry_formula, exit_formula, formula_differential, ghost_names,
    mode_consistency, progress_formula, reverse_flow, tuple_eq, tuple_neq,
)
from .axioms import (
    DERIVED, AxiomId, AxiomInstance, SchemaMismatch, SideCondition, SideConditionViolated,
    axiom_instance, catalogue, forall_block,
)

__all__ = [
    "AlreadyDifferential", "CalculusError", "NonArithmetic", "UninterpretedSymbol",
    "differential", "entry_formula", "exit_formula", "formula_differential", "ghost_names",
    "mode_consistency", "progress_formula", "reverse_flow", "tuple_eq", "tuple_neq",
    "DERIVED", "AxiomId", "AxiomInstance", "SchemaMismatch", "SideCondition",
    "SideConditionViolated", "axiom_instance", "catalogue", "forall_block",
]
