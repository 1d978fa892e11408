"""Exact semantics: evaluation, falsification and flow-witness checking."""

from .evaluate import (
    State, UninterpretedSymbol, Unsupported, compile_formula, compile_term,
    eval_formula, eval_term, parse_state, partial,
)
from .poly import (
    Poly, count_roots, isolate_roots, poly_derivative, sturm_chain, sturm_nonneg, with_midpoints,
)
from .falsify import (
    DEFAULT_SEED, NoCounterexampleFound, Refuted, SampleDomain, falsify, sample_states,
    strip_forall,
)
from .flow import (
    Accepted, FlowWitness, Rejected, WitnessFile, atom_polynomials, check_flow_witness,
    parse_witness,
)
from .audit import PR_SAMPLES, audit_equivalence, eval3, progress_value

__all__ = [
    "State", "UninterpretedSymbol", "Unsupported", "compile_formula", "compile_term",
    "eval_formula", "eval_term", "parse_state", "partial", "Poly", "count_roots",
    "isolate_roots", "poly_derivative", "sturm_chain", "sturm_nonneg", "with_midpoints",
    "DEFAULT_SEED", "NoCounterexampleFound", "Refuted", "SampleDomain", "falsify",
    "sample_states", "strip_forall", "Accepted", "FlowWitness", "Rejected", "WitnessFile",
    "atom_polynomials", "check_flow_witness", "parse_witness", "PR_SAMPLES",
    "audit_equivalence", "eval3", "progress_value",
]
