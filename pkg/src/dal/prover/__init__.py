"""Sequent proof-script checker with oracle bookkeeping."""

from .sequent import Position, PositionError, Sequent, path_kinds, replace_at, subnode
from .ledger import REFUTED, UNTESTED, OracleClaim, OracleLedger, sampled
from .state import (
    RULES, EigenvariableNotFresh, Goal, MalformedClaim, PatternMismatch, PolarityViolation,
    ProofError, ProofState, ShapeMismatch, StrictPolicyViolation, arithmetic_claim,
    first_order, new_proof, wellformed,
)
from .script import ProofScript, ProofStep, ScriptError, format_step, parse_script
from .check import POLICIES, Config, Report, check_script, make_oracle
from .derived import derived_expansion, expansion_text

__all__ = [
    "Position", "PositionError", "Sequent", "path_kinds", "replace_at", "subnode",
    "REFUTED", "UNTESTED", "OracleClaim", "OracleLedger", "sampled",
    "RULES", "EigenvariableNotFresh", "Goal", "MalformedClaim", "PatternMismatch",
    "PolarityViolation", "ProofError", "ProofState", "ShapeMismatch", "StrictPolicyViolation",
    "arithmetic_claim", "first_order", "new_proof", "wellformed",
    "ProofScript", "ProofStep", "ScriptError", "format_step", "parse_script",
    "POLICIES", "Config", "Report", "check_script", "make_oracle",
    "derived_expansion", "expansion_text",
]
