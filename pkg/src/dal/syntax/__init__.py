"""Syntax trees, concrete grammar, variable analysis and substitution."""

from .ast import *  # noqa: F401,F403
from .ast import __all__ as _ast_all
from .parser import ParseError, Signature, parse, parse_formula, parse_program, parse_term
from .printer import formula_str, pretty, program_str, term_str
from .vars import all_names, bound_vars, dap_vars, free_vars, fresh_vars, must_bound_vars
from .subst import SubstitutionClash, rename_free, substitute
from .normal import (
    desugar, kernel_equal, monomials, normalize, normalize_formula, strip_double_negation,
)

__all__ = list(_ast_all) + [
    "ParseError", "Signature", "parse", "parse_formula", "parse_program", "parse_term",
    "formula_str", "pretty", "program_str", "term_str",
    "all_names", "bound_vars", "dap_vars", "free_vars", "fresh_vars", "must_bound_vars",
    "SubstitutionClash", "rename_free", "substitute",
    "desugar", "kernel_equal", "monomials", "normalize", "normalize_formula",
    "strip_double_negation",
]
