"""Differentials, reverse flows and the progress/exit/entry/consistency builders."""

from __future__ import annotations

from typing import Sequence, Tuple

from ..syntax.ast import (
    And, Assign, Box, Cmp, Const, DAP, DiffVar, Diamond, Differential, Equiv,
    Exists, Func, Imply, Not, Or, Plus, Seq, Times, Var,
    conj, disj, minus, prime,
)
from ..syntax.normal import normalize, normalize_formula
from ..syntax.subst import SubstitutionClash, substitute
from ..syntax.vars import dap_vars, free_vars, fresh_vars

__all__ = [
    "CalculusError", "UninterpretedSymbol", "AlreadyDifferential", "NonArithmetic",
    "differential", "formula_differential", "reverse_flow",
    "progress_formula", "exit_formula", "entry_formula", "mode_consistency",
    "ghost_names", "tuple_eq", "tuple_neq",
]


class CalculusError(ValueError):
    pass


class UninterpretedSymbol(CalculusError):
    pass


class AlreadyDifferential(CalculusError):
    pass


class NonArithmetic(CalculusError):
    pass


def _raw_diff(e):
    t = type(e)
    if t is Const:
        return Const(0)
    if t is Var:
        return DiffVar(e.name)
    if t is Plus:
        return Plus(_raw_diff(e.left), _raw_diff(e.right))
    if t is Times:
        return Plus(Times(_raw_diff(e.left), e.right), Times(e.left, _raw_diff(e.right)))
    if t is Func:
        raise UninterpretedSymbol(f"no differential rule for function symbol {e.symbol}")
    if t is Differential and type(e.inner) is Var:
        return _raw_diff(DiffVar(e.inner.name))
    if t is DiffVar:
        raise AlreadyDifferential(f"{e.name} has no differential (second derivatives are not terms)")
    raise AlreadyDifferential("differential of a differential")


def differential(e):
    """Total differential ``(e)'`` expanded by the derivative axioms and normalized."""
    return normalize(_raw_diff(e))


_WEAK = {"<": "<=", "<=": "<=", ">": ">=", ">=": ">=", "=": "=", "!=": "="}


def formula_differential(p):
    """``(P)'`` for a quantifier-free arithmetic formula."""
    t = type(p)
    if t is Cmp:
        return Cmp(_WEAK[p.op], differential(p.left), differential(p.right))
    if t is And or t is Or:
        return And(formula_differential(p.left), formula_differential(p.right))
    raise NonArithmetic(f"no differential for {t.__name__} formulas")


def reverse_flow(f, xs: Sequence[str]):
    """``F⁻``: the formula with every ``x'`` (x in xs) negated.

    When ``F`` contains a program binding some ``x'`` the substitution is not
    admissible; the result is then the assignment box ``[x':=-x'] F`` itself.
    """
    m = {prime(x): minus(DiffVar(x)) for x in xs}
    try:
        return normalize_formula(substitute(f, m))
    except SubstitutionClash:
        prog = None
        for x in xs:
            a = Assign(prime(x), Times(Const(-1), DiffVar(x)))
            prog = a if prog is None else Seq(prog, a)
        return Box(prog, f)


def tuple_eq(xs, ys) -> object:
    return conj(Cmp("=", _vt(a), _vt(b)) for a, b in zip(xs, ys))


def tuple_neq(xs, ys) -> object:
    return disj(Cmp("!=", _vt(a), _vt(b)) for a, b in zip(xs, ys))


def _vt(name):
    return DiffVar(name[:-1]) if name.endswith("'") else Var(name)


def ghost_names(xs: Sequence[str], f) -> Tuple[str, ...]:
    avoid = free_vars(f) | dap_vars(xs)
    return tuple(fresh_vars(avoid, ["y"] * len(xs)))


def progress_formula(xs: Sequence[str], f, ghosts: Sequence[str] = None):
    xs = tuple(xs)
    ys = tuple(ghosts) if ghosts is not None else ghost_names(xs, f)
    xps = tuple(prime(x) for x in xs)
    yps = tuple(prime(y) for y in ys)
    here = And(tuple_eq(xs, ys), tuple_eq(xps, yps))
    moved = Diamond(DAP(xs, Or(f, here)), tuple_neq(xs, ys))
    body = And(here, moved)
    for v in reversed(ys + yps):
        body = Exists(v, body)
    return body


def exit_formula(xs: Sequence[str], f):
    xs = tuple(xs)
    ys = ghost_names(xs, f)
    first = And(progress_formula(xs, Not(f), ys), f)
    second = And(reverse_flow(progress_formula(xs, reverse_flow(f, xs), ys), xs), Not(f))
    return Or(first, second)


def entry_formula(xs: Sequence[str], f):
    xs = tuple(xs)
    ys = ghost_names(xs, f)
    first = And(progress_formula(xs, f, ys), Not(f))
    second = And(reverse_flow(progress_formula(xs, Not(reverse_flow(f, xs)), ys), xs), f)
    return Or(first, second)


def mode_consistency(xs: Sequence[str], f, g):
    return Imply(And(exit_formula(xs, f), entry_formula(xs, g)), Equiv(f, g))
