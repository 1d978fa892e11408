"""Concrete-syntax printer; the inverse of :func:`dal.syntax.parser.parse`."""

from __future__ import annotations

from contextvars import ContextVar

from .ast import (
    And, Assign, Box, Choice, Cmp, Const, DAP, DiffVar, Diamond, Differential,
    Equiv, Exists, Forall, Func, Imply, Not, Or, Plus, Pred, Seq, Star, Test,
    Times, Var,
)

__all__ = ["pretty", "term_str", "formula_str", "program_str"]

# spaced style puts blanks around + - and comparisons ("2*x*x' + 2*y*y'");
# the compact default is what proof scripts and goals use
_SPACED: ContextVar[bool] = ContextVar("spaced", default=False)


def _const(c) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _pow_chain(t):
    """``(base, k)`` when ``t`` is a right-leaning product of k >= 2 copies of base."""
    if not isinstance(t, Times):
        return None
    base, k, cur = t.left, 1, t.right
    while isinstance(cur, Times) and cur.left == base:
        k += 1
        cur = cur.right
    if cur != base:
        return None
    return base, k + 1


def _starts_numeric(s: str) -> bool:
    return s[:1].isdigit()


def _power_operand(t) -> str:
    if isinstance(t, (Var, DiffVar, Func, Differential)):
        return term_str(t)
    if isinstance(t, Const) and t.value >= 0 and t.value.denominator == 1:
        return _const(t.value)
    return "(" + term_str(t) + ")"


def _factor(t, leading: bool) -> str:
    """A product operand; ``leading`` allows a leading minus sign."""
    if isinstance(t, Const):
        s = _const(t.value)
        if t.value < 0 and not leading:
            return "(" + s + ")"
        return s
    if isinstance(t, (Var, DiffVar, Func, Differential)):
        return term_str(t)
    if isinstance(t, Times):
        chain = _pow_chain(t)
        if chain is not None:
            base, k = chain
            return f"{_power_operand(base)}^{k}"
        s = _product(t)
        if s.startswith("-") and not leading:
            return "(" + s + ")"
        return s
    return "(" + term_str(t) + ")"


def _product(t: Times) -> str:
    chain = _pow_chain(t)
    if chain is not None:
        base, k = chain
        return f"{_power_operand(base)}^{k}"
    left, right = t.left, t.right
    if isinstance(left, Const) and left.value == -1 and not isinstance(right, Const):
        body = _factor(right, leading=False)
        if _starts_numeric(body):
            body = "(" + body + ")"
        return "-" + body
    if isinstance(left, Times) and _pow_chain(left) is None:
        ls = "(" + _product(left) + ")"
    else:
        ls = _factor(left, leading=True)
    return ls + "*" + _factor(right, leading=False)


def _summand(t) -> str:
    if isinstance(t, Plus):
        return "(" + term_str(t) + ")"
    return _factor(t, leading=True)


def term_str(t) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, DiffVar):
        return t.base + "'"
    if isinstance(t, Const):
        return _const(t.value)
    if isinstance(t, Func):
        return f"{t.symbol}(" + ",".join(term_str(a) for a in t.args) + ")"
    if isinstance(t, Differential):
        return "(" + term_str(t.inner) + ")'"
    if isinstance(t, Times):
        return _product(t)
    if isinstance(t, Plus):
        ls = _summand(t.left)
        rs = _summand_right(t.right)
        if _SPACED.get():
            return ls + (" - " + rs[1:] if rs.startswith("-") else " + " + rs)
        if rs.startswith("-"):
            return ls + rs
        return ls + "+" + rs
    raise TypeError(f"not a term: {t!r}")


def _summand_right(t) -> str:
    if isinstance(t, Plus):
        return term_str(t)
    return _factor(t, leading=True)


# ------------------------------------------------------------------ formulas

_LEVEL = {Equiv: 1, Imply: 2, Or: 3, And: 4}


def _level(f) -> int:
    return _LEVEL.get(type(f), 5)


def _wrap(f, ok: bool) -> str:
    s = formula_str(f)
    return s if ok else "(" + s + ")"


def formula_str(f) -> str:
    if isinstance(f, Cmp):
        sep = f" {f.op} " if _SPACED.get() else f.op
        return f"{term_str(f.left)}{sep}{term_str(f.right)}"
    if isinstance(f, Pred):
        if not f.args:
            return f.symbol
        return f"{f.symbol}(" + ",".join(term_str(a) for a in f.args) + ")"
    if isinstance(f, And):
        return _wrap(f.left, _level(f.left) >= 4) + " & " + _wrap(f.right, _level(f.right) >= 5)
    if isinstance(f, Or):
        return _wrap(f.left, _level(f.left) >= 3) + " | " + _wrap(f.right, _level(f.right) >= 4)
    if isinstance(f, Imply):
        return _wrap(f.left, _level(f.left) >= 3) + " -> " + _wrap(f.right, _level(f.right) >= 2)
    if isinstance(f, Equiv):
        return _wrap(f.left, _level(f.left) >= 2) + " <-> " + _wrap(f.right, _level(f.right) >= 2)
    if isinstance(f, Not):
        return "!" + _unary_body(f.inner)
    if isinstance(f, Forall):
        return f"\\forall {f.var} " + _unary_body(f.body)
    if isinstance(f, Exists):
        return f"\\exists {f.var} " + _unary_body(f.body)
    if isinstance(f, Box):
        return "[" + program_str(f.prog) + "]" + _unary_body(f.body)
    if isinstance(f, Diamond):
        return "<" + program_str(f.prog) + ">" + _unary_body(f.body)
    raise TypeError(f"not a formula: {f!r}")


def _unary_body(f) -> str:
    if _level(f) < 5 or isinstance(f, Cmp):
        return "(" + formula_str(f) + ")"
    return formula_str(f)


# ------------------------------------------------------------------ programs

def program_str(p) -> str:
    if isinstance(p, Assign):
        return f"{p.var}:={term_str(p.term)}"
    if isinstance(p, Test):
        return "?(" + formula_str(p.cond) + ")"
    if isinstance(p, DAP):
        return "{" + ",".join(p.vars) + " & " + formula_str(p.constraint) + "}"
    if isinstance(p, Seq):
        left = program_str(p.left)
        if isinstance(p.left, (Seq, Choice)):
            left = "{" + left + "}"
        right = program_str(p.right)
        if isinstance(p.right, Choice):
            right = "{" + right + "}"
        return left + ";" + right
    if isinstance(p, Choice):
        right = program_str(p.right)
        if isinstance(p.right, Choice):
            right = "{" + right + "}"
        return program_str(p.left) + " ++ " + right
    if isinstance(p, Star):
        inner = program_str(p.body)
        if not isinstance(p.body, DAP):
            inner = "{" + inner + "}"
        return inner + "*"
    raise TypeError(f"not a program: {p!r}")


def pretty(node, spaced: bool = False) -> str:
    """Concrete syntax for any term, formula or program."""
    token = _SPACED.set(spaced)
    try:
        for fn in (term_str, formula_str, program_str):
            try:
                return fn(node)
            except TypeError:
                continue
    finally:
        _SPACED.reset(token)
    raise TypeError(f"cannot print {node!r}")
