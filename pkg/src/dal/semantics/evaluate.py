"""Exact evaluation of terms and quantifier-free formulas at states."""

from __future__ import annotations

import operator
from fractions import Fraction
from typing import Callable, Dict, Mapping

from ..syntax.ast import (
    And, Box, Cmp, Const, DiffVar, Diamond, Differential, Equiv, Exists, Forall,
    Func, Imply, Not, Or, Plus, Pred, Times, Var, prime,
)

__all__ = [
    "State", "Unsupported", "UninterpretedSymbol", "eval_term", "eval_formula",
    "partial", "compile_term", "compile_formula", "parse_state",
]


class Unsupported(ValueError):
    """The formula shape is outside what exact evaluation can decide."""


class UninterpretedSymbol(ValueError):
    pass


class State(dict):
    """Variable name to exact rational; unmapped variables read as 0."""

    def __missing__(self, key):
        return Fraction(0)

    def __repr__(self):
        return "State(" + ", ".join(f"{k}={v}" for k, v in sorted(self.items())) + ")"

    def describe(self, names=None) -> str:
        names = sorted(self) if names is None else names
        return ", ".join(f"{n}={self[n]}" for n in names)


def parse_state(text: str) -> State:
    """``var = rational`` lines; ``#`` starts a comment."""
    s = State()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, _, val = line.partition("=")
        if not _:
            raise ValueError(f"state line without '=': {raw!r}")
        s[name.strip()] = Fraction(val.strip())
    return s


def partial(e, x: str):
    """Symbolic partial derivative of a polynomial term by the variable ``x``."""
    t = type(e)
    if t is Const or t is DiffVar:
        return Const(0)
    if t is Var:
        return Const(1 if e.name == x else 0)
    if t is Plus:
        return Plus(partial(e.left, x), partial(e.right, x))
    if t is Times:
        return Plus(Times(partial(e.left, x), e.right), Times(e.left, partial(e.right, x)))
    if t is Func:
        raise UninterpretedSymbol(f"function symbol {e.symbol} has no interpretation")
    raise Unsupported("nested differential")


def _vars_of(e, acc):
    t = type(e)
    if t is Var:
        acc.add(e.name)
    elif t is Plus or t is Times:
        _vars_of(e.left, acc)
        _vars_of(e.right, acc)
    elif t is DiffVar:
        raise Unsupported("differential of a term containing a differential variable")
    elif t is Differential:
        raise Unsupported("nested differential")
    return acc


def eval_term(s: Mapping, e) -> Fraction:
    t = type(e)
    if t is Const:
        return e.value
    if t is Var or t is DiffVar:
        return s[e.name] if e.name in s else Fraction(0)
    if t is Plus:
        return eval_term(s, e.left) + eval_term(s, e.right)
    if t is Times:
        return eval_term(s, e.left) * eval_term(s, e.right)
    if t is Differential:
        # sum over x of s(x') * (de/dx)(s)
        total = Fraction(0)
        for x in sorted(_vars_of(e.inner, set())):
            total += _get(s, prime(x)) * eval_term(s, partial(e.inner, x))
        return total
    if t is Func:
        raise UninterpretedSymbol(f"function symbol {e.symbol} has no interpretation")
    raise TypeError(f"not a term: {e!r}")


def _get(s, name):
    return s[name] if name in s else Fraction(0)


_CMP = {
    "<=": operator.le, "<": operator.lt, "=": operator.eq,
    "!=": operator.ne, ">=": operator.ge, ">": operator.gt,
}


def eval_formula(s: Mapping, f) -> bool:
    t = type(f)
    if t is Cmp:
        return _CMP[f.op](eval_term(s, f.left), eval_term(s, f.right))
    if t is And:
        return eval_formula(s, f.left) and eval_formula(s, f.right)
    if t is Or:
        return eval_formula(s, f.left) or eval_formula(s, f.right)
    if t is Not:
        return not eval_formula(s, f.inner)
    if t is Imply:
        return (not eval_formula(s, f.left)) or eval_formula(s, f.right)
    if t is Equiv:
        return eval_formula(s, f.left) == eval_formula(s, f.right)
    if t is Pred:
        raise UninterpretedSymbol(f"predicate symbol {f.symbol} has no interpretation")
    if t in (Forall, Exists, Box, Diamond):
        raise Unsupported(f"{t.__name__} is not evaluable at a single state")
    raise TypeError(f"not a formula: {f!r}")


# ------------------------------------------------------------ compiled forms
#
# The falsifier evaluates the same formula at thousands of states; closures
# avoid re-dispatching on node types each time.




# Preferred path: one generated lambda per formula.  Very deep trees overflow
# the compiler, so the closures above stay as the fallback.

_PY_CMP = {"=": "==", "!=": "!=", "<": "<", "<=": "<=", ">": ">", ">=": ">="}


class _Gen:
    def __init__(self, num):
        self.num = num
        self.env: Dict[str, object] = {}

    def const(self, v) -> str:
        name = f"k{len(self.env)}"
        self.env[name] = v if self.num is None else self.num(v)
        return name

    def term(self, e) -> str:
        t = type(e)
        if t is Const:
            return self.const(e.value)
        if t is Var or t is DiffVar:
            return f"s[{e.name!r}]"
        if t is Plus:
            return f"({self.term(e.left)} + {self.term(e.right)})"
        if t is Times:
            return f"({self.term(e.left)} * {self.term(e.right)})"
        if t is Differential:
            parts = [f"s[{prime(x)!r}] * {self.term(partial(e.inner, x))}"
                     for x in sorted(_vars_of(e.inner, set()))]
            return "(" + " + ".join([self.const(0)] + parts) + ")"
        if t is Func:
            raise UninterpretedSymbol(f"function symbol {e.symbol} has no interpretation")
        raise TypeError(f"not a term: {e!r}")

    def formula(self, f) -> str:
        t = type(f)
        if t is Cmp:
            return f"({self.term(f.left)} {_PY_CMP[f.op]} {self.term(f.right)})"
        if t is And:
            return f"({self.formula(f.left)} and {self.formula(f.right)})"
        if t is Or:
            return f"({self.formula(f.left)} or {self.formula(f.right)})"
        if t is Not:
            return f"(not {self.formula(f.inner)})"
        if t is Imply:
            return f"((not {self.formula(f.left)}) or {self.formula(f.right)})"
        if t is Equiv:
            return f"({self.formula(f.left)} == {self.formula(f.right)})"
        if t is Pred:
            raise UninterpretedSymbol(f"predicate symbol {f.symbol} has no interpretation")
        if t in (Forall, Exists, Box, Diamond):
            raise Unsupported(f"{t.__name__} is not evaluable at a single state")
        raise TypeError(f"not a formula: {f!r}")


def _generate(kind, e, num, fallback):
    g = _Gen(num)
    try:
        src = g.term(e) if kind == "term" else g.formula(e)
        return eval("lambda s: " + src, g.env)
    except (SyntaxError, RecursionError, MemoryError):
        return fallback(e, num)


def compile_term(e, num=None) -> Callable[[Mapping], Fraction]:
    """``num`` converts constants, so the result can run on a faster rational type."""
    return _generate("term", e, num, _close_term)


def compile_formula(f, num=None) -> Callable[[Mapping], bool]:
    return _generate("formula", f, num, _close_formula)


# ------------------------------------------------------------ compiled forms
#
# The falsifier evaluates the same formula at thousands of states; closures
# avoid re-dispatching on node types each time.

def _close_term(e, num=None) -> Callable[[Mapping], Fraction]:
    t = type(e)
    if t is Const:
        v = e.value if num is None else num(e.value)
        return lambda s: v
    if t is Var or t is DiffVar:
        n = e.name
        return lambda s: s[n]
    if t is Plus:
        a, b = compile_term(e.left, num), compile_term(e.right, num)
        return lambda s: a(s) + b(s)
    if t is Times:
        a, b = compile_term(e.left, num), compile_term(e.right, num)
        return lambda s: a(s) * b(s)
    if t is Differential:
        parts = [(prime(x), compile_term(partial(e.inner, x), num))
                 for x in sorted(_vars_of(e.inner, set()))]
        zero = Fraction(0) if num is None else num(0)
        return lambda s: sum((s[xp] * d(s) for xp, d in parts), zero)
    if t is Func:
        raise UninterpretedSymbol(f"function symbol {e.symbol} has no interpretation")
    raise TypeError(f"not a term: {e!r}")


def _close_formula(f, num=None) -> Callable[[Mapping], bool]:
    t = type(f)
    if t is Cmp:
        a, b, op = compile_term(f.left, num), compile_term(f.right, num), _CMP[f.op]
        return lambda s: op(a(s), b(s))
    if t is And:
        a, b = compile_formula(f.left, num), compile_formula(f.right, num)
        return lambda s: a(s) and b(s)
    if t is Or:
        a, b = compile_formula(f.left, num), compile_formula(f.right, num)
        return lambda s: a(s) or b(s)
    if t is Not:
        a = compile_formula(f.inner, num)
        return lambda s: not a(s)
    if t is Imply:
        a, b = compile_formula(f.left, num), compile_formula(f.right, num)
        return lambda s: (not a(s)) or b(s)
    if t is Equiv:
        a, b = compile_formula(f.left, num), compile_formula(f.right, num)
        return lambda s: a(s) == b(s)
    if t is Pred:
        raise UninterpretedSymbol(f"predicate symbol {f.symbol} has no interpretation")
    if t in (Forall, Exists, Box, Diamond):
        raise Unsupported(f"{t.__name__} is not evaluable at a single state")
    raise TypeError(f"not a formula: {f!r}")
