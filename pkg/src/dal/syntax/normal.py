"""Canonical polynomial form of terms, desugaring and kernel equality.

``normalize`` expands a term into monomials, merges like monomials at the
position where they first appear, and rebuilds a right-leaning sum of
right-leaning products.  Inside a monomial the numeric coefficient comes
first; the remaining factors are grouped by variable base in order of
first appearance, with ``x`` ahead of ``x'``.  Function applications and
differentials are opaque factors (their arguments are normalized).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .ast import (
    And, Assign, Box, Choice, Cmp, Const, DAP, DiffVar, Diamond, Differential,
    Equiv, Exists, Forall, Func, Imply, Not, Or, Plus, Pred, Seq, Star, Test,
    Times, Var,
)

__all__ = [
    "normalize", "normalize_formula", "monomials", "desugar", "kernel_equal",
    "strip_double_negation",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _atom(t):
    if isinstance(t, Func):
        return Func(t.symbol, tuple(normalize(a) for a in t.args))
    if isinstance(t, Differential):
        return Differential(normalize(t.inner))
    return t


def _expand(t):
    """List of ``(coeff, factors)`` in expansion order."""
    if isinstance(t, Const):
        return [(t.value, ())] if t.value else []
    if isinstance(t, Plus):
        return _expand(t.left) + _expand(t.right)
    if isinstance(t, Times):
        left, right = _expand(t.left), _expand(t.right)
        return [(a * b, fa + fb) for a, fa in left for b, fb in right]
    return [(_ONE, (_atom(t),))]


def _group_key(f):
    if isinstance(f, Var):
        return ("v", f.name)
    if isinstance(f, DiffVar):
        return ("v", f.base)
    return ("o", f)


def _sort_factors(fs):
    order = {}
    for f in fs:
        order.setdefault(_group_key(f), len(order))
    return tuple(sorted(fs, key=lambda f: (order[_group_key(f)], isinstance(f, DiffVar))))


def _multiset(fs):
    return tuple(sorted(repr(f) for f in fs))


def monomials(t):
    """Merged monomials ``[(coeff, factors), ...]`` of ``t`` in canonical order."""
    merged = {}
    seq = []
    for c, fs in _expand(t):
        fs = _sort_factors(fs)
        key = _multiset(fs)
        if key in merged:
            merged[key][0] += c
        else:
            cell = [c, fs]
            merged[key] = cell
            seq.append(cell)
    return [(c, fs) for c, fs in seq if c != _ZERO]


def _chain(fs):
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Times(f, out)
    return out


def _mono_term(c, fs):
    if not fs:
        return Const(c)
    body = _chain(fs)
    if c == _ONE:
        return body
    return Times(Const(c), body)


@lru_cache(maxsize=65536)
def normalize(t):
    ms = monomials(t)
    if not ms:
        return Const(0)
    parts = [_mono_term(c, fs) for c, fs in ms]
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Plus(p, out)
    return out


def normalize_formula(f):
    """Normalize every term of a formula, program or term."""
    t = type(f)
    if t in (Var, DiffVar, Const, Func, Plus, Times, Differential):
        return normalize(f)
    if t is Cmp:
        return Cmp(f.op, normalize(f.left), normalize(f.right))
    if t is Pred:
        return Pred(f.symbol, tuple(normalize(a) for a in f.args))
    if t in (And, Or, Imply, Equiv, Seq, Choice):
        return t(normalize_formula(f.left), normalize_formula(f.right))
    if t is Not:
        return Not(normalize_formula(f.inner))
    if t is Forall or t is Exists:
        return t(f.var, normalize_formula(f.body))
    if t is Box or t is Diamond:
        return t(normalize_formula(f.prog), normalize_formula(f.body))
    if t is Assign:
        return Assign(f.var, normalize(f.term))
    if t is Test:
        return Test(normalize_formula(f.cond))
    if t is DAP:
        return DAP(f.vars, normalize_formula(f.constraint))
    if t is Star:
        return Star(normalize_formula(f.body))
    raise TypeError(f"normalize_formula: unexpected node {f!r}")


@lru_cache(maxsize=65536)
def desugar(f):
    """Rewrite derived connectives into ``! & \\forall [.]`` only."""
    t = type(f)
    if t is Cmp or t is Pred:
        return f
    if t is And:
        return And(desugar(f.left), desugar(f.right))
    if t is Or:
        return Not(And(Not(desugar(f.left)), Not(desugar(f.right))))
    if t is Imply:
        return Not(And(desugar(f.left), Not(desugar(f.right))))
    if t is Equiv:
        a, b = desugar(f.left), desugar(f.right)
        return And(Not(And(a, Not(b))), Not(And(b, Not(a))))
    if t is Not:
        return Not(desugar(f.inner))
    if t is Forall:
        return Forall(f.var, desugar(f.body))
    if t is Exists:
        return Not(Forall(f.var, Not(desugar(f.body))))
    if t is Box:
        return Box(_desugar_prog(f.prog), desugar(f.body))
    if t is Diamond:
        return Not(Box(_desugar_prog(f.prog), Not(desugar(f.body))))
    raise TypeError(f"desugar: not a formula {f!r}")


def _desugar_prog(p):
    t = type(p)
    if t is Assign:
        return p
    if t is Test:
        return Test(desugar(p.cond))
    if t is DAP:
        return DAP(p.vars, desugar(p.constraint))
    if t is Star:
        return Star(_desugar_prog(p.body))
    return t(_desugar_prog(p.left), _desugar_prog(p.right))


def kernel_equal(a, b) -> bool:
    if a == b:
        return True
    try:
        return desugar(a) == desugar(b)
    except TypeError:
        return False


def strip_double_negation(f):
    """Remove ``!!`` pairs everywhere in a formula."""
    t = type(f)
    if t is Not:
        if type(f.inner) is Not:
            return strip_double_negation(f.inner.inner)
        return Not(strip_double_negation(f.inner))
    if t is Cmp or t is Pred:
        return f
    if t in (And, Or, Imply, Equiv):
        return t(strip_double_negation(f.left), strip_double_negation(f.right))
    if t is Forall or t is Exists:
        return t(f.var, strip_double_negation(f.body))
    if t is Box or t is Diamond:
        return t(_strip_prog(f.prog), strip_double_negation(f.body))
    raise TypeError(f"not a formula: {f!r}")


def _strip_prog(p):
    t = type(p)
    if t is Assign:
        return p
    if t is Test:
        return Test(strip_double_negation(p.cond))
    if t is DAP:
        return DAP(p.vars, strip_double_negation(p.constraint))
    if t is Star:
        return Star(_strip_prog(p.body))
    return t(_strip_prog(p.left), _strip_prog(p.right))
