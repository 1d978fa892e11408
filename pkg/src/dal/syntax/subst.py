"""Simultaneous capture-avoiding substitution.

Quantifier binders are renamed when a replacement would be captured.
Programs cannot be renamed, so a substitution that would enter a program
binding one of the affected variables is rejected with
:class:`SubstitutionClash`.  The same happens for differentials ``(e)'``
of a term whose variables are being replaced, since ``(e)'`` silently
mentions the primes of those variables.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from .ast import (
    And, Assign, Box, Choice, Cmp, DAP, DiffVar, Diamond, Differential,
    Equiv, Exists, Forall, Func, Imply, Not, Or, Plus, Pred, Seq, Star, Test,
    Times, Var, is_primed, prime, unprime, var_term,
)
from .vars import bound_vars, free_vars, fresh_vars

__all__ = ["SubstitutionClash", "substitute", "rename_free"]


class SubstitutionClash(ValueError):
    """The substitution is not admissible at some subformula."""


def substitute(node, mapping: Dict[str, object], renamed: Optional[List[tuple]] = None):
    """Apply ``mapping`` (variable name to term) simultaneously to ``node``.

    If ``renamed`` is a list, every binder renaming ``(old, new)`` that was
    needed to avoid capture is appended to it.
    """
    mapping = {k: v for k, v in mapping.items() if v != var_term(k)}
    if not mapping:
        return node
    return _Subst(renamed)(node, mapping)


class _Subst:
    def __init__(self, renamed):
        self.renamed = renamed

    def __call__(self, n, m):
        # prune to the keys that actually occur free
        fv = free_vars(n)
        m = {k: v for k, v in m.items() if k in fv}
        if not m:
            return n
        return self._go(n, m)

    def _go(self, n, m):
        t = type(n)
        if t is Var or t is DiffVar:
            return m.get(n.name, n)
        if t is Func:
            return Func(n.symbol, tuple(self(a, m) for a in n.args))
        if t is Pred:
            return Pred(n.symbol, tuple(self(a, m) for a in n.args))
        if t is Plus or t is Times or t in (And, Or, Imply, Equiv):
            return t(self(n.left, m), self(n.right, m))
        if t is Differential:
            raise SubstitutionClash(
                "cannot substitute " + ", ".join(sorted(m)) + " inside a differential")
        if t is Cmp:
            return Cmp(n.op, self(n.left, m), self(n.right, m))
        if t is Not:
            return Not(self(n.inner, m))
        if t is Forall or t is Exists:
            return self._binder(n, m)
        if t is Box or t is Diamond:
            self._check_program(n.prog, m)
            return t(self._prog(n.prog, m), self(n.body, m))
        raise TypeError(f"substitute: unexpected node {n!r}")

    def _binder(self, n, m):
        v = n.var
        m = {k: e for k, e in m.items() if k != v}
        if not m:
            return n
        incoming = frozenset().union(*(free_vars(e) for e in m.values()))
        body = n.body
        if v in incoming:
            avoid = incoming | free_vars(body) | set(m)
            new = fresh_vars(avoid, [unprime(v)])[0]
            if is_primed(v):
                new = prime(new)
            body = self(body, {v: var_term(new)})
            if self.renamed is not None:
                self.renamed.append((v, new))
            v = new
        return type(n)(v, self(body, m))

    @staticmethod
    def _check_program(prog, m):
        bv = bound_vars(prog)
        hit = bv & set(m)
        if hit:
            raise SubstitutionClash(
                "program binds substituted variable(s) " + ", ".join(sorted(hit)))
        incoming = frozenset().union(*(free_vars(e) for e in m.values()))
        cap = bv & incoming
        if cap:
            raise SubstitutionClash(
                "replacement would be captured by program binding " + ", ".join(sorted(cap)))

    def _prog(self, p, m):
        t = type(p)
        if t is Assign:
            return Assign(p.var, self(p.term, m))
        if t is Test:
            return Test(self(p.cond, m))
        if t is DAP:
            return DAP(p.vars, self(p.constraint, m))
        if t is Seq or t is Choice:
            return t(self._prog(p.left, m), self._prog(p.right, m))
        if t is Star:
            return Star(self._prog(p.body, m))
        raise TypeError(f"substitute: not a program {p!r}")


def rename_free(node, old: str, new: str):
    """Rename a free variable (primed or not) to another of the same sort."""
    return substitute(node, {old: var_term(new)})
