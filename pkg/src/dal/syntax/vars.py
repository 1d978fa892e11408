"""Free, bound and must-bound variables; fresh-name generation.

Variable sets are frozensets of names, where a differential variable is
spelled with its trailing apostrophe, so ``x`` and ``x'`` are tracked
separately.
"""

from __future__ import annotations

from functools import lru_cache
from typing import FrozenSet, Iterable, List

from .ast import (
    And, Assign, Box, Choice, Cmp, Const, DAP, DiffVar, Diamond, Differential,
    Equiv, Exists, Forall, Func, Imply, Not, Or, Plus, Pred, Seq, Star, Test,
    Times, Var, is_primed, prime,
)

__all__ = ["free_vars", "bound_vars", "must_bound_vars", "fresh_vars", "dap_vars", "all_names"]

_EMPTY: FrozenSet[str] = frozenset()


def dap_vars(xs: Iterable[str]) -> FrozenSet[str]:
    """``x̄ ∪ x̄′`` for a tuple of base names."""
    out = set()
    for x in xs:
        out.add(x)
        out.add(prime(x))
    return frozenset(out)


@lru_cache(maxsize=65536)
def free_vars(node) -> FrozenSet[str]:
    t = type(node)
    if t is Var:
        return frozenset((node.name,))
    if t is DiffVar:
        return frozenset((node.name,))
    if t is Const:
        return _EMPTY
    if t is Func or t is Pred:
        return frozenset().union(*(free_vars(a) for a in node.args)) if node.args else _EMPTY
    if t is Plus or t is Times:
        return free_vars(node.left) | free_vars(node.right)
    if t is Differential:
        inner = free_vars(node.inner)
        return inner | {prime(v) for v in inner if not is_primed(v)}
    if t is Cmp:
        return free_vars(node.left) | free_vars(node.right)
    if t in (And, Or, Imply, Equiv):
        return free_vars(node.left) | free_vars(node.right)
    if t is Not:
        return free_vars(node.inner)
    if t is Forall or t is Exists:
        return free_vars(node.body) - {node.var}
    if t is Box or t is Diamond:
        return free_vars(node.prog) | (free_vars(node.body) - must_bound_vars(node.prog))
    # programs
    if t is Assign:
        return free_vars(node.term)
    if t is Test:
        return free_vars(node.cond)
    if t is DAP:
        return free_vars(node.constraint) | dap_vars(node.vars)
    if t is Seq:
        return free_vars(node.left) | (free_vars(node.right) - must_bound_vars(node.left))
    if t is Choice:
        return free_vars(node.left) | free_vars(node.right)
    if t is Star:
        return free_vars(node.body)
    raise TypeError(f"free_vars: unexpected node {node!r}")


@lru_cache(maxsize=65536)
def bound_vars(prog) -> FrozenSet[str]:
    t = type(prog)
    if t is Assign:
        return frozenset((prog.var,))
    if t is Test:
        return _EMPTY
    if t is DAP:
        return dap_vars(prog.vars)
    if t in (Seq, Choice):
        return bound_vars(prog.left) | bound_vars(prog.right)
    if t is Star:
        return bound_vars(prog.body)
    raise TypeError(f"bound_vars: not a program: {prog!r}")


@lru_cache(maxsize=65536)
def must_bound_vars(prog) -> FrozenSet[str]:
    """Variables written on every run of ``prog``."""
    t = type(prog)
    if t is Assign:
        return frozenset((prog.var,))
    if t is Test:
        return _EMPTY
    if t is DAP:
        return dap_vars(prog.vars)
    if t is Seq:
        return must_bound_vars(prog.left) | must_bound_vars(prog.right)
    if t is Choice:
        return must_bound_vars(prog.left) & must_bound_vars(prog.right)
    if t is Star:
        return _EMPTY  # zero iterations write nothing
    raise TypeError(f"must_bound_vars: not a program: {prog!r}")


def all_names(node) -> FrozenSet[str]:
    """Every variable name occurring anywhere in ``node``, bound or free."""
    out = set()
    stack = [node]
    while stack:
        n = stack.pop()
        t = type(n)
        if t is Var or t is DiffVar:
            out.add(n.name)
        elif t is Const:
            pass
        elif t is Func or t is Pred:
            stack.extend(n.args)
        elif t is Differential:
            stack.append(n.inner)
        elif t is Not:
            stack.append(n.inner)
        elif t is Forall or t is Exists:
            out.add(n.var)
            stack.append(n.body)
        elif t is Box or t is Diamond:
            stack.extend((n.prog, n.body))
        elif t is Assign:
            out.add(n.var)
            stack.append(n.term)
        elif t is Test:
            stack.append(n.cond)
        elif t is DAP:
            out |= dap_vars(n.vars)
            stack.append(n.constraint)
        elif t is Star:
            stack.append(n.body)
        else:
            stack.extend((n.left, n.right))
    return frozenset(out)


def fresh_vars(avoid: Iterable[str], base: List[str]) -> List[str]:
    """One fresh base identifier per entry of ``base``.

    A candidate is rejected when it or its prime is in ``avoid`` or was
    already handed out.  Candidates are tried as ``b``, ``b1``, ``b2``, ...
    """
    taken = set(avoid)
    out = []
    for b in base:
        b = b.rstrip("'")
        k = 0
        while True:
            cand = b if k == 0 else f"{b}{k}"
            if cand not in taken and prime(cand) not in taken:
                break
            k += 1
        out.append(cand)
        taken.add(cand)
        taken.add(prime(cand))
    return out
