"""Sampling audit for progress-formula simplification claims.

Progress formulas quantify over flows, so they cannot be evaluated by the
plain evaluator.  Here they get a three-valued reading at a state ``s``:

* true, when some quadratic polynomial flow from ``s`` that is not constant
  keeps the constraint true on a right neighbourhood of 0;
* false, when the constraint is already decided false at ``s`` by atoms
  whose polynomials are nonzero there (continuity keeps them false);
* unknown otherwise.

A claim ``lhs <-> rhs`` is refuted only when the Kleene value of the
equivalence is definitely false at some sampled state.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Optional

from ..syntax.ast import (
    And, Assign, Box, Cmp, DAP, Diamond, Equiv, Exists, Imply, Not, Or, Seq, prime,
)
from ..syntax.vars import free_vars
from .evaluate import State, Unsupported, compile_term, eval_term
from .falsify import NoCounterexampleFound, Refuted, SampleDomain, _steering, sample_states
from .flow import _atoms, _truth
from .poly import Poly

__all__ = ["eval3", "progress_value", "audit_equivalence", "PR_SAMPLES"]

PR_SAMPLES = 1000

_CMP3 = {
    "<=": lambda s: s <= 0, "<": lambda s: s < 0, "=": lambda s: s == 0,
    "!=": lambda s: s != 0, ">=": lambda s: s >= 0, ">": lambda s: s > 0,
}


def _not3(a):
    return None if a is None else not a


def _and3(a, b):
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _or3(a, b):
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


def _germ_sign(p: Poly) -> int:
    for c in p.coefficients():
        if c:
            return 1 if c > 0 else -1
    return 0


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _initial3(f, s):
    """Kleene value of ``f`` as forced by continuity near ``s``."""
    t = type(f)
    if t is Cmp:
        v = eval_term(s, f.left) - eval_term(s, f.right)
        if v == 0:
            return None
        return _CMP3[f.op](_sign(v))
    if t is And:
        return _and3(_initial3(f.left, s), _initial3(f.right, s))
    if t is Or:
        return _or3(_initial3(f.left, s), _initial3(f.right, s))
    if t is Not:
        return _not3(_initial3(f.inner, s))
    if t is Imply:
        return _or3(_not3(_initial3(f.left, s)), _initial3(f.right, s))
    if t is Equiv:
        a, b = _initial3(f.left, s), _initial3(f.right, s)
        return None if a is None or b is None else a == b
    raise Unsupported(f"{t.__name__} inside a progress constraint")


@lru_cache(maxsize=256)
def _compiled(xs, f):
    atoms = _atoms(f, [])
    diffs = [(a, compile_term(a.left), compile_term(a.right)) for a in atoms]
    return atoms, diffs


def progress_value(xs, f, s) -> Optional[bool]:
    """Three-valued truth of the progress formula of ``{xs & f}`` at ``s``."""
    xs = tuple(xs)
    forced = _initial3(f, s)
    if forced is not None:
        # atoms nonzero at s keep their sign along every flow for a while, and
        # a nonconstant flow always exists
        return forced
    atoms, diffs = _compiled(xs, f)
    env = {}
    for n, v in s.items():
        env[n] = Poly.const(v)
    for cs in itertools.product((0, 1, -1), repeat=len(xs)):
        if all(s[prime(x)] == 0 and c == 0 for x, c in zip(xs, cs)):
            continue  # constant flow
        for x, c in zip(xs, cs):
            p = Poly([s[x], s[prime(x)], c])
            env[x] = p
            env[prime(x)] = p.derivative()
        local = _Env(env)
        signs = {}
        for a, lf, rf in diffs:
            d = lf(local) - rf(local)
            signs[a] = _germ_sign(d) if isinstance(d, Poly) else _sign(d)
        if _truth(f, signs):
            return True
    return None


class _Env(dict):
    def __missing__(self, key):
        return _ZERO


_ZERO = Poly()


@lru_cache(maxsize=256)
def _progress_parts(f):
    """``(xs, F, ys)`` when ``f`` is literally a progress formula, else None."""
    from ..calculus.flows import progress_formula  # calculus depends on syntax only

    binders = []
    g = f
    while isinstance(g, Exists):
        binders.append(g.var)
        g = g.body
    if not (isinstance(g, And) and isinstance(g.right, Diamond)):
        return None
    prog = g.right.prog
    if not isinstance(prog, DAP) or not isinstance(prog.constraint, Or):
        return None
    xs = prog.vars
    if len(binders) != 2 * len(xs):
        return None
    ys = tuple(binders[: len(xs)])
    inner = prog.constraint.left
    if progress_formula(xs, inner, ys) != f:
        return None
    return xs, inner, ys


def _assignments(prog, acc):
    if isinstance(prog, Assign):
        acc.append(prog)
        return True
    if isinstance(prog, Seq):
        return _assignments(prog.left, acc) and _assignments(prog.right, acc)
    return False


def eval3(f, s) -> Optional[bool]:
    t = type(f)
    if t is Cmp:
        return _CMP3[f.op](_sign(eval_term(s, f.left) - eval_term(s, f.right)))
    if t is And:
        a = eval3(f.left, s)
        return False if a is False else _and3(a, eval3(f.right, s))
    if t is Or:
        a = eval3(f.left, s)
        return True if a is True else _or3(a, eval3(f.right, s))
    if t is Not:
        return _not3(eval3(f.inner, s))
    if t is Imply:
        return _or3(_not3(eval3(f.left, s)), eval3(f.right, s))
    if t is Equiv:
        a, b = eval3(f.left, s), eval3(f.right, s)
        return None if a is None or b is None else a == b
    if t is Box:
        steps = []
        if not _assignments(f.prog, steps):
            raise Unsupported("box over a program other than assignments")
        s2 = State(s)
        for a in steps:
            s2[a.var] = eval_term(s2, a.term)
        return eval3(f.body, s2)
    if t is Exists:
        parts = _progress_parts(f)
        if parts is None:
            raise Unsupported("existential that is not a progress formula")
        xs, inner, _ = parts
        return progress_value(xs, inner, s)
    raise Unsupported(f"{t.__name__} is outside the progress audit fragment")


def audit_equivalence(lhs, rhs, dom: Optional[SampleDomain] = None):
    """Look for a state where ``lhs`` and ``rhs`` definitely disagree."""
    dom = dom or SampleDomain(n=PR_SAMPLES)
    names = sorted(free_vars(lhs) | free_vars(rhs))
    steer = _steering(Imply(rhs, rhs))
    claim = Equiv(lhs, rhs)
    count = 0
    for idx, s in enumerate(sample_states(names, dom, steer)):
        count += 1
        if eval3(claim, s) is False:
            return Refuted(s, idx, tuple(names))
    return NoCounterexampleFound(count)
