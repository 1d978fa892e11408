"""Hypothesis strategies for random syntax trees of bounded depth."""

from fractions import Fraction

from hypothesis import strategies as st

from dal.syntax import (
    DAP, And, Assign, Box, Choice, Cmp, Const, DiffVar, Diamond, Differential, Equiv,
    Exists, Forall, Func, Imply, Not, Or, Plus, Pred, Seq, Star, Test, Times, Var,
)

NAMES = ("x", "y", "z", "v", "w", "lambda", "g", "y1")

names = st.sampled_from(NAMES)
consts = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 12)).map(Const)


def terms(depth, polynomial=False):
    leaves = st.one_of(names.map(Var), names.map(DiffVar), consts)
    if depth <= 0:
        return leaves
    sub = terms(depth - 1, polynomial)
    options = [leaves, st.builds(Plus, sub, sub), st.builds(Times, sub, sub)]
    if not polynomial:
        options.append(st.builds(Differential, terms(depth - 1, True).filter(_unprimed)))
        # fixed arities: the parser rejects a symbol used at two arities
        options.append(st.builds(lambda a: Func("f", (a,)), sub))
        options.append(st.builds(lambda a, b: Func("h1", (a, b)), sub, sub))
    return st.one_of(*options)


def _unprimed(t):
    from dal.syntax import free_vars
    return not any(v.endswith("'") for v in free_vars(t))


def atoms(depth):
    t = terms(max(depth - 1, 0))
    return st.one_of(
        st.builds(Cmp, st.sampled_from(("<=", "<", "=", "!=", ">=", ">")), t, t),
        st.builds(Pred, st.sampled_from(("P", "Q")), st.just(())),
    )


def formulas(depth, modal=True):
    if depth <= 0:
        return atoms(0)
    sub = formulas(depth - 1, modal)
    options = [
        atoms(depth),
        st.builds(And, sub, sub), st.builds(Or, sub, sub), st.builds(Not, sub),
        st.builds(Imply, sub, sub), st.builds(Equiv, sub, sub),
        st.builds(Forall, names, sub), st.builds(Exists, names, sub),
    ]
    if modal:
        prog = programs(depth - 1)
        options += [st.builds(Box, prog, sub), st.builds(Diamond, prog, sub)]
    return st.one_of(*options)


def daps(depth):
    vs = st.lists(names, min_size=1, max_size=3, unique=True).map(tuple)
    return st.builds(DAP, vs, formulas(max(depth - 1, 0), modal=False))


def programs(depth):
    base = st.one_of(
        st.builds(Assign, names, terms(max(depth - 1, 0))),
        st.builds(Assign, names.map(lambda n: n + "'"), terms(max(depth - 1, 0))),
        st.builds(Test, formulas(max(depth - 1, 0), modal=False)),
        daps(depth),
    )
    if depth <= 0:
        return base
    sub = programs(depth - 1)
    return st.one_of(base, st.builds(Seq, sub, sub), st.builds(Choice, sub, sub),
                     st.builds(Star, sub))


def trees(depth=6):
    return st.one_of(
        st.tuples(st.just("term"), terms(depth)),
        st.tuples(st.just("formula"), formulas(depth)),
        st.tuples(st.just("program"), programs(depth)),
    )
