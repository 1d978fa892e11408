"""Counterexample search for universally closed arithmetic claims.

States are tried in a fixed order: a structured grid, pairwise-equal
diagonals, samples steered by equations in the claim's hypotheses, and
finally seeded pseudo-random rationals.  The first violating state wins.
A "no counterexample" verdict is evidence, never proof.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import gmpy2

from ..syntax.ast import And, Cmp, Const, DiffVar, Forall, Imply, Plus, Times, Var
from ..syntax.normal import monomials
from ..syntax.vars import free_vars
from .evaluate import State, _Gen, compile_formula, compile_term

__all__ = [
    "DEFAULT_SEED", "SampleDomain", "NoCounterexampleFound", "Refuted", "falsify",
    "strip_forall", "sample_states",
]

DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class SampleDomain:
    lo: Fraction = Fraction(-10)
    hi: Fraction = Fraction(10)
    n: int = 10000
    seed: int = DEFAULT_SEED
    bounds: Tuple[Tuple[str, Fraction, Fraction], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sample count must be at least 1")
        if self.lo > self.hi:
            raise ValueError("empty sample interval")
        for _, a, b in self.bounds:
            if a > b:
                raise ValueError("empty sample interval")

    def interval(self, v: str) -> Tuple[Fraction, Fraction]:
        for name, a, b in self.bounds:
            if name == v:
                return a, b
        return self.lo, self.hi


@dataclass(frozen=True)
class NoCounterexampleFound:
    samples: int

    def __bool__(self):
        return True

    def __str__(self):
        return f"no counterexample in {self.samples} samples"


@dataclass(frozen=True)
class Refuted:
    state: State
    index: int
    variables: Tuple[str, ...] = ()

    def __bool__(self):
        return False

    def __str__(self):
        return "refuted at " + self.state.describe(self.variables or None)


def strip_forall(f):
    while isinstance(f, Forall):
        f = f.body
    return f


# ------------------------------------------------------------ equation steering

def _hypotheses(f) -> List:
    """Conjuncts of the hypotheses along the implication spine of ``f``."""
    out = []
    while isinstance(f, Imply):
        stack = [f.left]
        while stack:
            g = stack.pop()
            if isinstance(g, And):
                stack.append(g.right)
                stack.append(g.left)
            else:
                out.append(g)
        f = f.right
    return out


def _solver(eq: Cmp, solved: set):
    """(v, a, r) for an equation that reads a*v + r = 0 with v not in a or r."""
    diff = Plus(eq.left, Times(Const(-1), eq.right))
    ms = monomials(diff)
    cand = []
    if isinstance(eq.left, (Var, DiffVar)):
        cand.append(eq.left.name)
    if isinstance(eq.right, (Var, DiffVar)):
        cand.append(eq.right.name)
    for _, fs in ms:
        for f in fs:
            if isinstance(f, (Var, DiffVar)) and f.name not in cand:
                cand.append(f.name)
    for v in cand:
        if v in solved:
            continue
        coef, rest, ok = [], [], True
        for c, fs in ms:
            k = sum(1 for f in fs if isinstance(f, (Var, DiffVar)) and f.name == v)
            if k > 1:
                ok = False
                break
            others = tuple(f for f in fs if not (isinstance(f, (Var, DiffVar)) and f.name == v))
            (coef if k == 1 else rest).append((c, others))
        if not ok or not coef:
            continue
        return v, _rebuild(coef), _rebuild(rest)
    return None


def _rebuild(ms):
    if not ms:
        return Const(0)
    parts = []
    for c, fs in ms:
        t = Const(c)
        for f in fs:
            t = Times(t, f)
        parts.append(t)
    out = parts[0]
    for p in parts[1:]:
        out = Plus(out, p)
    return out


def _closure(v, cf, rf):
    def solve(s):
        a = cf(s)
        if a != 0:
            s[v] = -rf(s) / a
    return solve


def _steering(f, num=None):
    """One pass of equation solving over a state, as a list of callables.

    The usual result is a single generated function running every solver in
    order; very large equations fall back to one closure per solver.
    """
    solved = set()
    found = []
    for h in _hypotheses(f):
        if isinstance(h, Cmp) and h.op == "=":
            try:
                got = _solver(h, solved)
            except (ValueError, TypeError):
                got = None
            if got:
                solved.add(got[0])
                found.append(got)
    if not found:
        return []
    g = _Gen(num)
    try:
        lines = ["def steer(s):"]
        for v, a, r in found:
            lines += [f"    a = {g.term(a)}", "    if a != 0:",
                      f"        s[{v!r}] = -({g.term(r)}) / a"]
        exec("\n".join(lines), g.env)
        return [g.env["steer"]]
    except (SyntaxError, RecursionError, MemoryError):
        return [_closure(v, compile_term(a, num), compile_term(r, num)) for v, a, r in found]


# ------------------------------------------------------------ sample points

_DENOMS = (2, 3, 4, 5, 8, 10, 16, 100)


_TABLE = 1 << 15


@functools.lru_cache(maxsize=64)
def _pool(lo: Fraction, hi: Fraction, num=Fraction) -> Tuple:
    """A flat table of sampling values for one interval, drawn uniformly.

    Integers carry 40% of the mass and each k/q grid an equal share of the
    rest; each value gets round(weight * _TABLE) slots, at least one.
    """
    a, b = sorted((int(lo), int(hi)))
    ints = sorted({min(max(Fraction(k), lo), hi) for k in range(a, b + 1)})
    span = hi - lo
    groups = [(ints, Fraction(2, 5))]
    share = Fraction(3, 5) / len(_DENOMS)
    for q in _DENOMS:
        vals = [lo + Fraction(k, q) for k in range(int(span * q) + 1)] if span else [lo]
        groups.append((vals, share))
    table = []
    for vals, w in groups:
        slots = max(1, round(w * _TABLE / len(vals)))
        for v in vals:
            table.extend([num(v.numerator, v.denominator)] * slots)
    return tuple(table)


def _grid_values(lo, hi):
    vals = []
    for v in (Fraction(0), Fraction(1), Fraction(-1), lo, hi):
        if lo <= v <= hi and v not in vals:
            vals.append(v)
    return vals


def sample_states(names: Sequence[str], dom: SampleDomain, steer=(),
                  num=Fraction) -> Iterator[State]:
    """``num`` is the rational type of the yielded values."""
    names = list(names)
    rng = random.Random(dom.seed)
    ivs = [dom.interval(v) for v in names]
    width = len(names)
    if len(set(ivs)) == 1:
        table = _pool(*ivs[0], num)

        def draw_all():
            return rng.choices(table, k=width)
    else:
        tables = [_pool(*iv, num) for iv in ivs]
        r = rng.random

        def draw_all():
            return [t[int(r() * len(t))] for t in tables]
    grids = [[num(x.numerator, x.denominator) for x in _grid_values(*dom.interval(v))]
             for v in names]
    zero = num(0)
    # structured grid
    if len(names) <= 5:
        for combo in itertools.product(*grids):
            yield State(zip(names, combo))
    else:
        common = []
        for g in grids:
            common.extend(x for x in g if x not in common)
        for x in common:
            yield State((v, x) for v in names)
        for i, v in enumerate(names):
            for x in grids[i]:
                s = State((w, zero) for w in names)
                s[v] = x
                yield s
    # pairwise-equal diagonals with random background
    for i, j in itertools.combinations(range(len(names)), 2):
        for _ in range(2):
            s = State(zip(names, draw_all()))
            s[names[j]] = s[names[i]]
            yield s
    # random samples, a share of them steered by hypothesis equations
    for k in range(dom.n):
        s = State(zip(names, draw_all()))
        if steer and k % 2 == 0:
            for _ in range(2):
                for st in steer:
                    st(s)
        yield s


def falsify(claim, dom: Optional[SampleDomain] = None):
    """Search for a state violating ``claim`` (free variables read universally)."""
    dom = dom or SampleDomain()
    body = strip_forall(claim)
    # search runs on gmpy2 rationals; a counterexample is reported in Fractions
    test = compile_formula(body, gmpy2.mpq)  # raises Unsupported on quantifiers and modalities
    names = sorted(free_vars(body))
    steer = _steering(body, gmpy2.mpq)
    count = 0
    for idx, s in enumerate(sample_states(names, dom, steer, gmpy2.mpq)):
        count += 1
        if not test(s):
            back = State((k, Fraction(int(v.numerator), int(v.denominator))) for k, v in s.items())
            return Refuted(back, idx, tuple(names))
    return NoCounterexampleFound(count)
