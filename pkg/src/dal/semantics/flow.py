"""Exact checking of polynomial flow witnesses against DAP constraints."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from ..syntax.ast import DAP, And, Cmp, Equiv, Imply, Not, Or, prime
from ..syntax.parser import parse_program, parse_term
from ..syntax.printer import formula_str
from ..syntax.vars import free_vars
from .evaluate import State, Unsupported, compile_term
from .poly import Poly, count_roots, isolate_roots, sturm_chain, with_midpoints

__all__ = [
    "FlowWitness", "Accepted", "Rejected", "check_flow_witness", "parse_witness",
    "WitnessFile", "atom_polynomials",
]


@dataclass(frozen=True)
class FlowWitness:
    vars: Tuple[str, ...]
    polys: Dict[str, Poly]
    T: Fraction

    def position(self, x: str) -> Poly:
        return self.polys[x]

    def velocity(self, x: str) -> Poly:
        return self.polys[x].derivative()


@dataclass(frozen=True)
class Accepted:
    def __bool__(self):
        return True

    def __str__(self):
        return "Accepted"


@dataclass(frozen=True)
class Rejected:
    reason: str
    atom: Optional[str] = None
    time: Optional[str] = None

    def __bool__(self):
        return False

    def __str__(self):
        out = f"Rejected: {self.reason}"
        if self.atom is not None:
            out += f"; atom {self.atom}"
        if self.time is not None:
            out += f" at t={self.time}"
        return out


_SIGN_OK = {
    "<=": lambda s: s <= 0, "<": lambda s: s < 0, "=": lambda s: s == 0,
    "!=": lambda s: s != 0, ">=": lambda s: s >= 0, ">": lambda s: s > 0,
}


def _atoms(f, acc: List[Cmp]) -> List[Cmp]:
    if isinstance(f, Cmp):
        if f not in acc:
            acc.append(f)
    elif isinstance(f, (And, Or, Imply, Equiv)):
        _atoms(f.left, acc)
        _atoms(f.right, acc)
    elif isinstance(f, Not):
        _atoms(f.inner, acc)
    else:
        raise Unsupported(f"constraint contains a {type(f).__name__} node")
    return acc


def _truth(f, signs: Mapping[Cmp, int]) -> bool:
    if isinstance(f, Cmp):
        return _SIGN_OK[f.op](signs[f])
    if isinstance(f, And):
        return _truth(f.left, signs) and _truth(f.right, signs)
    if isinstance(f, Or):
        return _truth(f.left, signs) or _truth(f.right, signs)
    if isinstance(f, Imply):
        return (not _truth(f.left, signs)) or _truth(f.right, signs)
    if isinstance(f, Equiv):
        return _truth(f.left, signs) == _truth(f.right, signs)
    return not _truth(f.inner, signs)


def flow_env(w: FlowWitness, names, initial: Mapping) -> Dict[str, Poly]:
    env = {}
    for x in w.vars:
        env[x] = w.polys[x]
        env[prime(x)] = w.polys[x].derivative()
    for n in names:
        if n not in env:
            env[n] = Poly.const(initial.get(n, Fraction(0)))
    return env


def atom_polynomials(constraint, env) -> List[Tuple[Cmp, Poly]]:
    out = []
    for a in _atoms(constraint, []):
        lhs = compile_term(a.left)(env)
        rhs = compile_term(a.right)(env)
        p = lhs - rhs
        if not isinstance(p, Poly):
            p = Poly.const(p)
        out.append((a, p))
    return out


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def check_flow_witness(w: FlowWitness, dap: DAP, initial: Optional[Mapping] = None):
    """Decide exactly whether ``w`` is a flow of ``dap`` on [0, T] from ``initial``."""
    if set(w.vars) != set(dap.vars):
        return Rejected(f"witness defines {','.join(w.vars)} but the system evolves {','.join(dap.vars)}")
    if w.T < 0:
        return Rejected("negative duration")
    initial = State(initial or {})
    for x in dap.vars:
        p = w.polys[x]
        if x in initial and p(0) != initial[x]:
            return Rejected(f"initial value of {x} is {p(0)}, expected {initial[x]}", time="0")
        xp = prime(x)
        if xp in initial and p.derivative()(0) != initial[xp]:
            return Rejected(f"initial value of {xp} is {p.derivative()(0)}, expected {initial[xp]}",
                            time="0")
    names = free_vars(dap.constraint)
    env = flow_env(w, names, initial)
    try:
        atoms = atom_polynomials(dap.constraint, env)
    except Unsupported as exc:
        return Rejected(str(exc))
    T = Fraction(w.T)

    def failing(signs):
        if _truth(dap.constraint, signs):
            return None
        for a, _ in atoms:
            if not _SIGN_OK[a.op](signs[a]):
                return formula_str(a)
        return formula_str(dap.constraint)

    def at(t):
        return {a: _sign(p(t)) for a, p in atoms}

    # subdivision points: exact roots and isolating-interval endpoints
    product = Poly.const(1)
    for _, p in atoms:
        if p.degree >= 1:
            product = product * p.squarefree()
    points = [Fraction(0), T]
    intervals: List[Tuple[Fraction, Fraction]] = []
    if product.degree >= 1 and T > 0:
        exact, intervals = isolate_roots(product, 0, T)
        points.extend(exact)
        for lo, hi in intervals:
            points.extend((lo, hi))
    events = [(t, "point", t) for t in with_midpoints(points)]
    events += [(lo, "root", (lo, hi)) for lo, hi in intervals]
    events.sort(key=lambda e: (e[0], e[1] == "root"))
    chains = {}
    for _, kind, data in events:
        if kind == "point":
            bad = failing(at(data))
            if bad:
                return Rejected("constraint violated", atom=bad, time=str(data))
        else:
            lo, hi = data
            signs = {}
            for a, p in atoms:
                if p.degree < 1:
                    signs[a] = _sign(p(lo))
                    continue
                if a not in chains:
                    chains[a] = sturm_chain(p.squarefree())
                signs[a] = 0 if count_roots(chains[a], lo, hi) == 1 else _sign(p(lo))
            bad = failing(signs)
            if bad:
                return Rejected("constraint violated at an irrational time", atom=bad,
                                time=f"root in ({lo}, {hi})")
    return Accepted()


@dataclass
class WitnessFile:
    witness: FlowWitness
    dap: Optional[DAP] = None
    initial: State = field(default_factory=State)


def parse_witness(text: str, dap: Optional[DAP] = None) -> WitnessFile:
    """``var <x> = <poly in t>``, ``T = <q>``, optional ``dap = ...`` and ``init <v> = <q>``."""
    polys, T, init = {}, None, State()
    order = []
    t = Poly.t()
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, eq, rest = line.partition("=")
        if not eq:
            raise ValueError(f"line {n}: expected '='")
        head, rest = head.strip(), rest.strip()
        if head.startswith("var "):
            name = head[4:].strip()
            term = parse_term(rest)
            extra = free_vars(term) - {"t"}
            if extra:
                raise ValueError(f"line {n}: witness for {name} mentions {sorted(extra)}")
            val = compile_term(term)({"t": t})
            polys[name] = val if isinstance(val, Poly) else Poly.const(val)
            order.append(name)
        elif head == "T":
            T = Fraction(rest)
        elif head == "dap":
            dap = parse_program(rest)
        elif head.startswith("init "):
            init[head[5:].strip()] = Fraction(rest)
        else:
            raise ValueError(f"line {n}: unknown entry {head!r}")
    if T is None:
        raise ValueError("witness file lacks a duration line 'T = ...'")
    if dap is not None and not isinstance(dap, DAP):
        raise ValueError("dap entry must be a differential-algebraic program")
    vars_ = tuple(dap.vars) if dap is not None else tuple(order)
    missing = [v for v in vars_ if v not in polys]
    if missing:
        raise ValueError("witness lacks polynomials for " + ", ".join(missing))
    return WitnessFile(FlowWitness(vars_, polys, T), dap, init)
