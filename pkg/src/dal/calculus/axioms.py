"""Axiom schemata and their instantiation with side-condition checks.

Every schema is stored as a list of hypotheses and a consequent, so that
``X1 -> (X2 -> C)`` style axioms can be used by strengthening a goal ``C``
to the goals ``X1, X2``.  Equivalence axioms (possibly conditional) have an
``Equiv`` consequent and are usable for rewriting.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..syntax.ast import (
    And, Assign, Box, Choice, Cmp, Const, DAP, DiffVar, Differential, Equiv,
    Forall, Imply, Or, Plus, Seq, Star, Test, Times, Var, is_primed, prime,
)
from ..syntax.printer import pretty
from ..syntax.subst import SubstitutionClash, substitute
from ..syntax.vars import dap_vars, free_vars
from .flows import differential, formula_differential, mode_consistency

__all__ = [
    "AxiomId", "AxiomInstance", "SideCondition", "SchemaMismatch",
    "SideConditionViolated", "axiom_instance", "catalogue", "forall_block",
]


class AxiomId(enum.Enum):
    DW = "DW"
    C = "C"
    DE = "DE"
    DX = "DX"
    DI = "DI"
    DR = "DR"
    AG = "AG"
    BDG = "BDG"
    GS = "GS"
    AR = "AR"
    DC = "DC"
    AndDE = "AndDE"
    Union = "Union"
    K = "K"
    ForallInst = "ForallInst"
    SeqCompose = "SeqCompose"
    AssignAx = "AssignAx"
    ConstD = "ConstD"
    VarD = "VarD"
    PlusD = "PlusD"
    TimesD = "TimesD"

    @classmethod
    def parse(cls, name: str) -> "AxiomId":
        key = _ALIASES.get(name, name)
        try:
            return cls(key)
        except ValueError:
            raise SchemaMismatch(f"unknown axiom {name!r}") from None


_ALIASES = {
    "∧DE": "AndDE", "andDE": "AndDE", "[++]": "Union", "[∪]": "Union", "forall_i": "ForallInst",
    "∀i": "ForallInst", "[;]": "SeqCompose", "[:=]": "AssignAx", "c'": "ConstD",
    "x'": "VarD", "+'": "PlusD", "*'": "TimesD",
}

# derived axioms: usable, but not "base" for the derived-rule fidelity check
DERIVED = frozenset({AxiomId.AR, AxiomId.DC, AxiomId.AndDE})


class SchemaMismatch(ValueError):
    pass


class SideConditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class SideCondition:
    description: str
    passed: bool
    offending: Tuple[str, ...] = ()

    def message(self) -> str:
        return self.description if self.passed else _violation_text(self)


def _math(v: str) -> str:
    return v[:-1] + "′" if is_primed(v) else v


def _violation_text(sc: SideCondition) -> str:
    where = sc.description.rsplit("∉", 1)[-1].strip()
    names = ",".join(_math(v) for v in sc.offending)
    return f"{names} ∈ {where}"


@dataclass
class AxiomInstance:
    id: AxiomId
    params: Dict[str, object]
    hypotheses: List[object]
    consequent: object
    side_conditions: List[SideCondition] = field(default_factory=list)

    @property
    def conclusion(self):
        out = self.consequent
        for h in reversed(self.hypotheses):
            out = Imply(h, out)
        return out

    @property
    def ok(self) -> bool:
        return all(sc.passed for sc in self.side_conditions)

    def check(self) -> "AxiomInstance":
        for sc in self.side_conditions:
            if not sc.passed:
                raise SideConditionViolated(_violation_text(sc))
        return self

    def __str__(self) -> str:
        return f"{self.id.value}: {pretty(self.conclusion)}"


# ------------------------------------------------------------------ helpers

def forall_block(names: Sequence[str], body):
    for v in reversed(list(names)):
        body = Forall(v, body)
    return body


def _need(params, *keys):
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        raise SchemaMismatch("missing parameter(s) " + ", ".join(missing))
    return [params[k] for k in keys]


def _tuple(params, key="vars") -> Tuple[str, ...]:
    xs = params.get(key)
    if xs is None:
        raise SchemaMismatch(f"missing parameter {key}")
    if isinstance(xs, str):
        xs = [s.strip() for s in xs.split(",") if s.strip()]
    xs = tuple(xs)
    if not xs or len(set(xs)) != len(xs) or any(is_primed(x) for x in xs):
        raise SchemaMismatch(f"{key} must be a nonempty tuple of distinct base variables")
    return xs


def _terms(params, key, n):
    ts = params.get(key)
    if ts is None:
        raise SchemaMismatch(f"missing parameter {key}")
    if not isinstance(ts, (list, tuple)):
        ts = [ts]
    if len(ts) != n:
        raise SchemaMismatch(f"{key} needs {n} term(s), got {len(ts)}")
    return list(ts)


def _noprime(xs, nodes, where) -> SideCondition:
    bad = set(prime(x) for x in xs)
    hit = set()
    for n in nodes:
        hit |= free_vars(n) & bad
    return SideCondition(f"{_math(prime(xs[0])) if len(xs) == 1 else 'x̄′'} ∉ {where}",
                         not hit, tuple(sorted(hit)))


def _fresh(ys, nodes, where) -> SideCondition:
    names = dap_vars(ys)
    hit = set()
    for n in nodes:
        hit |= free_vars(n) & names
    return SideCondition(f"ȳ,ȳ′ ∉ {where}", not hit, tuple(sorted(hit)))


def _disjoint(xs, ys):
    if set(xs) & set(ys):
        raise SchemaMismatch("ghost tuple must be disjoint from the system tuple")


def _box(xs, f, p):
    return Box(DAP(tuple(xs), f), p)


# ------------------------------------------------------------------ schemata

def _dw(p):
    xs = _tuple(p)
    (f,) = _need(p, "F")
    return [], _box(xs, f, f), []


def _c(p):
    xs = _tuple(p)
    f, g, q = _need(p, "F", "G", "P")
    return [], Equiv(_box(xs, And(f, g), q), _box(xs, And(g, f), q)), []


def _de(p):
    xs = _tuple(p)
    (e,) = _need(p, "e")
    g = p.get("g") or Const(0)
    sc = [_noprime(xs, [e, g], "e")]
    de, dg = _differentials(sc[0], e, g)
    return [], _box(xs, Cmp("=", e, g), Cmp("=", de, dg)), sc


def _differentials(sc, *terms):
    # a primed e has no computable differential; keep (e)' so the failed
    # side condition, not the differentiator, is what gets reported
    if not sc.passed:
        return [Differential(t) for t in terms]
    return [differential(t) for t in terms]


def _dx(p):
    xs = _tuple(p)
    f, q = _need(p, "F", "P")
    return [_box(xs, f, q)], Box(Test(f), q), []


def _di(p):
    xs = _tuple(p)
    f, q = _need(p, "F", "P")
    sc = [_noprime(xs, [q], "P")]
    try:
        dq = formula_differential(q)
    except ValueError as exc:
        if sc[0].passed:
            raise SchemaMismatch(f"DI postcondition: {exc}") from None
        dq = _symbolic_prime(q)  # the instance is unusable anyway
    return [Imply(f, _box(xs, f, dq)), Box(Test(f), q)], _box(xs, f, q), sc


def _symbolic_prime(q):
    if isinstance(q, Cmp):
        return Cmp(q.op, Differential(q.left), Differential(q.right))
    if isinstance(q, (And, Or)):
        return And(_symbolic_prime(q.left), _symbolic_prime(q.right))
    raise SchemaMismatch("DI postcondition must be arithmetic")


def _dr(p):
    xs = _tuple(p)
    ys = _tuple(p, "ys")
    _disjoint(xs, ys)
    f, g, q = _need(p, "F", "G", "P")
    sc = [_fresh(ys, [q, f], "P, F")]
    return [_box(xs, f, q)], forall_block(ys + tuple(prime(y) for y in ys),
                                          _box(xs + ys, And(f, g), q)), sc


def _ag(p):
    xs = _tuple(p)
    ys = _tuple(p, "ys")
    _disjoint(xs, ys)
    f, g, q = _need(p, "F", "G", "P")
    hs = _terms(p, "h", len(ys))
    try:
        g_h = substitute(g, dict(zip(ys, hs)))
    except SubstitutionClash as exc:
        raise SchemaMismatch(f"AG: cannot instantiate G: {exc}") from None
    sc = [_fresh(ys, [q, f] + hs, "P, F, h"),
          SideCondition("ȳ′ ∉ G(·)", not (free_vars(g) & {prime(y) for y in ys}),
                        tuple(sorted(free_vars(g) & {prime(y) for y in ys})))]
    ghost = forall_block(ys + tuple(prime(y) for y in ys), _box(xs + ys, And(f, g), q))
    return [_box(xs, f, g_h), ghost], _box(xs, f, q), sc


def _sum_squares(ys):
    parts = [Times(Var(y), Var(y)) for y in ys]
    out = parts[-1]
    for t in reversed(parts[:-1]):
        out = Plus(t, out)
    return out


def _bdg(p):
    xs = _tuple(p)
    ys = _tuple(p, "ys")
    _disjoint(xs, ys)
    f, q, h = _need(p, "F", "P", "h")
    gs = _terms(p, "g", len(ys))
    yeq = None
    for y, gi in zip(ys, gs):
        a = Cmp("=", DiffVar(y), gi)
        yeq = a if yeq is None else And(yeq, a)
    sc = [_fresh(ys, [q, f, h], "P, F, h")]
    aug = And(f, yeq)
    bound = _box(xs + ys, aug, Cmp("<=", _sum_squares(ys), h))
    return [bound], Equiv(_box(xs, f, q), _box(xs + ys, aug, q)), sc


def _gs(p):
    xs = _tuple(p)
    f, g, q = _need(p, "F", "G", "P")
    cons = And(mode_consistency(xs, f, g), mode_consistency(xs, g, f))
    loop = Box(Star(Choice(DAP(xs, f), DAP(xs, g))), q)
    return [_box(xs, Or(f, g), cons), Imply(Or(f, g), loop)], _box(xs, Or(f, g), q), []


def _ar(p):
    xs = _tuple(p)
    f, g, q = _need(p, "F", "G", "P")
    closure = forall_block(xs + tuple(prime(x) for x in xs), Imply(f, g))
    return [closure, _box(xs, g, q)], _box(xs, f, q), []


def _dc(p):
    xs = _tuple(p)
    f, g, q = _need(p, "F", "G", "P")
    return [_box(xs, f, g)], Equiv(_box(xs, And(f, g), q), _box(xs, f, q)), []


def _andde(p):
    xs = _tuple(p)
    f, e, q = _need(p, "F", "e", "P")
    g = p.get("g") or Const(0)
    eq = Cmp("=", e, g)
    sc = [_noprime(xs, [e, g], "e")]
    deq = Cmp("=", *_differentials(sc[0], e, g))
    return [], Equiv(_box(xs, And(f, eq), q), _box(xs, And(And(f, eq), deq), q)), sc


def _union(p):
    a, b, q = _need(p, "alpha", "beta", "P")
    return [], Equiv(Box(Choice(a, b), q), And(Box(a, q), Box(b, q))), []


def _k(p):
    a, r, q = _need(p, "alpha", "R", "P")
    return [Box(a, Imply(r, q)), Box(a, r)], Box(a, q), []


def _forall_inst(p):
    vs = p.get("vars")
    if isinstance(vs, str):
        vs = [s.strip() for s in vs.split(",") if s.strip()]
    if not vs:
        raise SchemaMismatch("ForallInst needs the quantified variables")
    (body,) = _need(p, "p")
    ts = _terms(p, "t", len(vs))
    try:
        inst = substitute(body, dict(zip(vs, ts)))
    except SubstitutionClash as exc:
        raise SchemaMismatch(f"ForallInst: {exc}") from None
    return [forall_block(vs, body)], inst, []


def _seq(p):
    a, b, q = _need(p, "alpha", "beta", "P")
    return [], Equiv(Box(Seq(a, b), q), Box(a, Box(b, q))), []


def _assign(p):
    x, e, q = _need(p, "x", "e", "P")
    try:
        rhs = substitute(q, {x: e})
    except SubstitutionClash as exc:
        raise SchemaMismatch(f"[:=]: {exc}") from None
    return [], Equiv(Box(Assign(x, e), q), rhs), []


def _constd(p):
    (c,) = _need(p, "c")
    if not isinstance(c, Const):
        raise SchemaMismatch("c' needs a numeric constant")
    return [], Cmp("=", Differential(c), Const(0)), []


def _vard(p):
    (x,) = _need(p, "x")
    if isinstance(x, Var):
        x = x.name
    return [], Cmp("=", Differential(Var(x)), DiffVar(x)), []


def _plusd(p):
    e, k = _need(p, "e", "k")
    return [], Cmp("=", Differential(Plus(e, k)), Plus(Differential(e), Differential(k))), []


def _timesd(p):
    e, k = _need(p, "e", "k")
    rhs = Plus(Times(Differential(e), k), Times(e, Differential(k)))
    return [], Cmp("=", Differential(Times(e, k)), rhs), []


_BUILDERS = {
    AxiomId.DW: _dw, AxiomId.C: _c, AxiomId.DE: _de, AxiomId.DX: _dx, AxiomId.DI: _di,
    AxiomId.DR: _dr, AxiomId.AG: _ag, AxiomId.BDG: _bdg, AxiomId.GS: _gs, AxiomId.AR: _ar,
    AxiomId.DC: _dc, AxiomId.AndDE: _andde, AxiomId.Union: _union, AxiomId.K: _k,
    AxiomId.ForallInst: _forall_inst, AxiomId.SeqCompose: _seq, AxiomId.AssignAx: _assign,
    AxiomId.ConstD: _constd, AxiomId.VarD: _vard, AxiomId.PlusD: _plusd, AxiomId.TimesD: _timesd,
}


def axiom_instance(id, params: Optional[dict] = None, **kw) -> AxiomInstance:
    """Instantiate schema ``id``; side conditions are recorded, not enforced."""
    if isinstance(id, str):
        id = AxiomId.parse(id)
    params = dict(params or {}, **kw)
    hyps, cons, sc = _BUILDERS[id](params)
    return AxiomInstance(id, params, hyps, cons, sc)


_CATALOGUE = [
    ("DW", "[{x̄ & F}]F", ""),
    ("C", "[{x̄ & F ∧ G}]P ↔ [{x̄ & G ∧ F}]P", ""),
    ("DE", "[{x̄ & e = g}](e)′ = (g)′", "x̄′ ∉ e, g"),
    ("DX", "[{x̄ & F}]P → [?F]P", ""),
    ("DI", "(F → [{x̄ & F}](P)′) → ([?F]P → [{x̄ & F}]P)", "x̄′ ∉ P"),
    ("DR", "[{x̄ & F}]P → ∀ȳ∀ȳ′[{x̄,ȳ & F ∧ G}]P", "ȳ,ȳ′ ∉ P, F"),
    ("AG", "[{x̄ & F}]G(h̄) → (∀ȳ∀ȳ′[{x̄,ȳ & F ∧ G(ȳ)}]P → [{x̄ & F}]P)",
     "ȳ,ȳ′ ∉ P, F, h̄; ȳ′ ∉ G(·)"),
    ("BDG", "[{x̄,ȳ & F ∧ ȳ′=ḡ}]‖ȳ‖² ≤ h → ([{x̄ & F}]P ↔ [{x̄,ȳ & F ∧ ȳ′=ḡ}]P)",
     "ȳ,ȳ′ ∉ P, F, h"),
    ("GS", "[{x̄ & F ∨ G}](consis(F,G) ∧ consis(G,F)) → ((F ∨ G → [{{x̄ & F} ++ {x̄ & G}}*]P)"
           " → [{x̄ & F ∨ G}]P)", ""),
    ("AR", "∀x̄∀x̄′(F → G) → ([{x̄ & G}]P → [{x̄ & F}]P)", "derived"),
    ("DC", "[{x̄ & F}]G → ([{x̄ & F ∧ G}]P ↔ [{x̄ & F}]P)", "derived"),
    ("AndDE", "[{x̄ & F ∧ e = g}]P ↔ [{x̄ & F ∧ e = g ∧ (e)′ = (g)′}]P", "x̄′ ∉ e, g; derived"),
    ("Union", "[α ++ β]P ↔ [α]P ∧ [β]P", ""),
    ("K", "[α](R → P) → ([α]R → [α]P)", ""),
    ("ForallInst", "∀v̄ p → p[v̄ ↦ t̄]", "admissible substitution"),
    ("SeqCompose", "[α;β]P ↔ [α][β]P", ""),
    ("AssignAx", "[x := e]P ↔ P[x ↦ e]", "admissible substitution"),
    ("ConstD", "(c)′ = 0", ""),
    ("VarD", "(x)′ = x′", ""),
    ("PlusD", "(e + k)′ = (e)′ + (k)′", ""),
    ("TimesD", "(e·k)′ = (e)′·k + e·(k)′", ""),
]


def catalogue() -> str:
    lines = []
    for name, schema, side in _CATALOGUE:
        line = f"{name:<11} {schema}"
        if side:
            line += f"    ({side})"
        lines.append(line)
    return "\n".join(lines)
