import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings

from dal.calculus import (
    AlreadyDifferential, AxiomId, SchemaMismatch, SideConditionViolated, UninterpretedSymbol,
    axiom_instance, catalogue, differential, entry_formula, exit_formula, formula_differential,
    mode_consistency, progress_formula, reverse_flow,
)
from dal.semantics import Poly, compile_term
from dal.semantics.flow import FlowWitness, flow_env
from dal.syntax import (
    DAP, And, Box, Choice, Differential, Equiv, Exists, Imply, Not, Or,
    Pred, Star, free_vars, normalize, normalize_formula, parse_formula, parse_program,
    parse_term, pretty, strip_double_negation,
)

from trees import terms

F = parse_formula
T = parse_term


# ------------------------------------------------------------- differential

@pytest.mark.parametrize("src, want", [
    ("x^2+y^2-1", "2*x*x'+2*y*y'"),
    ("c", "c'"),
    ("5", "0"),
    ("x*v", "x'*v+x*v'"),
    ("x*v+y*w", "x'*v+x*v'+y'*w+y*w'"),
])
def test_differential_examples(src, want):
    got = differential(T(src))
    assert pretty(got) == want
    assert not any(isinstance(n, Differential) for n in _nodes(got))


def _nodes(t):
    yield t
    for k in ("left", "right", "inner"):
        if hasattr(t, k):
            yield from _nodes(getattr(t, k))


def test_differential_rejects_primes_and_functions():
    with pytest.raises(AlreadyDifferential):
        differential(T("x'*x"))
    with pytest.raises(UninterpretedSymbol):
        differential(T("f(x)"))


@settings(max_examples=200, deadline=None, suppress_health_check=list(HealthCheck))
@given(terms(3, polynomial=True).filter(lambda t: not any(v.endswith("'") for v in free_vars(t))),
       terms(3, polynomial=True).filter(lambda t: not any(v.endswith("'") for v in free_vars(t))))
def test_sum_and_product_rules(a, b):
    from dal.syntax import Plus, Times
    assert differential(Plus(a, b)) == normalize(Plus(differential(a), differential(b)))
    assert differential(Times(a, b)) == normalize(
        Plus(Times(differential(a), b), Times(a, differential(b))))


@pytest.mark.parametrize("src, want", [
    ("x >= 0", "x'>=0"),
    ("x^2+y^2-1 = 0", "2*x*x'+2*y*y'=0"),
    ("x > 0 | y > 0", "x'>=0 & y'>=0"),
    ("x < y", "x'<=y'"),
])
def test_formula_differential(src, want):
    assert pretty(formula_differential(F(src))) == want


def _random_poly(rng, degree, monotone=False):
    cs = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(degree + 1)]
    if monotone:
        cs = [cs[0]] + [abs(c) for c in cs[1:]]
    return Poly(cs)


def test_di_disjunction_reading_is_sound_on_polynomial_flows():
    # if x>0 | y>0 holds at 0 and x', y' >= 0 throughout, it holds afterwards
    rng = random.Random(7)
    seen = 0
    for _ in range(300):
        px, py = _random_poly(rng, 3, True), _random_poly(rng, 3, True)
        if not (px(0) > 0 or py(0) > 0):
            continue
        seen += 1
        for k in range(0, 41):
            t = Fraction(k, 8)
            assert px(t) > 0 or py(t) > 0
    assert seen > 50


def test_differential_lemma_fixed_case():
    # x = 1 - t, y = t^2: (x^2+y^2)' along the flow is d/dt (1-t)^2 + t^4
    w = FlowWitness(("x", "y"), {"x": Poly([1, -1]), "y": Poly([0, 0, 1])}, Fraction(1))
    env = flow_env(w, (), {})
    e = T("x^2+y^2")
    assert compile_term(differential(e))(env) == compile_term(e)(env).derivative()


# ------------------------------------------------------------ reverse flow

def test_reverse_flow_examples():
    f = F("x'=1 & x<=1")
    assert pretty(reverse_flow(f, ["x"])) == "-x'=1 & x<=1"
    assert normalize_formula(reverse_flow(reverse_flow(f, ["x"]), ["x"])) == normalize_formula(f)
    g = F("x<=1 & y>0")
    assert reverse_flow(g, ["x"]) == normalize_formula(g)


def test_reverse_flow_leaves_bound_primes_alone():
    f = F("[x':=1]x'>0")
    assert reverse_flow(f, ["x"]) == f
    g = F("x'>0 & [x':=1]x'>0")
    assert pretty(reverse_flow(g, ["x"])) == "-x'>0 & [x':=1](x'>0)"


# --------------------------------------------------- progress, exit, entry

def test_progress_formula_shape():
    f = F("x'=1 & -1<x & x<=1")
    got = progress_formula(["x"], f)
    want = F("\\exists y \\exists y' (x=y & x'=y' & <{x & x'=1 & -1<x & x<=1 | x=y & x'=y'}>x!=y)")
    assert got == want
    assert free_vars(got) <= free_vars(f) | {"x", "x'"}


def test_progress_ghosts_avoid_free_variables():
    got = progress_formula(["x"], F("x'=y"))
    assert isinstance(got, Exists) and got.var == "y1"


def test_exit_and_entry_shapes():
    f = F("x'=1 & -1<x & x<=1")
    ex = exit_formula(["x"], f)
    en = entry_formula(["x"], f)
    assert isinstance(ex, Or) and isinstance(en, Or)
    assert ex.left.right == f and ex.right.right == Not(f)
    assert en.left.right == Not(f) and en.right.right == f


def test_mode_consistency_shape():
    f, g = F("x'=1 & x<0"), F("x'=1 & x>=0")
    c = mode_consistency(["x"], f, g)
    assert c == Imply(And(exit_formula(["x"], f), entry_formula(["x"], g)), Equiv(f, g))


def _random_constraint(rng, names, depth):
    if depth == 0 or rng.random() < 0.3:
        v = rng.choice(names + [n + "'" for n in names])
        op = rng.choice(["<=", "<", "=", "!=", ">=", ">"])
        c = rng.randint(-3, 3)
        u = rng.choice(names)
        return F(f"{v} {op} {c}") if rng.random() < 0.5 else F(f"{v}*{u} {op} {v}+{c}")
    kind = rng.choice(["&", "|", "!"])
    if kind == "!":
        return Not(_random_constraint(rng, names, depth - 1))
    a = _random_constraint(rng, names, depth - 1)
    b = _random_constraint(rng, names, depth - 1)
    return And(a, b) if kind == "&" else Or(a, b)


def test_entry_is_exit_of_negation_on_50_random_constraints():
    rng = random.Random(2024)
    failures = []
    for i in range(50):
        names = ["x", "y", "z"][: rng.randint(1, 3)]
        f = _random_constraint(rng, names, 3)
        xs = names[: rng.randint(1, len(names))]
        a = strip_double_negation(entry_formula(xs, f))
        b = strip_double_negation(exit_formula(xs, Not(f)))
        if a != b:
            failures.append(pretty(f))
    assert failures == []


# ---------------------------------------------------------------- axioms

def test_de_instance_for_the_circle():
    inst = axiom_instance("DE", vars=("x", "y"), e=T("x^2+y^2-1"))
    assert pretty(inst.conclusion) == "[{x,y & x^2+y^2-1=0}](2*x*x'+2*y*y'=0)"
    assert inst.ok


def test_de_with_primed_e_reports_the_side_condition():
    inst = axiom_instance("DE", vars=("x",), e=T("x+x'"))
    assert not inst.ok
    with pytest.raises(SideConditionViolated, match="x′ ∈ e"):
        inst.check()


def test_di_rejects_primed_postcondition():
    inst = axiom_instance("DI", vars=("x",), F=F("x'=1"), P=F("x'>=0"))
    with pytest.raises(SideConditionViolated, match="x′ ∈ P"):
        inst.check()


def test_di_premises():
    inst = axiom_instance("DI", vars=("x",), F=F("x'=1"), P=F("x>=0"))
    assert [pretty(h) for h in inst.hypotheses] == ["x'=1 -> [{x & x'=1}](x'>=0)", "[?(x'=1)](x>=0)"]


def test_gs_conclusion_matches_the_schema():
    f = F("x'=0 & x^2=1 & y=0")
    g = F("x'=y & x^2+y^2=1 & y'=-x")
    p = Pred("P")
    inst = axiom_instance("GS", vars=("x", "y"), F=f, G=g, P=p)
    dap = lambda c: DAP(("x", "y"), c)
    assert inst.consequent == Box(dap(Or(f, g)), p)
    assert inst.hypotheses[0] == Box(dap(Or(f, g)), And(mode_consistency(["x", "y"], f, g),
                                                        mode_consistency(["x", "y"], g, f)))
    assert inst.hypotheses[1] == Imply(Or(f, g), Box(Star(Choice(dap(f), dap(g))), p))


@pytest.mark.parametrize("ys, bad", [("lambda", False), ("v", True)])
def test_dr_ghost_freshness(ys, bad):
    inst = axiom_instance("DR", vars=("x",), ys=ys, F=F("x'=v"), G=F("lambda=1"), P=F("x>=0"))
    assert inst.ok is not bad


def test_ag_side_conditions():
    base = dict(vars=("x",), ys=("z",), F=F("x'=1"), G=F("z>=0"), P=F("x>=0"))
    assert axiom_instance("AG", dict(base, h=T("x^2"))).ok
    assert not axiom_instance("AG", dict(base, h=T("z"))).ok
    assert not axiom_instance("AG", dict(base, G=F("z'>=0"), h=T("0"))).ok


def test_bdg_and_dx_shapes():
    inst = axiom_instance("BDG", vars=("x",), ys=("z",), F=F("x'=1"), P=F("x>=0"),
                          h=T("x^2"), g=T("x"))
    assert pretty(inst.consequent) == "[{x & x'=1}](x>=0) <-> [{x,z & x'=1 & z'=x}](x>=0)"
    dx = axiom_instance("DX", vars=("x",), F=F("x>=0"), P=F("x>=0"))
    assert pretty(dx.consequent) == "[?(x>=0)](x>=0)"


def test_unknown_axiom_and_missing_parameter():
    with pytest.raises(SchemaMismatch):
        axiom_instance("XYZ")
    with pytest.raises(SchemaMismatch, match="missing"):
        axiom_instance("DW", vars=("x",))


@pytest.mark.parametrize("aid, params", [
    ("DW", dict(vars="x", F=F("x'=1"))),
    ("C", dict(vars="x", F=F("x'=1"), G=F("x>0"), P=F("x>=0"))),
    ("DE", dict(vars="x,y", e=T("x^2+y^2"), g=T("1"))),
    ("DR", dict(vars="x", ys="z", F=F("x'=1"), G=F("z=x"), P=F("x>=0"))),
    ("AR", dict(vars="x", F=F("x'=1 & x>0"), G=F("x'=1"), P=F("x>=0"))),
    ("DC", dict(vars="x", F=F("x'=1"), G=F("x>0"), P=F("x>=0"))),
    ("AndDE", dict(vars="x,y", F=F("x'=y"), e=T("x^2+y^2-1"), P=F("x<=1"))),
    ("Union", dict(alpha=parse_program("x:=1"), beta=parse_program("x:=2"), P=F("x>0"))),
    ("K", dict(alpha=parse_program("x:=1"), R=F("x>0"), P=F("x>=0"))),
])
def test_conclusions_reparse(aid, params):
    inst = axiom_instance(aid, params)
    assert F(pretty(inst.conclusion)) == inst.conclusion


def test_ande_computes_its_own_differential():
    inst = axiom_instance("AndDE", vars="x,y", F=F("x'=y"), e=T("x^2+y^2-1"), P=F("x<=1"))
    rhs = inst.consequent.right
    assert pretty(rhs.prog.constraint.right) == "2*x*x'+2*y*y'=0"


def test_catalogue_lists_every_schema():
    text = catalogue()
    for a in AxiomId:
        assert a.value in text.split() or a.value in text
