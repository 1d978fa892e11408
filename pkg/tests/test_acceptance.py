"""The eight acceptance criteria, one test each.

Every test reports a ``PASS criterion N`` or ``FAIL criterion N`` line; the
lines are collected again in the ``acceptance criteria`` section at the end
of the pytest run.
"""

import random
import shutil
import subprocess
import sys
import time
from fractions import Fraction as Q
from pathlib import Path

from hypothesis import HealthCheck, given, settings

from dal.calculus import DERIVED, differential, entry_formula, exit_formula
from dal.prover import check_script, derived_expansion, parse_script
from dal.semantics import NoCounterexampleFound, Poly, Refuted, SampleDomain, compile_term, falsify
from dal.semantics.flow import (
    Accepted, FlowWitness, Rejected, check_flow_witness, flow_env, parse_witness,
)
from dal.syntax import (
    Cmp, Not, Var, free_vars, normalize_formula, parse, parse_formula, parse_term, pretty,
    strip_double_negation,
)

from test_calculus import _random_constraint
from test_mutation import MUTANTS, mutate
from trees import trees

ROOT = Path(__file__).resolve().parent.parent
N = 10000


def _script(name):
    return parse_script((ROOT / "corpus" / f"{name}.dalp").read_text())


def _cli_seconds(*argv):
    exe = shutil.which("dal")
    cmd = [exe] if exe else [sys.executable, "-m", "dal.cli"]
    start = time.perf_counter()
    proc = subprocess.run(cmd + list(argv), cwd=ROOT, capture_output=True, text=True)
    return proc, time.perf_counter() - start


def _subformulas(f):
    yield f
    for k in ("left", "right", "inner", "body"):
        if hasattr(f, k):
            yield from _subformulas(getattr(f, k))


# ------------------------------------------------------------------ 1

def test_criterion_1_pendulum_index_reduction(criterion):
    with criterion(1, "pendulum index reduction closes with the lambda target, runtime < 1 s") as c:
        proc, secs = _cli_seconds("check", "corpus/pendulum.dalp")
        c.note(f"dal check {secs:.2f} s")
        assert proc.returncode == 0, proc.stdout + proc.stderr
        assert secs < 1.0

        script = _script("pendulum")
        rep = check_script(script)
        assert rep.closed and rep.accepted

        # the proven system is lambda-free
        lam_free = script.conjecture.left.prog
        assert "lambda" not in lam_free.vars and "lambda" not in free_vars(lam_free.constraint)

        target = Cmp("=", Var("lambda"), parse_term("g*y-(v^2+w^2)"))
        with_target = [g for g in rep.state.goals
                       if any(target in _subformulas(f)
                              for f in g.sequent.antecedent + g.sequent.succedent)]
        assert with_target
        assert "lambda=g*y-(v^2+w^2)" in str(with_target[0].sequent)

        ande_steps = [i for i, s in enumerate(script.steps) if s.args.get("id") == "AndDE"]
        produced = [g for g in rep.state.goals if g.step in ande_steps]
        assert len(produced) == 2
        got = [g.sequent.succedent[0].prog.constraint.right for g in produced]
        want = ["2*x*x'+2*y*y'=0", "x'*v+x*v'+y'*w+y*w'=0"]
        assert [pretty(d) for d in got] == want
        assert [normalize_formula(d) for d in got] == [normalize_formula(parse_formula(w))
                                                     for w in want]


# ------------------------------------------------------------------ 2

def test_criterion_2_circle_decomposition(criterion):
    with criterion(2, "circle GS decomposition closes, four PR targets match, runtime < 5 s") as c:
        proc, secs = _cli_seconds("check", "corpus/circle_gs.dalp")
        c.note(f"dal check {secs:.2f} s")
        assert proc.returncode == 0, proc.stdout + proc.stderr
        assert secs < 5.0

        rep = check_script(_script("circle_gs"))
        assert rep.closed and rep.accepted
        assert rep.axiom_counts.get("GS") == 1

        xs = ("x", "y")
        f = parse_formula("x'=0 & x^2=1 & y=0")
        g = parse_formula("x'=y & x^2+y^2=1 & y'=-x")
        expected = {
            "Exit(F)": (exit_formula(xs, f), "x'=0 & x^2=1 & y=0"),
            "Entry(F)": (entry_formula(xs, f), "x'=0 & x^2=1 & y=0"),
            "Exit(G)": (exit_formula(xs, g), "x'=y & x^2+y^2=1 & y'=-x"),
            "Entry(G)": (entry_formula(xs, g), "x'=y & x^2+y^2=1 & y'=-x"),
        }
        pr = rep.ledger.of_kind("PR")
        assert len(pr) == 4
        for label, (lhs, rhs) in expected.items():
            match = [cl for cl in pr if cl.claim.left == lhs]
            assert len(match) == 1, label
            assert pretty(match[0].rhs) == rhs, label
            assert not match[0].refuted

        residues = rep.ledger.of_kind("R")
        for cl in residues:
            assert isinstance(falsify(cl.claim, SampleDomain(n=N)), NoCounterexampleFound)
        c.note(f"{len(residues)} R residues clean at N={N}")


# ------------------------------------------------------------------ 3

def test_criterion_3_derived_axioms(criterion):
    with criterion(3, "derived templates use base axioms only; "
                      "every mutant is rejected at its step") as c:
        templates = {
            "derived_ar": derived_expansion("AR", "x,y", "x'=1 & y'*x'=1", "x'=1 & y'=1", "x+y<=c"),
            "derived_dc": derived_expansion("DC", "x", "x'=1", "x>=0", "x<=c"),
            "derived_ande": derived_expansion("AndDE", "x,y", "x'=y", None, "x<=c",
                                              e="x^2+y^2-1"),
        }
        for name, made in templates.items():
            for script in (_script(name), made):
                rep = check_script(script)
                assert rep.accepted, name
                assert rep.derived_uses == 0
                assert not {k for k in rep.axiom_counts if k in {d.value for d in DERIVED}}

        assert len(MUTANTS) >= 6
        for name, old, new in MUTANTS:
            text, line = mutate(name, old, new)
            rep = check_script(parse_script(text))
            assert rep.status == "rejected" and rep.error_line == line, (name, new)
            assert rep.error.startswith("SideConditionViolated")
        c.note(f"{len(MUTANTS)} mutants")


# ------------------------------------------------------------------ 4

def _consistency_residues(rep):
    first_pr = min(cl.step for cl in rep.ledger.of_kind("PR"))
    return [cl.claim for cl in rep.ledger.of_kind("R") if cl.step > first_pr]


def test_criterion_4_example5_split(criterion):
    with criterion(4, "beta split refuted at x=0, x'=1; gamma split survives N=10000"):
        beta = _consistency_residues(check_script(_script("example5_beta_refuted")))
        assert beta
        verdicts = [falsify(r, SampleDomain(n=N)) for r in beta]
        assert all(isinstance(v, Refuted) for v in verdicts)
        for v in verdicts:
            assert dict(v.state) == {"x": 0, "x'": 1}

        gamma = _consistency_residues(check_script(_script("example5_gamma")))
        assert gamma
        for r in gamma:
            v = falsify(r, SampleDomain(n=N))
            assert isinstance(v, NoCounterexampleFound) and v.samples >= N


# ------------------------------------------------------------------ 5

def _poly_term(rng, names, degree):
    mons = []
    for _ in range(rng.randint(1, 5)):
        factors = [rng.choice(names) for _ in range(rng.randint(0, degree))]
        mons.append("*".join([f"({Q(rng.randint(-5, 5), rng.randint(1, 3))})"] + factors))
    return parse_term("+".join(mons))


def test_criterion_5_differential_lemma(criterion):
    with criterion(5, "differential lemma exact on 100 random (witness, term) pairs") as c:
        rng = random.Random(20240917)
        failures = 0
        for _ in range(100):
            names = ["x", "y", "z"][: rng.randint(1, 3)]
            polys = {v: Poly([Q(rng.randint(-4, 4), rng.randint(1, 3))
                              for _ in range(rng.randint(1, 5))]) for v in names}
            w = FlowWitness(tuple(names), polys, Q(1))
            e = _poly_term(rng, names, 4)
            env = flow_env(w, (), {})
            along = compile_term(differential(e))(env)
            direct = compile_term(e)(env)
            along = along if isinstance(along, Poly) else Poly.const(along)
            direct = direct if isinstance(direct, Poly) else Poly.const(direct)
            if along.coefficients() != direct.derivative().coefficients():
                failures += 1
        c.note(f"{failures} failures")
        assert failures == 0


# ------------------------------------------------------------------ 6

def test_criterion_6_entry_exit_duality(criterion):
    with criterion(6, "entry(F) equals exit(!F) on 50 random constraints") as c:
        rng = random.Random(6)
        failures = []
        for _ in range(50):
            names = ["x", "y", "z"][: rng.randint(1, 3)]
            f = _random_constraint(rng, names, 3)
            xs = names[: rng.randint(1, len(names))]
            a = strip_double_negation(entry_formula(xs, f))
            b = strip_double_negation(exit_formula(xs, Not(f)))
            if a != b:
                failures.append(pretty(f))
        c.note(f"{len(failures)} failures")
        assert failures == []


# ------------------------------------------------------------------ 7

def _witness(name):
    return parse_witness((ROOT / "corpus" / name).read_text())


def test_criterion_7_flow_witnesses(criterion):
    with criterion(7, "phi_alpha accepted on T=1, truncated phi_beta rejected on y^2=x, "
                      "verdicts monotone in T"):
        alpha = _witness("ex1_alpha.flow")
        assert alpha.witness.T == 1
        assert isinstance(check_flow_witness(alpha.witness, alpha.dap, alpha.initial), Accepted)

        beta = _witness("ex1_beta_trunc.flow")
        r = check_flow_witness(beta.witness, beta.dap, beta.initial)
        assert isinstance(r, Rejected) and r.atom == "y^2=x"

        for wf in (alpha, beta):
            seen = []
            for T in (Q(0), Q(1, 2), Q(1)):
                w = FlowWitness(wf.witness.vars, wf.witness.polys, T)
                seen.append(bool(check_flow_witness(w, wf.dap, wf.initial)))
            # once rejected, every longer duration is rejected too
            assert seen == sorted(seen, reverse=True)
            assert seen[0]
        assert not check_flow_witness(FlowWitness(beta.witness.vars, beta.witness.polys, Q(1)),
                                      beta.dap, beta.initial)


# ------------------------------------------------------------------ 8

_ROUND = {"n": 0, "bad": []}


@settings(max_examples=1000, deadline=None, derandomize=True,
          suppress_health_check=list(HealthCheck))
@given(trees(6))
def _roundtrip(item):
    kind, tree = item
    _ROUND["n"] += 1
    if parse(pretty(tree), kind) != tree:
        _ROUND["bad"].append(pretty(tree))


def test_criterion_8_roundtrip(criterion):
    with criterion(8, "parse(print(t)) == t on 1000 random trees of depth <= 6") as c:
        _ROUND.update(n=0, bad=[])
        _roundtrip()
        c.note(f"{_ROUND['n']} trees, {len(_ROUND['bad'])} failures")
        assert _ROUND["n"] >= 1000
        assert _ROUND["bad"] == []
