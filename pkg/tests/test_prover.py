from pathlib import Path

import pytest

from dal.calculus import SideConditionViolated
from dal.prover import (
    Config, EigenvariableNotFresh, MalformedClaim, PatternMismatch, PolarityViolation,
    Position, PositionError, ProofError, ShapeMismatch, ScriptError, StrictPolicyViolation,
    check_script, derived_expansion, expansion_text, make_oracle, new_proof, parse_script,
)
from dal.semantics import SampleDomain
from dal.syntax import parse_formula, pretty

ROOT = Path(__file__).resolve().parent.parent
F = parse_formula


def _script(name):
    return parse_script((ROOT / "corpus" / name).read_text())


def _seq(st, i):
    return str(st.goals[i].sequent)


# --------------------------------------------------------- propositional

def test_new_proof_starts_with_one_goal():
    st = new_proof(F("P -> P"))
    assert len(st.goals) == 1 and not st.closed
    assert st.apply("impR", pos="R.0") == [1]
    assert st.apply("id", goal=1) == []
    assert st.closed


def test_and_right_splits_in_order():
    st = new_proof(F("P & Q"))
    assert st.apply("andR", pos="R.0") == [1, 2]
    assert _seq(st, 1).endswith("P") and _seq(st, 2).endswith("Q")


def test_equivR_left_to_right_first():
    st = new_proof(F("P <-> Q"))
    st.apply("equivR")
    a, b = st.goals[1].sequent, st.goals[2].sequent
    assert (a.antecedent, a.succedent) == ((F("P"),), (F("Q"),))
    assert (b.antecedent, b.succedent) == ((F("Q"),), (F("P"),))


def test_cut_adds_both_premises():
    st = new_proof(F("Q"))
    st.apply("cut", args={"C": "P"})
    assert st.goals[1].sequent.succedent == (F("Q"), F("P"))
    assert st.goals[2].sequent.antecedent == (F("P"),)


def test_wrong_connective_and_side():
    st = new_proof(F("P | Q"))
    with pytest.raises(PatternMismatch):
        st.apply("andR")
    with pytest.raises(PatternMismatch):
        st.apply("andL", pos="R.0")
    with pytest.raises(PositionError):
        st.apply("orR", pos="R.3")
    with pytest.raises(ProofError, match="unknown rule"):
        st.apply("magic")


def test_id_with_explicit_position():
    st = new_proof(F("P -> Q -> P"))
    st.apply("impR")
    st.apply("impR")
    with pytest.raises(ShapeMismatch):
        st.apply("id", args={"left": "1"})
    assert st.apply("id", args={"left": "0"}) == []


def test_positions_parse():
    assert Position.parse("L.2.0.1") == Position("L", 2, (0, 1))
    assert Position.parse(None) == Position("R", 0)
    assert str(Position.parse("3")) == "R.3"
    with pytest.raises(PositionError):
        Position.parse("X.0")


# ----------------------------------------------------------- quantifiers

def test_eigenvariable_must_be_fresh():
    st = new_proof(F("x > 0 -> \\forall y (y >= y)"))
    st.apply("impR")
    with pytest.raises(EigenvariableNotFresh):
        st.apply("allR", args={"var": "x"})
    with pytest.raises(EigenvariableNotFresh, match="sort"):
        st.apply("allR", args={"var": "u'"})
    st.apply("allR", args={"var": "u"})
    assert pretty(st.goals[-1].sequent.succedent[0]) == "u>=u"


def test_forall_left_instantiates():
    st = new_proof(F("\\forall x (x >= 0) -> 3 >= 0"))
    st.apply("impR")
    st.apply("allL", pos="L.0", args={"t": "3"})
    assert st.apply("id") == []


# -------------------------------------------------------------- G rule

def test_G_keeps_only_context_disjoint_from_bound_variables():
    st = new_proof(F("x >= 0 -> y > 0 -> [x:=x+1]x >= 0"))
    st.apply("impR")
    st.apply("impR")
    with pytest.raises(SideConditionViolated, match="x ∈ FV"):
        st.apply("G", args={"keep": "0"})
    created = st.apply("G", args={"keep": "1"})
    assert st.goals[created[0]].sequent.antecedent == (F("y > 0"),)


def test_G_reports_primed_bound_variables():
    st = new_proof(F("x' = 1 -> [{x & x'=1}]x >= 0"))
    st.apply("impR")
    with pytest.raises(SideConditionViolated, match="x′"):
        st.apply("G", args={"keep": "0"})


# ------------------------------------------------------------- rewriting

def test_rewrite_under_negation_is_a_polarity_violation():
    st = new_proof(F("!([x:=1]x>=0)"))
    args = {"id": "AssignAx", "x": "x", "e": "1", "P": "x>=0"}
    with pytest.raises(PolarityViolation, match="negation"):
        st.apply("rewrite", pos="R.0.0", args=args)
    assert st.apply("rewrite", pos="R.0.0", args=dict(args, allow_negation="true")) == [1]
    assert pretty(st.goals[1].sequent.succedent[0]) == "!(1>=0)"


def test_rewrite_in_antecedent_refused():
    st = new_proof(F("[x:=1]x>=0 -> Q"))
    st.apply("impR")
    with pytest.raises(PolarityViolation):
        st.apply("rewrite", pos="L.0", args={"id": "AssignAx", "x": "x", "e": "1", "P": "x>=0"})


def test_axiom_shape_mismatch_names_both_sides():
    st = new_proof(F("[{x & x'=1}]x>=0"))
    with pytest.raises(ShapeMismatch) as info:
        st.apply("axiom", args={"id": "DW", "vars": "x", "F": "x'=2"})
    assert "x'=2" in str(info.value)


def test_axiom_counts_and_derived_uses():
    rep = check_script(_script("circle_gs.dalp"))
    assert rep.axiom_counts.get("GS") == 1
    for name in ("derived_ar", "derived_dc", "derived_ande"):
        assert check_script(_script(name + ".dalp")).derived_uses == 0


# --------------------------------------------------------------- oracles

def _r_on(claim_text):
    st = new_proof(F(claim_text), make_oracle(Config()))
    st.apply("impR")
    st.apply("R")
    return st.ledger.of_kind("R")[0]


def test_R_refutes_a_false_claim():
    c = _r_on("x > 0 -> x < 0")
    assert c.refuted
    assert "x=1" in c.detail


def test_R_records_sampled_status():
    c = _r_on("x > 0 -> x^2 > 0")
    # the random draws plus the fixed grid points
    n = int(c.status.split("-")[1])
    assert c.status == f"sampled-{n}-no-counterexample" and n >= 10000


def test_R_rejects_a_misquoted_claim():
    st = new_proof(F("x >= 0 -> x + 1 > 0"))
    with pytest.raises(MalformedClaim):
        st.apply("R", args={"claim": "x > 0"})


def test_R_weakens_modal_formulas_away():
    st = new_proof(F("[x:=1]x>0"), make_oracle(Config()))
    st.apply("R")
    c = st.ledger.of_kind("R")[0]
    assert pretty(c.claim) == "0=1" and c.refuted


def test_PR_claim_must_match_the_subformula():
    st = new_proof(F("x'=1 -> P"))
    with pytest.raises(ShapeMismatch):
        st.apply("PR", pos="R.0.0", args={"kind": "exit", "vars": "x", "F": "x'=1",
                                          "rhs": "x'=1"})
    with pytest.raises(ProofError, match="kind"):
        st.apply("PR", pos="R.0.0", args={"kind": "sideways", "vars": "x", "F": "x'=1",
                                          "rhs": "x'=1"})


def test_PR_audit_results_in_the_ledger():
    rep = check_script(_script("ex3_ex4_targets.dalp"))
    assert rep.closed and not rep.accepted
    verdicts = {str(c.rhs): c.refuted for c in rep.ledger.of_kind("PR")}
    assert [c.refuted for c in rep.ledger.of_kind("PR")] == [True, False, True]
    assert len(verdicts) == 3


# ------------------------------------------------------------- policies

def test_strict_policy_stops_at_first_oracle_step():
    rep = check_script(_script("pendulum.dalp"), Config(policy="strict"))
    assert not rep.accepted
    assert rep.error.startswith(StrictPolicyViolation.__name__)


def test_permissive_policy_marks_claims_untested():
    rep = check_script(_script("example5_beta_refuted.dalp"), Config(policy="permissive"))
    assert rep.accepted
    assert rep.ledger.untested and not rep.ledger.refuted


def test_policy_name_checked():
    with pytest.raises(ValueError):
        Config(policy="lenient")


# ----------------------------------------------------------------- scripts

def test_script_parse_fields():
    s = parse_script('name = t\nexpect = rejected\nlet A = "x>0"\n'
                     'conjecture = "$A -> $A"  # comment\nrule=impR pos=R.0 note="a # b"\n'
                     "rule=id goal=1\n")
    assert (s.name, s.expect) == ("t", "rejected")
    assert s.conjecture == F("x>0 -> x>0")
    assert [st.rule for st in s.steps] == ["impR", "id"]
    assert s.steps[0].note == "a # b" and s.steps[1].goal == 1


@pytest.mark.parametrize("text, where", [
    ("rule=impR\n", None),
    ('conjecture = "P"\nrule=impR bogus=1\n', 2),
    ('conjecture = "P"\npos=R.0\n', 2),
    ('conjecture = "P"\nrule=id goal=x\n', 2),
    ('conjecture = "P"\nrule=axiom args={id="DW"\n', 2),
    ('conjecture = "P +"\n', 1),
    ('expect = maybe\nconjecture = "P"\n', None),
    ('conjecture = "$UNSET"\n', 1),
])
def test_script_errors(text, where):
    with pytest.raises(ScriptError) as info:
        parse_script(text)
    assert info.value.line == where


def test_replay_is_deterministic():
    first = check_script(_script("circle_gs.dalp")).text()
    second = check_script(_script("circle_gs.dalp")).text()
    assert first == second


def test_error_reports_step_and_line():
    rep = check_script(_script("tampered_di.dalp"))
    assert rep.error_step == 1
    assert rep.error == "SideConditionViolated: x′ ∈ P"
    assert rep.error_line is not None
    assert "error at step 1" in rep.text()


def test_seed_changes_only_sample_choice():
    dom = SampleDomain(seed=1)
    rep = check_script(_script("example5_beta_refuted.dalp"), Config(dom=dom))
    assert [c.refuted for c in rep.ledger.of_kind("R")] == [False, True, True]


# ---------------------------------------------------------- derived templates

def _steps(script):
    return [(s.rule, s.goal, s.pos, s.args) for s in script.steps]


@pytest.mark.parametrize("aid, corpus, kw", [
    ("AR", "derived_ar.dalp", dict(vars="x,y", F="x'=1 & y'*x'=1", G="x'=1 & y'=1", P="x+y<=c")),
    ("DC", "derived_dc.dalp", dict(vars="x", F="x'=1", G="x>=0", P="x<=c")),
    ("AndDE", "derived_ande.dalp", dict(vars="x,y", F="x'=y", e="x^2+y^2-1", P="x<=c")),
])
def test_expansion_reproduces_the_corpus_proof(aid, corpus, kw):
    made = derived_expansion(aid, **kw)
    ref = _script(corpus)
    assert made.conjecture == ref.conjecture
    assert _steps(made) == _steps(ref)
    rep = check_script(made)
    assert rep.accepted and rep.derived_uses == 0


def test_expansion_picks_fresh_ghosts():
    text = expansion_text("DC", vars="x", F="x'=z", G="w>=0", P="x<=c")
    assert 'let Z = "z1"' in text and 'let W = "w1"' in text
    rep = check_script(parse_script(text))
    assert rep.accepted, rep.text()


def test_expansion_rejects_base_axioms():
    from dal.calculus import SchemaMismatch
    with pytest.raises(SchemaMismatch):
        expansion_text("DW", vars="x", F="x'=1")


# ------------------------------------------------------------ corpus properties

def test_pendulum_and_circle_claim_counts():
    pend = check_script(_script("pendulum.dalp"))
    assert pend.closed
    assert (len(pend.ledger.of_kind("R")), len(pend.ledger.of_kind("PR"))) == (3, 0)
    circ = check_script(_script("circle_gs.dalp"))
    assert circ.closed and len(circ.ledger.of_kind("PR")) >= 4


def test_wellformedness_sweep():
    from dal.prover import Sequent, wellformed
    assert wellformed(Sequent((), (F("\\forall x \\forall x (x>0)"),))) is not None
    assert wellformed(Sequent((F("f(x)>0"),), (F("f(x,y)>0"),))) is not None
    for name in ("pendulum.dalp", "circle_gs.dalp", "derived_dc.dalp"):
        rep = check_script(_script(name))
        assert all(wellformed(g.sequent) is None for g in rep.state.goals)


def test_accepted_scripts_survive_a_second_seed():
    # soundness smoke check: R leaves of accepted scripts hold under fresh samples
    from dal.semantics import falsify
    dom = SampleDomain(seed=7, n=2000)
    for path in sorted((ROOT / "corpus").glob("*.dalp")):
        rep = check_script(parse_script(path.read_text()))
        if not rep.accepted:
            continue
        for c in rep.ledger.of_kind("R"):
            assert falsify(c.claim, dom), (path.name, pretty(c.claim))
