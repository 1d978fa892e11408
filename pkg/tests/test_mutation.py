"""Single-point mutations of the derived-axiom proofs must be rejected.

Each mutant breaks one side condition (ghost freshness, ghost-free G, or a
primed DE term) and the checker has to stop on exactly the mutated line.
"""

from pathlib import Path

import pytest

from dal.prover import check_script, parse_script

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

MUTANTS = [
    ("derived_ar", 'id=DR vars="x,y" ys="z"', 'id=DR vars="x,y" ys="c"'),
    ("derived_ar", 'ys="z" F="$F" G="$G" h="0"', 'ys="z" F="$F" G="$G" h="z"'),
    ("derived_ar", 'args={keep="0"}', 'args={keep="0,1"}'),
    ("derived_dc", 'id=AG vars="x" ys="z" F="$F & $G" G="$T"',
     'id=AG vars="x" ys="c" F="$F & $G" G="$T"'),
    ("derived_dc", 'id=AG vars="x" ys="z" F="$F & $G" G="$T"',
     'id=AG vars="x" ys="z" F="$F & $G" G="z\'^2>=0"'),
    ("derived_dc", 'id=DR vars="x" ys="z" F="$F" G="$T"', 'id=DR vars="x" ys="c" F="$F" G="$T"'),
    ("derived_ande", 'id=DE vars="x,y" e="x^2+y^2-1"', 'id=DE vars="x,y" e="x^2+y^2-1+x\'"'),
    ("derived_ande", 'id=AG vars="x,y" ys="z" F="$F & $E" G="$D" h="0"',
     'id=AG vars="x,y" ys="z" F="$F & $E" G="$D" h="z"'),
]


def mutate(name, old, new):
    text = (CORPUS / f"{name}.dalp").read_text()
    assert text.count(old) == 1, (name, old)
    line = next(i for i, l in enumerate(text.splitlines(), 1) if old in l)
    return text.replace(old, new), line


def test_unmutated_templates_are_accepted():
    for name in ("derived_ar", "derived_dc", "derived_ande"):
        assert check_script(parse_script((CORPUS / f"{name}.dalp").read_text())).accepted


@pytest.mark.parametrize("name, old, new", MUTANTS,
                         ids=[f"{m[0]}-{i}" for i, m in enumerate(MUTANTS)])
def test_mutant_rejected_at_the_mutated_step(name, old, new):
    text, line = mutate(name, old, new)
    rep = check_script(parse_script(text))
    assert rep.status == "rejected"
    assert rep.error_line == line
    assert rep.error.startswith("SideConditionViolated")
