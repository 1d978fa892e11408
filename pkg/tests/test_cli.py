import random
import shutil
import subprocess
import sys

import pytest

from dal.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ------------------------------------------------------------ exit codes

def test_accepted_script_exits_zero(capsys):
    code, out, _ = run(capsys, "check", "corpus/derived_dc.dalp")
    assert code == 0
    assert "status=accepted" in out


def test_tampered_di_exits_one_with_the_side_condition(capsys):
    code, out, _ = run(capsys, "check", "corpus/tampered_di.dalp")
    assert code == 1
    assert "SideConditionViolated: x′ ∈ P" in out
    assert "error_step=1" in out


def test_refuted_oracle_exits_one(capsys):
    code, out, _ = run(capsys, "check", "corpus/example5_beta_refuted.dalp")
    assert code == 1
    assert "refuted at x=0, x'=1" in out


@pytest.mark.parametrize("argv", [
    ["check", "no/such/file.dalp"],
    ["bogus"],
    ["build", "progress", "--constraint", "x'=1"],
    ["build", "differential", "--term", "x +"],
    ["falsify", "--claim", "x >"],
    ["check", "--policy", "lenient", "corpus/tampered_di.dalp"],
    ["axioms", "DW", "--expand", "--param", "vars=x"],
])
def test_usage_and_parse_errors_exit_two(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_unparseable_script_exits_two(capsys, tmp_path):
    bad = tmp_path / "bad.dalp"
    bad.write_text('conjecture = "x +"\n')
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and "parse error" in err


def test_installed_console_script():
    exe = shutil.which("dal")
    argv = [exe] if exe else [sys.executable, "-m", "dal.cli"]
    proc = subprocess.run(argv + ["check", "corpus/tampered_di.dalp"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert "SideConditionViolated: x′ ∈ P" in proc.stdout


# ----------------------------------------------------------------- build

def test_build_differential_of_the_circle(capsys):
    code, out, _ = run(capsys, "build", "differential", "--term", "x^2+y^2-1")
    assert (code, out.strip()) == (0, "2*x*x' + 2*y*y'")


def test_build_reverse(capsys):
    code, out, _ = run(capsys, "build", "reverse", "--vars", "x", "--formula", "x'=1")
    assert (code, out.strip()) == (0, "-x' = 1")


def test_build_compact_and_progress(capsys):
    _, out, _ = run(capsys, "build", "differential", "--term", "x*v", "--compact")
    assert out.strip() == "x'*v+x*v'"
    _, out, _ = run(capsys, "build", "progress", "--vars", "x", "--constraint", "x'=1")
    assert out.startswith("\\exists y \\exists y' (")


# --------------------------------------------------------------- falsify

def test_falsify_cube(capsys):
    code, out, _ = run(capsys, "falsify", "--claim", "x^3 >= 0")
    assert code == 1
    assert out.strip() == "Refuted: x=-1"


def test_falsify_true_claim(capsys):
    code, out, _ = run(capsys, "falsify", "--claim", "x^2 >= 0")
    assert code == 0
    assert out.startswith("NoCounterexampleFound:")


# --------------------------------------------------------------- witness

def test_witness_alpha_accepted(capsys):
    code, out, _ = run(capsys, "witness", "corpus/ex1_alpha.flow")
    assert (code, out.strip()) == (0, "Accepted")


def test_witness_beta_truncation_rejected(capsys):
    code, out, _ = run(capsys, "witness", "corpus/ex1_beta_trunc.flow")
    assert code == 1
    assert "y^2=x" in out


# ---------------------------------------------------------------- axioms

def test_axioms_catalogue_and_instance(capsys):
    code, out, _ = run(capsys, "axioms")
    assert code == 0 and "GS" in out and "AndDE" in out
    code, out, _ = run(capsys, "axioms", "DE", "--param", "vars=x,y", "--param", "e=x^2+y^2-1")
    assert code == 0
    assert out.startswith("DE: [{x,y & x^2+y^2-1=0}](2*x*x'+2*y*y'=0)")


def test_axioms_instance_with_failing_side_condition(capsys):
    code, out, _ = run(capsys, "axioms", "DI", "--param", "vars=x", "--param", "F=x'=1",
                       "--param", "P=x'>=1")
    assert code == 1


def test_axioms_expand_replays(capsys, tmp_path):
    code, out, _ = run(capsys, "axioms", "AR", "--expand", "--param", "vars=x",
                       "--param", "F=x'=1 & x>0", "--param", "G=x'=1", "--param", "P=x>=0")
    assert code == 0
    script = tmp_path / "ar.dalp"
    script.write_text(out)
    code, out, _ = run(capsys, "check", str(script))
    assert code == 0 and "derived_axiom_uses=0" in out


# ----------------------------------------------------------- configuration

def test_env_policy_applies_and_flag_wins(capsys, monkeypatch):
    monkeypatch.setenv("DAL_ORACLE_POLICY", "permissive")
    code, out, _ = run(capsys, "check", "corpus/example5_beta_refuted.dalp")
    assert code == 0 and "untested=7" in out
    code, _, _ = run(capsys, "check", "--policy", "audited", "corpus/example5_beta_refuted.dalp")
    assert code == 1


def test_env_seed_applies_and_flag_wins(capsys, monkeypatch):
    base = run(capsys, "falsify", "--claim", "x^2 >= 0")[1]
    monkeypatch.setenv("DAL_SEED", "5")
    env = run(capsys, "falsify", "--claim", "x^2 >= 0")[1]
    flag = run(capsys, "falsify", "--seed", "20240917", "--claim", "x^2 >= 0")[1]
    assert "seed 5" in env and flag == base
    monkeypatch.setenv("DAL_SEED", "five")
    assert run(capsys, "falsify", "--claim", "x^2 >= 0")[0] == 2


# ------------------------------------------------------------ corpus mode

def _verdicts(out):
    return sorted(line for line in out.splitlines() if line.endswith((" ok", " UNEXPECTED")))


def test_corpus_mode_judges_against_expectations(capsys):
    code, out, _ = run(capsys, "check", "corpus")
    assert code == 0
    lines = _verdicts(out)
    assert len(lines) == 9 and all(l.endswith(" ok") for l in lines)


def test_corpus_mode_is_idempotent_and_order_independent(capsys):
    import glob
    files = sorted(glob.glob("corpus/*.dalp"))
    first = _verdicts(run(capsys, "check", *files)[1])
    again = _verdicts(run(capsys, "check", *files)[1])
    shuffled = files[:]
    random.Random(3).shuffle(shuffled)
    other = _verdicts(run(capsys, "check", *shuffled)[1])
    assert first == again == other


def test_corpus_mode_flags_an_unexpected_result(capsys, tmp_path):
    text = open("corpus/tampered_di.dalp").read().replace("expect = rejected", "expect = accepted")
    (tmp_path / "t.dalp").write_text(text)
    code, out, _ = run(capsys, "check", str(tmp_path))
    assert code == 1 and "UNEXPECTED" in out
