"""Two ways to split x'=1 at x=0, one of them wrong.

With the modes x<0 and x>=0, a flow leaving the first mode at x=0 lands in
the second, but the two constraints disagree at that point.  The mode
consistency residue is refuted by the falsifier, at exactly the boundary
state.  Sharing the boundary (x<=0 and x>=0) repairs the split.

Run from the repository root:  python demos/inconsistent_split.py
"""

from pathlib import Path

from dal.prover import check_script, parse_script
from dal.semantics import falsify
from dal.syntax import pretty

root = Path(__file__).resolve().parent.parent

for name in ("example5_beta_refuted", "example5_gamma"):
    script = parse_script((root / "corpus" / f"{name}.dalp").read_text())
    report = check_script(script)
    print(f"== {name}: {report.status} (script expects {script.expect})")
    for claim in report.ledger.of_kind("R")[1:]:
        verdict = falsify(claim.claim)
        print("  residue:", pretty(claim.claim))
        print("   ", verdict)
    print()
