"""Splitting the unit circle into two modes and proving the split is harmless.

The system {x,y & x'=y & x^2+y^2=1} is refined into two modes: a resting
mode at (+-1, 0) and a rotating mode.  Ghost switching turns the disjunction
into a loop over the modes, and the mode-consistency side goals are
simplified with audited PR claims.

Run from the repository root:  python demos/circle_switching.py
"""

from pathlib import Path

from dal.calculus import entry_formula, exit_formula
from dal.prover import check_script, parse_script
from dal.syntax import parse_formula, pretty

root = Path(__file__).resolve().parent.parent
script = parse_script((root / "corpus" / "circle_gs.dalp").read_text())

print("conjecture:")
print("   ", pretty(script.conjecture, spaced=True))

F = parse_formula("x'=0 & x^2=1 & y=0")
G = parse_formula("x'=y & x^2+y^2=1 & y'=-x")

# The raw exit formula of the resting mode is large; the PR step replaces
# it by the constraint itself.
raw = exit_formula(("x", "y"), F)
print(f"\nExit(F) as built has {len(pretty(raw))} characters; its stated simplification:")
print("   ", pretty(F, spaced=True))
print("Entry(G) simplifies to the rotating constraint:")
print("   ", pretty(G, spaced=True), "  (raw size", len(pretty(entry_formula(("x", "y"), G))), ")")

report = check_script(script)
print("\n" + "\n".join(report.trace))

print("\nPR claims and their audit:")
for claim in report.ledger.of_kind("PR"):
    print(f"  step {claim.step}: ... <-> {pretty(claim.rhs)}  [{claim.status}]")

print("\nR leaves:")
for claim in report.ledger.of_kind("R"):
    print(f"  step {claim.step}: {claim.status}")

print("\nverdict:", report.status, "| GS used", report.axiom_counts.get("GS", 0), "time(s)")
