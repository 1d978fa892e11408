"""Index reduction for the Euclidean pendulum.

The pendulum keeps x^2+y^2=1 by a multiplier lambda.  Differentiating the
constraint twice with the AndDE axiom exposes the value lambda must take,
after which AR swaps lambda for that expression and DR drops lambda from
the system.

Run from the repository root:  python demos/pendulum_index_reduction.py
"""

from pathlib import Path

from dal.calculus import differential
from dal.prover import check_script, parse_script
from dal.syntax import parse_term, pretty

root = Path(__file__).resolve().parent.parent

# the two differentials AndDE will add to the constraint
for e in ("x^2+y^2", "x*v+y*w"):
    print(f"({e})' = {pretty(differential(parse_term(e)), spaced=True)}")

script = parse_script((root / "corpus" / "pendulum.dalp").read_text())
report = check_script(script)

print()
print("\n".join(report.trace))

# which goals carry the multiplier's value as a constraint
hidden = "lambda=g*y-(v^2+w^2)"
carriers = [g.index for g in report.state.goals if hidden in str(g.sequent)]
print(f"\n{hidden} appears in goals {', '.join(map(str, carriers))}")
print("the proven system, free of lambda:")
print("   ", pretty(script.conjecture.left.prog, spaced=True))

print("\nverdict:", report.status)
print("R leaves:", ", ".join(c.status for c in report.ledger.of_kind("R")))
