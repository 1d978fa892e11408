"""Checking polynomial flows against a system, exactly.

x = 1 - t descends along {x & x'=-1 & x>=0} and stops at the boundary at
t=1.  The square root flow y = sqrt(x) has no polynomial form; its cubic
Taylor polynomial looks close, yet the checker finds y^2 != x.

Run from the repository root:  python demos/flow_witnesses.py
"""

from fractions import Fraction
from pathlib import Path

from dal.semantics.flow import FlowWitness, check_flow_witness, parse_witness

root = Path(__file__).resolve().parent.parent

for name in ("ex1_alpha.flow", "ex1_beta_trunc.flow"):
    wf = parse_witness((root / "corpus" / name).read_text())
    print(f"{name}: {check_flow_witness(wf.witness, wf.dap, wf.initial)}")
    # shrinking the duration never turns an accepted flow into a rejected one
    for T in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1)):
        w = FlowWitness(wf.witness.vars, wf.witness.polys, T)
        print(f"   T={T}: {check_flow_witness(w, wf.dap, wf.initial)}")
