"""Deterministic replay of proof scripts with audited oracle steps."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..calculus.axioms import SchemaMismatch, SideConditionViolated
from ..calculus.flows import CalculusError
from ..semantics.audit import PR_SAMPLES, audit_equivalence
from ..semantics.evaluate import UninterpretedSymbol, Unsupported
from ..semantics.falsify import SampleDomain, falsify
from ..syntax.parser import ParseError
from ..syntax.printer import pretty
from ..syntax.subst import SubstitutionClash
from .ledger import REFUTED, UNTESTED, OracleLedger, sampled
from .script import ProofScript, format_step
from .sequent import PositionError
from .state import Goal, ProofError, ProofState, StrictPolicyViolation

__all__ = ["Config", "Report", "check_script", "make_oracle", "POLICIES"]

POLICIES = ("strict", "audited", "permissive")


@dataclass(frozen=True)
class Config:
    policy: str = "audited"
    dom: SampleDomain = field(default_factory=SampleDomain)
    pr_samples: int = PR_SAMPLES

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ValueError(f"oracle policy must be one of {', '.join(POLICIES)}")


def make_oracle(config: Config):
    def oracle(kind, claim, rhs):
        if config.policy == "strict":
            raise StrictPolicyViolation(f"{kind} oracle step refused by the strict policy")
        if config.policy == "permissive":
            return UNTESTED, "falsifier skipped by the permissive policy"
        try:
            if kind == "R":
                verdict = falsify(claim, config.dom)
            else:
                dom = dataclasses.replace(config.dom, n=config.pr_samples)
                verdict = audit_equivalence(claim.left, rhs, dom)
        except (Unsupported, UninterpretedSymbol) as exc:
            return UNTESTED, f"not searchable: {exc}"
        if verdict:
            return sampled(verdict.samples), ""
        return REFUTED, str(verdict)
    return oracle


# errors that reject a step (anything else is a bug and propagates)
_STEP_ERRORS = (ProofError, PositionError, SideConditionViolated, SchemaMismatch,
                CalculusError, SubstitutionClash, ParseError)


@dataclass
class Report:
    name: str
    conjecture: object
    steps: int
    executed: int
    open_goals: List[Goal]
    ledger: OracleLedger
    axiom_counts: Dict[str, int]
    derived_uses: int
    trace: List[str] = field(default_factory=list)
    error: Optional[str] = None
    error_step: Optional[int] = None
    error_line: Optional[int] = None
    state: Optional[ProofState] = None

    @property
    def closed(self) -> bool:
        return self.error is None and not self.open_goals

    @property
    def accepted(self) -> bool:
        return self.closed and not self.ledger.refuted

    @property
    def status(self) -> str:
        return "accepted" if self.accepted else "rejected"

    def summary(self) -> Dict[str, str]:
        out = {
            "name": self.name or "-",
            "status": self.status,
            "closed": str(self.closed).lower(),
            "steps": f"{self.executed}/{self.steps}",
            "open_goals": str(len(self.open_goals)),
            "r_claims": str(len(self.ledger.of_kind("R"))),
            "pr_claims": str(len(self.ledger.of_kind("PR"))),
            "refuted": str(len(self.ledger.refuted)),
            "untested": str(len(self.ledger.untested)),
            "derived_axiom_uses": str(self.derived_uses),
            "axioms": ",".join(f"{k}:{v}" for k, v in sorted(self.axiom_counts.items())) or "-",
        }
        if self.error is not None:
            out["error_step"] = str(self.error_step)
        return out

    def text(self) -> str:
        lines = [f"script: {self.name or '-'}", f"conjecture: {pretty(self.conjecture)}", ""]
        lines += self.trace
        if self.error is not None:
            where = f"step {self.error_step}"
            if self.error_line is not None:
                where += f" (line {self.error_line})"
            lines.append(f"error at {where}: {self.error}")
        if self.open_goals and self.error is None:
            lines.append("open goals:")
            lines += [f"  goal {g.index}: {g.sequent}" for g in self.open_goals]
        if len(self.ledger):
            lines.append("oracle ledger:")
            lines += ["  " + c.describe() for c in self.ledger]
        lines.append("")
        lines.append("summary:")
        lines += [f"{k}={v}" for k, v in self.summary().items()]
        return "\n".join(lines)


def check_script(script: ProofScript, config: Optional[Config] = None,
                 verbose: bool = False) -> Report:
    """Replay ``script`` from the single goal ``|- conjecture``."""
    config = config or Config()
    st = ProofState(script.conjecture, make_oracle(config))
    trace: List[str] = []
    error = err_step = err_line = None
    executed = 0
    for i, step in enumerate(script.steps):
        try:
            created = st.apply(step.rule, step.goal, step.pos, step.args)
        except _STEP_ERRORS as exc:
            error = f"{type(exc).__name__}: {exc}"
            err_step, err_line = i, step.line
            break
        executed += 1
        target = st.goals[created[0]].parent if created else _closed_goal(st, i)
        outcome = "closed" if not created else "-> " + ", ".join(str(c) for c in created)
        line = f"step {i} {step.rule} on goal {target}: {outcome}"
        if step.note:
            line += f"    [{step.note}]"
        trace.append(line)
        if verbose:
            trace += [f"    goal {c}: {st.goals[c].sequent}" for c in created]
            if not created:
                trace.append("    " + format_step(step))
    open_goals = st.open_goals() if error is None else []
    return Report(script.name, script.conjecture, len(script.steps), executed, open_goals,
                  st.ledger, dict(st.axiom_counts), st.derived_uses(), trace, error, err_step,
                  err_line, st)


def _closed_goal(st: ProofState, step: int) -> Optional[int]:
    for g in st.goals:
        if g.closed_by == step:
            return g.index
    return None
