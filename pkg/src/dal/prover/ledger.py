"""Bookkeeping for trusted arithmetic (R) and progress (PR) leaves."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from ..syntax.printer import pretty

__all__ = ["OracleClaim", "OracleLedger", "UNTESTED", "REFUTED", "sampled"]

UNTESTED = "untested"
REFUTED = "refuted"


def sampled(n: int) -> str:
    return f"sampled-{n}-no-counterexample"


@dataclass
class OracleClaim:
    kind: str  # "R" or "PR"
    step: int
    goal: int
    claim: object
    status: str = UNTESTED
    detail: str = ""
    rhs: Optional[object] = None  # PR: the stated simplification

    @property
    def refuted(self) -> bool:
        return self.status == REFUTED

    def describe(self) -> str:
        line = f"[{self.kind}] step {self.step} goal {self.goal}: {pretty(self.claim)}"
        line += f"\n      status: {self.status}"
        if self.detail:
            line += f" ({self.detail})"
        return line


@dataclass
class OracleLedger:
    claims: List[OracleClaim] = field(default_factory=list)

    def add(self, c: OracleClaim) -> OracleClaim:
        self.claims.append(c)
        return c

    def of_kind(self, kind: str) -> List[OracleClaim]:
        return [c for c in self.claims if c.kind == kind]

    @property
    def refuted(self) -> List[OracleClaim]:
        return [c for c in self.claims if c.refuted]

    @property
    def untested(self) -> List[OracleClaim]:
        return [c for c in self.claims if c.status == UNTESTED]

    def __len__(self):
        return len(self.claims)

    def __iter__(self):
        return iter(self.claims)
