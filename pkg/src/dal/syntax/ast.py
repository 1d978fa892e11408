"""Immutable syntax trees for terms, formulas and programs.

Variables are identified by plain strings; a differential variable is the
base name followed by a single apostrophe (``"x'"``).  Inside terms the two
are kept apart as :class:`Var` and :class:`DiffVar` nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

__all__ = [
    "Term", "Var", "DiffVar", "Const", "Func", "Plus", "Times", "Differential",
    "Formula", "Cmp", "Pred", "And", "Or", "Not", "Imply", "Equiv",
    "Forall", "Exists", "Box", "Diamond",
    "Program", "Assign", "Test", "DAP", "Seq", "Choice", "Star",
    "CMP_OPS", "prime", "unprime", "is_primed", "var_term",
    "conj", "disj", "neg", "minus",
]

CMP_OPS = ("<=", "<", "=", "!=", ">=", ">")


def is_primed(name: str) -> bool:
    return name.endswith("'")


def prime(name: str) -> str:
    if is_primed(name):
        raise ValueError(f"variable {name!r} is already a differential variable")
    return name + "'"


def unprime(name: str) -> str:
    return name[:-1] if is_primed(name) else name


# --------------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if is_primed(self.name):
            raise ValueError("primed variables must be DiffVar nodes")


@dataclass(frozen=True)
class DiffVar:
    base: str

    def __post_init__(self):
        if is_primed(self.base):
            raise ValueError("nested differential variables are not terms")

    @property
    def name(self) -> str:
        return self.base + "'"


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self):
        # Fraction is always in lowest terms with positive denominator
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Func:
    symbol: str
    args: Tuple["Term", ...]


@dataclass(frozen=True)
class Plus:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Times:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Differential:
    inner: "Term"


Term = Union[Var, DiffVar, Const, Func, Plus, Times, Differential]


def var_term(name: str) -> Term:
    """The term node for a variable name, primed or not."""
    return DiffVar(unprime(name)) if is_primed(name) else Var(name)


def minus(t: Term) -> Term:
    """``-t`` in the shape the parser produces."""
    if isinstance(t, Const):
        return Const(-t.value)
    if isinstance(t, Times) and isinstance(t.left, Const) and not isinstance(t.right, Const):
        return Times(Const(-t.left.value), t.right)
    return Times(Const(-1), t)


# ------------------------------------------------------------------ formulas

@dataclass(frozen=True)
class Cmp:
    op: str
    left: Term
    right: Term

    def __post_init__(self):
        if self.op not in CMP_OPS:
            raise ValueError(f"unknown comparison {self.op!r}")


@dataclass(frozen=True)
class Pred:
    symbol: str
    args: Tuple[Term, ...] = ()


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    inner: "Formula"


@dataclass(frozen=True)
class Imply:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Equiv:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Box:
    prog: "Program"
    body: "Formula"


@dataclass(frozen=True)
class Diamond:
    prog: "Program"
    body: "Formula"


Formula = Union[Cmp, Pred, And, Or, Not, Imply, Equiv, Forall, Exists, Box, Diamond]


def conj(parts) -> Formula:
    """Left-leaning conjunction of a nonempty sequence."""
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts) -> Formula:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def neg(f: Formula) -> Formula:
    return Not(f)


# ------------------------------------------------------------------ programs

@dataclass(frozen=True)
class Assign:
    var: str
    term: Term


@dataclass(frozen=True)
class Test:
    cond: Formula


@dataclass(frozen=True)
class DAP:
    vars: Tuple[str, ...]
    constraint: Formula

    def __post_init__(self):
        if not self.vars:
            raise ValueError("a differential-algebraic program needs at least one variable")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate variable in DAP tuple {self.vars}")
        for v in self.vars:
            if is_primed(v):
                raise ValueError(f"DAP tuple lists base variables only, got {v!r}")


@dataclass(frozen=True)
class Seq:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class Choice:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class Star:
    body: "Program"


Program = Union[Assign, Test, DAP, Seq, Choice, Star]
