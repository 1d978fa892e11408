"""Sequents and positions inside them."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Tuple

from ..syntax.ast import (
    And, Box, Cmp, Diamond, Differential, Equiv, Exists, Forall, Func, Imply,
    Not, Or, Plus, Pred, Times,
)
from ..syntax.printer import pretty

__all__ = ["Sequent", "Position", "PositionError", "subnode", "replace_at", "path_kinds"]


@dataclass(frozen=True)
class Sequent:
    antecedent: Tuple[object, ...] = ()
    succedent: Tuple[object, ...] = ()

    def side(self, s: str) -> Tuple[object, ...]:
        return self.antecedent if s == "L" else self.succedent

    def with_side(self, s: str, formulas) -> "Sequent":
        formulas = tuple(formulas)
        if s == "L":
            return Sequent(formulas, self.succedent)
        return Sequent(self.antecedent, formulas)

    def __str__(self) -> str:
        left = ", ".join(pretty(f) for f in self.antecedent)
        right = ", ".join(pretty(f) for f in self.succedent)
        return f"{left} |- {right}".strip()


class PositionError(ValueError):
    pass


_POS = re.compile(r"^(?:([LR])\.)?(\d+)((?:\.\d+)*)$")


@dataclass(frozen=True)
class Position:
    side: str
    index: int
    path: Tuple[int, ...] = ()

    @classmethod
    def parse(cls, text) -> "Position":
        if text is None or text == "":
            return cls("R", 0, ())
        if isinstance(text, Position):
            return text
        m = _POS.match(str(text).strip())
        if not m:
            raise PositionError(f"malformed position {text!r}")
        side = m.group(1) or "R"
        path = tuple(int(p) for p in m.group(3).split(".")[1:]) if m.group(3) else ()
        return cls(side, int(m.group(2)), path)

    def __str__(self) -> str:
        return ".".join([self.side, str(self.index)] + [str(p) for p in self.path])


def _children(n):
    t = type(n)
    if t in (And, Or, Imply, Equiv, Plus, Times):
        return [n.left, n.right]
    if t is Cmp:
        return [n.left, n.right]
    if t is Not:
        return [n.inner]
    if t is Forall or t is Exists:
        return [n.body]
    if t is Box or t is Diamond:
        return [n.body]
    if t is Func or t is Pred:
        return list(n.args)
    if t is Differential:
        return [n.inner]
    return []


def _rebuild(n, i, child):
    t = type(n)
    if t in (And, Or, Imply, Equiv, Plus, Times):
        return t(child, n.right) if i == 0 else t(n.left, child)
    if t is Cmp:
        return Cmp(n.op, child, n.right) if i == 0 else Cmp(n.op, n.left, child)
    if t is Not:
        return Not(child)
    if t is Forall or t is Exists:
        return t(n.var, child)
    if t is Box or t is Diamond:
        return t(n.prog, child)
    if t is Func or t is Pred:
        args = list(n.args)
        args[i] = child
        return t(n.symbol, tuple(args))
    if t is Differential:
        return Differential(child)
    raise PositionError(f"cannot descend into {t.__name__}")


def subnode(f, path):
    for depth, i in enumerate(path):
        kids = _children(f)
        if i >= len(kids):
            raise PositionError(f"path component {i} at depth {depth} is out of range")
        f = kids[i]
    return f


def replace_at(f, path, new):
    if not path:
        return new
    kids = _children(f)
    i = path[0]
    if i >= len(kids):
        raise PositionError(f"path component {i} is out of range")
    return _rebuild(f, i, replace_at(kids[i], path[1:], new))


def path_kinds(f, path):
    """``(node, child_index)`` for every node crossed by ``path``."""
    out = []
    for i in path:
        out.append((f, i))
        f = _children(f)[i]
    return out
