"""Line-oriented proof scripts.

::

    name = pendulum
    description = "index reduction"
    expect = accepted
    let D = "x'=v & v'=lambda*x"
    conjecture = "[{x,v,lambda & $D}]x^2>=0"
    rule=impR pos=R.0 note="->R"
    rule=axiom args={id=DW vars="x,v" F="$D"} goal=3

``#`` starts a comment outside quotes.  ``$NAME`` (or ``${NAME}``) inside
quoted values expands to an earlier ``let``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..syntax.parser import ParseError, parse_formula

__all__ = ["ProofStep", "ProofScript", "ScriptError", "parse_script", "format_step"]


class ScriptError(ValueError):
    def __init__(self, msg, line: Optional[int] = None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


@dataclass
class ProofStep:
    rule: str
    goal: Optional[int] = None
    pos: Optional[str] = None
    args: Dict[str, str] = field(default_factory=dict)
    note: str = ""
    line: Optional[int] = None


@dataclass
class ProofScript:
    conjecture: object
    steps: List[ProofStep]
    name: str = ""
    description: str = ""
    conjecture_text: str = ""
    header: List[str] = field(default_factory=list)
    expect: str = "accepted"


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_VAR = re.compile(r"\$(?:\{([A-Za-z_][A-Za-z0-9_]*)\}|([A-Za-z_][A-Za-z0-9_]*))")


def _strip_comment(line: str) -> str:
    quoted = False
    i = 0
    while i < len(line):
        ch = line[i]
        if ch == "\\" and quoted:
            i += 2
            continue
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
        i += 1
    return line


def _read_quoted(text: str, i: int, lineno) -> Tuple[str, int]:
    assert text[i] == '"'
    out = []
    i += 1
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text) and text[i + 1] in '"\\':
            out.append(text[i + 1])
            i += 2
            continue
        if ch == '"':
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    raise ScriptError("unterminated string", lineno)


def _read_value(text: str, i: int, lineno) -> Tuple[object, int]:
    if i < len(text) and text[i] == '"':
        return _read_quoted(text, i, lineno)
    if i < len(text) and text[i] == "{":
        return _read_pairs(text, i + 1, lineno, closing="}")
    j = i
    while j < len(text) and not text[j].isspace() and text[j] != "}":
        j += 1
    return text[i:j], j


def _read_pairs(text: str, i: int, lineno, closing=None):
    pairs: Dict[str, object] = {}
    n = len(text)
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            if closing:
                raise ScriptError(f"missing '{closing}'", lineno)
            return pairs, i
        if closing and text[i] == closing:
            return pairs, i + 1
        m = _IDENT.match(text, i)
        if not m or m.end() >= n or text[m.end()] != "=":
            raise ScriptError(f"expected key=value at column {i + 1}", lineno)
        key = m.group(0)
        if key in pairs:
            raise ScriptError(f"duplicate key {key}", lineno)
        value, i = _read_value(text, m.end() + 1, lineno)
        pairs[key] = value


def _expand(value: str, lets: Dict[str, str], lineno) -> str:
    def sub(m):
        name = m.group(1) or m.group(2)
        if name not in lets:
            raise ScriptError(f"undefined ${name}", lineno)
        return lets[name]
    return _VAR.sub(sub, value)


def parse_script(text: str) -> ProofScript:
    lets: Dict[str, str] = {}
    meta: Dict[str, str] = {}
    steps: List[ProofStep] = []
    header: List[str] = []
    conj_line = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if stripped.startswith("#") and not steps:
            header.append(stripped.lstrip("#").strip())
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = re.match(r"let\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*", line)
        if m:
            rest = line[m.end():]
            if not rest.startswith('"'):
                raise ScriptError('expected: let NAME = "..."', lineno)
            value, end = _read_quoted(rest, 0, lineno)
            if rest[end:].strip():
                raise ScriptError("trailing text after let", lineno)
            lets[m.group(1)] = _expand(value, lets, lineno)
            continue
        m = re.match(r"(name|description|conjecture|expect)\s*=\s*", line)
        if m:
            rest = line[m.end():]
            if rest.startswith('"'):
                value, end = _read_quoted(rest, 0, lineno)
                if rest[end:].strip():
                    raise ScriptError("trailing text", lineno)
            else:
                value = rest.strip()
            meta[m.group(1)] = _expand(value, lets, lineno)
            if m.group(1) == "conjecture":
                conj_line = lineno
            continue
        pairs, _ = _read_pairs(line, 0, lineno)
        if "rule" not in pairs:
            raise ScriptError("step line without rule=", lineno)
        unknown = set(pairs) - {"rule", "goal", "pos", "args", "note"}
        if unknown:
            raise ScriptError("unknown step field(s) " + ", ".join(sorted(unknown)), lineno)
        args = pairs.get("args", {})
        if not isinstance(args, dict):
            raise ScriptError("args must be a {...} block", lineno)
        goal = pairs.get("goal")
        if goal is not None:
            try:
                goal = int(goal)
            except ValueError:
                raise ScriptError(f"goal must be an integer, got {goal!r}", lineno) from None
        steps.append(ProofStep(
            rule=str(pairs["rule"]), goal=goal, pos=pairs.get("pos"),
            args={k: _expand(str(v), lets, lineno) for k, v in args.items()},
            note=str(pairs.get("note", "")), line=lineno))
    expect = meta.get("expect", "accepted")
    if expect not in ("accepted", "rejected"):
        raise ScriptError(f"expect must be accepted or rejected, got {expect!r}")
    if "conjecture" not in meta:
        raise ScriptError("script has no conjecture")
    try:
        conjecture = parse_formula(meta["conjecture"])
    except ParseError as exc:
        raise ScriptError(f"conjecture: {exc}", conj_line) from None
    return ProofScript(conjecture, steps, meta.get("name", ""), meta.get("description", ""),
                       meta["conjecture"], header, expect)


def _quote(v: str) -> str:
    return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_step(step: ProofStep) -> str:
    parts = [f"rule={step.rule}"]
    if step.goal is not None:
        parts.append(f"goal={step.goal}")
    if step.pos:
        parts.append(f"pos={step.pos}")
    if step.args:
        parts.append("args={" + " ".join(f"{k}={_quote(v)}" for k, v in step.args.items()) + "}")
    if step.note:
        parts.append(f"note={_quote(step.note)}")
    return " ".join(parts)
