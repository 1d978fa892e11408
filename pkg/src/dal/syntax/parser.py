"""Recursive-descent parser for the ASCII concrete syntax.

Precedence, loosest first::

    formulas   <->   ->(right)   |   &   ! \\forall \\exists [a] <a>   atoms
    terms      + -   *   ^k   unary minus / primes / calls / parentheses
    programs   ++    ;    postfix *

``&`` and ``|`` associate to the left, so ``F & e=0 & e'=0`` is
``And(And(F, e=0), e'=0)`` which is the shape the axiom schemata are
written in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .ast import (
    And, Assign, Box, Choice, Cmp, Const, DAP, DiffVar, Diamond, Differential,
    Equiv, Exists, Forall, Func, Imply, Not, Or, Plus, Pred, Seq, Star, Test,
    Times, Var, conj, disj,
)

__all__ = ["ParseError", "Signature", "parse", "parse_term", "parse_formula", "parse_program"]


class ParseError(ValueError):
    """Lexical or syntactic error, or an arity clash, at a source offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.col = line, col
        super().__init__(f"{message} at line {line}, column {col}")


@dataclass
class Signature:
    """Arity table for function and predicate symbols."""

    funcs: Dict[str, int] = field(default_factory=dict)
    preds: Dict[str, int] = field(default_factory=dict)

    def declare(self, kind: str, name: str, arity: int) -> None:
        table = self.funcs if kind == "func" else self.preds
        if name in table and table[name] != arity:
            raise ValueError(f"{kind} {name} used with arity {arity}, declared {table[name]}")
        table[name] = arity

    def dumps(self) -> str:
        lines = [f"func {n} {a}" for n, a in sorted(self.funcs.items())]
        lines += [f"pred {n} {a}" for n, a in sorted(self.preds.items())]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def loads(cls, text: str) -> "Signature":
        sig = cls()
        for n, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3 or parts[0] not in ("func", "pred") or not parts[2].isdigit():
                raise ValueError(f"bad signature line {n}: {line!r}")
            sig.declare(parts[0], parts[1], int(parts[2]))
        return sig


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<kw>\\forall|\\exists)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><->|->|<=|>=|!=|:=|\+\+|[-+*^/(){}\[\]<>=!&|;,?'])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int
    glued: bool  # no whitespace before this token


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    i = 0
    prev_end = -1
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", i, text)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), i, i == prev_end))
            prev_end = m.end()
        i = m.end()
    toks.append(_Tok("eof", "", len(text), False))
    return toks


_CMP = {"<=", "<", "=", "!=", ">=", ">"}


class _Parser:
    def __init__(self, text: str, signature: Signature):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = signature
        self.pending = []  # function uses awaiting declaration: (name, arity, token)

    # -- helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in texts

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"{msg}, found {found!r}", tok.pos, self.text)

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.error("expected identifier")
        name = self.tok.text
        self.i += 1
        return name

    def variable(self) -> str:
        """Identifier with an optional glued prime."""
        name = self.ident()
        if self.at("'") and self.tok.glued:
            self.i += 1
            if self.at("'") and self.tok.glued:
                self.error("higher differential variables are not supported")
            return name + "'"
        return name

    def done(self):
        if self.tok.kind != "eof":
            self.error("unexpected trailing input")

    # -- terms
    def term(self):
        summands = [self.signed_product(first=True)]
        while self.at("+", "-"):
            op = self.tok.text
            self.i += 1
            if op == "+":
                summands.append(self.signed_product(first=False))
            else:
                summands.append(self.negated_product())
        out = summands[-1]
        for s in reversed(summands[:-1]):
            out = Plus(s, out)
        return out

    def signed_product(self, first: bool):
        if self.at("-"):
            self.i += 1
            return self.negated_product()
        return self.product()

    def negated_product(self):
        # a minus sign in front of a numeric literal negates the literal itself
        if self.tok.kind == "num":
            lit = self.number()
            if self.at("^"):
                return minus_wrap(self.fold_product(self.more_factors(self.postfix_power(lit))))
            return self.fold_product(self.more_factors(Const(-lit.value)))
        return minus_wrap(self.product())

    def product(self):
        first = self.power()
        return self.fold_product(self.more_factors(first))

    def more_factors(self, first):
        factors = [first]
        while self.at("*"):
            self.i += 1
            factors.append(self.power())
        return factors

    @staticmethod
    def fold_product(factors):
        out = factors[-1]
        for f in reversed(factors[:-1]):
            out = Times(f, out)
        return out

    def power(self):
        return self.postfix_power(self.atom_term())

    def postfix_power(self, base):
        while self.at("^"):
            self.i += 1
            if self.tok.kind != "num" or "/" in self.tok.text:
                self.error("exponent must be a nonnegative integer literal")
            k = int(self.tok.text)
            self.i += 1
            if k == 0:
                base = Const(1)
            else:
                out = base
                for _ in range(k - 1):
                    out = Times(base, out)
                base = out
        return base

    def number(self) -> Const:
        t = self.tok
        self.i += 1
        if "/" in t.text:
            p, q = t.text.split("/")
            if int(q) == 0:
                raise ParseError("division by zero in rational literal", t.pos, self.text)
            return Const(Fraction(int(p), int(q)))
        return Const(Fraction(int(t.text)))

    def atom_term(self):
        t = self.tok
        if t.kind == "num":
            return self.number()
        if t.kind == "ident":
            if self.peek().kind == "op" and self.peek().text == "(" and self.peek().glued:
                name = self.ident()
                args = self.call_args()
                self.pending.append((name, len(args), t))
                return Func(name, tuple(args))
            name = self.variable()
            return DiffVar(name[:-1]) if name.endswith("'") else Var(name)
        if self.at("("):
            self.i += 1
            inner = self.term()
            self.expect(")")
            if self.at("'") and self.tok.glued:
                self.i += 1
                return Differential(inner)
            return inner
        self.error("expected a term")

    def call_args(self):
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.term())
            while self.at(","):
                self.i += 1
                args.append(self.term())
        self.expect(")")
        return args

    def declare(self, kind, name, arity, tok):
        try:
            self.sig.declare(kind, name, arity)
        except ValueError as exc:
            raise ParseError(f"arity mismatch: {exc}", tok.pos, self.text) from None

    # -- formulas
    def formula(self):
        left = self.implication()
        while self.at("<->"):
            self.i += 1
            left = Equiv(left, self.implication())
        return left

    def implication(self):
        left = self.disjunction()
        if self.at("->"):
            self.i += 1
            return Imply(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.at("|"):
            self.i += 1
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.at("&"):
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self):
        t = self.tok
        if self.at("!"):
            self.i += 1
            return Not(self.unary())
        if t.kind == "kw":
            self.i += 1
            v = self.variable()
            body = self.unary()
            return Forall(v, body) if t.text == "\\forall" else Exists(v, body)
        if self.at("["):
            self.i += 1
            prog = self.program()
            self.expect("]")
            return Box(prog, self.unary())
        if self.at("<"):
            self.i += 1
            prog = self.program()
            self.expect(">")
            return Diamond(prog, self.unary())
        return self.atom_formula()

    def atom_formula(self):
        t = self.tok
        if t.kind == "ident" and t.text in ("true", "false") and not (
                self.peek().kind == "op" and self.peek().text in _CMP | {"(", "'", "*", "+", "-", "^"}):
            self.i += 1
            return Cmp("=", Const(0), Const(0 if t.text == "true" else 1))
        if self.at("("):
            # either a parenthesized formula, a term comparison, or a tuple comparison
            save = self.i
            try:
                return self.comparison()
            except ParseError as first:
                self.i = save
                try:
                    self.i += 1
                    inner = self.formula()
                    self.expect(")")
                    return inner
                except ParseError as second:
                    raise max(first, second, key=lambda e: e.pos) from None
        return self.comparison()

    def tuple_or_term(self):
        if self.at("("):
            save = self.i
            self.i += 1
            first = self.term()
            if self.at(","):
                items = [first]
                while self.at(","):
                    self.i += 1
                    items.append(self.term())
                self.expect(")")
                return items
            self.i = save
        return self.term()

    def comparison(self):
        t = self.tok
        if t.kind == "ident" and not (self.peek().kind == "op" and self.peek().text in
                                      _CMP | {"(", "'", "*", "+", "-", "^"}):
            self.i += 1
            self.declare("pred", t.text, 0, t)
            return Pred(t.text, ())
        mark = len(self.pending)
        left = self.tuple_or_term()
        if not (self.tok.kind == "op" and self.tok.text in _CMP):
            if isinstance(left, Func):
                # P(e1,...,ek) used as an atom is a predicate; its own entry is the last one
                self.pending.pop()
                self.flush(mark)
                self.declare("pred", left.symbol, len(left.args), t)
                return Pred(left.symbol, left.args)
            self.error("expected a comparison operator")
        op = self.tok.text
        self.i += 1
        right = self.tuple_or_term()
        self.flush(mark)
        if isinstance(left, list) or isinstance(right, list):
            if not (isinstance(left, list) and isinstance(right, list)) or len(left) != len(right):
                raise ParseError("tuple comparison needs tuples of equal length", t.pos, self.text)
            if op not in ("=", "!="):
                raise ParseError("tuples compare only with = or !=", t.pos, self.text)
            atoms = [Cmp(op, a, b) for a, b in zip(left, right)]
            return conj(atoms) if op == "=" else disj(atoms)
        return Cmp(op, left, right)

    def flush(self, mark: int):
        for name, arity, tok in self.pending[mark:]:
            self.declare("func", name, arity, tok)
        del self.pending[mark:]

    # -- programs
    def program(self):
        left = self.sequence()
        while self.at("++"):
            self.i += 1
            left = Choice(left, self.sequence())
        return left

    def sequence(self):
        left = self.starred()
        if self.at(";"):
            self.i += 1
            right = self.sequence()
            return Seq(left, right)
        return left

    def starred(self):
        p = self.atom_program()
        while self.at("*"):
            self.i += 1
            p = Star(p)
        return p

    def atom_program(self):
        t = self.tok
        if self.at("?"):
            self.i += 1
            if self.at("("):
                # ?(F) reads F as a whole formula when a program token follows,
                # so <?(P)>Q is a test of P, not the comparison (P)>Q
                save = self.i
                try:
                    self.i += 1
                    inner = self.formula()
                    self.expect(")")
                    if self._ends_test():
                        return Test(inner)
                except ParseError:
                    pass
                self.i = save
            return Test(self.unary())
        if self.at("{"):
            if self._looks_like_dap():
                self.i += 1
                names = [self.ident()]
                while self.at(","):
                    self.i += 1
                    names.append(self.ident())
                self.expect("&")
                start = self.tok
                constraint = self.formula()
                self.expect("}")
                if _has_modality(constraint):
                    raise ParseError("DAP constraint must be a first-order formula without modalities",
                                     start.pos, self.text)
                try:
                    return DAP(tuple(names), constraint)
                except ValueError as exc:
                    raise ParseError(str(exc), t.pos, self.text) from None
            self.i += 1
            inner = self.program()
            self.expect("}")
            return inner
        if t.kind == "ident":
            v = self.variable()
            self.expect(":=")
            return Assign(v, self.term())
        self.error("expected a program")

    def _ends_test(self) -> bool:
        j = self.i
        while self.toks[j].kind == "op" and self.toks[j].text == "*":
            j += 1
        t = self.toks[j]
        return t.kind == "eof" or (t.kind == "op" and t.text in ("]", ">", ";", "++", "}", ")"))

    def _looks_like_dap(self) -> bool:
        j = self.i + 1
        while True:
            if self.toks[j].kind != "ident":
                return False
            j += 1
            nxt = self.toks[j]
            if nxt.kind == "op" and nxt.text == "&":
                return True
            if not (nxt.kind == "op" and nxt.text == ","):
                return False
            j += 1


def minus_wrap(t):
    return Times(Const(-1), t)


def _has_modality(f) -> bool:
    if isinstance(f, (Box, Diamond)):
        return True
    if isinstance(f, (And, Or, Imply, Equiv)):
        return _has_modality(f.left) or _has_modality(f.right)
    if isinstance(f, Not):
        return _has_modality(f.inner)
    if isinstance(f, (Forall, Exists)):
        return _has_modality(f.body)
    return False


def parse(text: str, kind: str = "formula", signature: Optional[Signature] = None):
    """Parse ``text`` as a ``term``, ``formula`` or ``program``."""
    sig = signature if signature is not None else Signature()
    p = _Parser(text, sig)
    if kind == "term":
        node = p.term()
        p.flush(0)
    elif kind == "formula":
        node = p.formula()
    elif kind == "program":
        node = p.program()
    else:
        raise ValueError(f"unknown syntactic kind {kind!r}")
    p.done()
    return node


def parse_term(text: str, signature: Optional[Signature] = None):
    return parse(text, "term", signature)


def parse_formula(text: str, signature: Optional[Signature] = None):
    return parse(text, "formula", signature)


def parse_program(text: str, signature: Optional[Signature] = None):
    return parse(text, "program", signature)
