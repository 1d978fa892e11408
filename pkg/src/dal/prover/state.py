"""Proof state: an append-only goal list and the rules that extend it."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..calculus.axioms import (
    DERIVED, AxiomId, SchemaMismatch, SideConditionViolated, axiom_instance,
)
from ..calculus.flows import (
    entry_formula, exit_formula, mode_consistency, progress_formula,
)
from ..syntax.ast import (
    And, Box, Cmp, Const, DAP, Diamond, Equiv, Exists, Forall, Func, Imply, Not,
    Or, Pred, conj, disj, is_primed, var_term,
)
from ..syntax.normal import kernel_equal
from ..syntax.parser import ParseError, Signature, parse_formula, parse_program, parse_term
from ..syntax.printer import pretty
from ..syntax.subst import SubstitutionClash, substitute
from ..syntax.vars import bound_vars, free_vars
from .ledger import OracleClaim, OracleLedger
from .sequent import Position, PositionError, Sequent, path_kinds, replace_at, subnode

__all__ = [
    "ProofError", "PatternMismatch", "EigenvariableNotFresh", "ShapeMismatch",
    "PolarityViolation", "MalformedClaim", "StrictPolicyViolation", "Goal", "ProofState",
    "new_proof", "RULES",
]


class ProofError(ValueError):
    pass


class PatternMismatch(ProofError):
    pass


class EigenvariableNotFresh(ProofError):
    pass


class ShapeMismatch(ProofError):
    pass


class PolarityViolation(ProofError):
    pass


class MalformedClaim(ProofError):
    pass


class StrictPolicyViolation(ProofError):
    pass


@dataclass
class Goal:
    index: int
    sequent: Sequent
    parent: Optional[int] = None
    step: Optional[int] = None  # step that created it
    closed_by: Optional[int] = None  # step that closed it
    expanded_by: Optional[int] = None  # step that replaced it

    @property
    def open(self) -> bool:
        return self.closed_by is None and self.expanded_by is None


def _mismatch(expected, actual, what="formula"):
    return ShapeMismatch(f"{what} does not match\n  expected: {pretty(expected)}\n"
                         f"  actual:   {pretty(actual)}")


def _split_top(text: str) -> List[str]:
    """Split at commas that are not nested in parentheses or brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        parts.append(tail)
    return parts


_FORMULA_KEYS = {"F", "G", "P", "p", "R", "C", "rhs", "claim"}
_PROGRAM_KEYS = {"alpha", "beta"}
_NAME_LIST_KEYS = {"vars", "ys"}


class ProofState:
    """Single-owner mutable state of one replay."""

    def __init__(self, conjecture, oracle=None, signature: Optional[Signature] = None):
        self.conjecture = conjecture
        self.goals: List[Goal] = [Goal(0, Sequent((), (conjecture,)))]
        self.ledger = OracleLedger()
        self.axiom_counts: Counter = Counter()
        self.oracle = oracle  # callable(kind, claim, rhs) -> (status, detail)
        self.signature = signature
        self.step_index = 0

    # -- goal access
    def open_goals(self) -> List[Goal]:
        return [g for g in self.goals if g.open]

    @property
    def closed(self) -> bool:
        return not self.open_goals()

    def goal(self, index: Optional[int]) -> Goal:
        if index is None:
            live = self.open_goals()
            if not live:
                raise ProofError("no open goal left")
            return live[-1]
        if not 0 <= index < len(self.goals):
            raise ProofError(f"no goal {index}")
        g = self.goals[index]
        if not g.open:
            raise ProofError(f"goal {index} is not open")
        return g

    def _replace(self, g: Goal, premises: Sequence[Sequent]) -> List[int]:
        if not premises:
            g.closed_by = self.step_index
            return []
        g.expanded_by = self.step_index
        out = []
        for s in premises:
            ng = Goal(len(self.goals), s, g.index, self.step_index)
            self.goals.append(ng)
            out.append(ng.index)
        return out

    # -- argument parsing
    def _parse_arg(self, key: str, text: str, axiom: Optional[AxiomId] = None):
        try:
            if key in _FORMULA_KEYS:
                return parse_formula(text, self.signature)
            if key in _PROGRAM_KEYS:
                return parse_program(text, self.signature)
            if key in _NAME_LIST_KEYS or (key == "vars" and axiom is AxiomId.ForallInst):
                return tuple(_split_top(text))
            if key == "x":
                return text.strip()
            if key == "t" or (key == "g" and axiom is AxiomId.BDG) or \
                    (key == "h" and axiom is AxiomId.AG):
                return [parse_term(s, self.signature) for s in _split_top(text)]
            return parse_term(text, self.signature)
        except ParseError as exc:
            raise ProofError(f"argument {key}: {exc}") from None

    def _formula_arg(self, args, key, required=True):
        if key not in args:
            if required:
                raise ProofError(f"missing argument {key}")
            return None
        return self._parse_arg(key, args[key])

    # -- positions
    @staticmethod
    def _top(seq: Sequent, pos: Position, side: Optional[str] = None):
        if side is not None and pos.side != side:
            raise PatternMismatch(f"rule applies to {'antecedent' if side == 'L' else 'succedent'}"
                                  f" formulas, got position {pos}")
        fs = seq.side(pos.side)
        if not 0 <= pos.index < len(fs):
            raise PositionError(f"position {pos} is out of range for {seq}")
        return fs[pos.index]

    @staticmethod
    def _swap(seq: Sequent, side: str, index: int, new: Sequence) -> Sequent:
        fs = list(seq.side(side))
        fs[index:index + 1] = list(new)
        return seq.with_side(side, fs)

    @staticmethod
    def _add(seq: Sequent, side: str, f) -> Sequent:
        return seq.with_side(side, list(seq.side(side)) + [f])

    # ------------------------------------------------------------ propositional
    def rule_impR(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "R")
        if not isinstance(f, Imply):
            raise PatternMismatch(f"impR needs an implication, got {pretty(f)}")
        s = self._swap(s, "R", pos.index, [f.right])
        return [self._add(s, "L", f.left)]

    def rule_impL(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "L")
        if not isinstance(f, Imply):
            raise PatternMismatch(f"impL needs an implication, got {pretty(f)}")
        rest = self._swap(s, "L", pos.index, [])
        return [self._add(rest, "R", f.left), self._add(rest, "L", f.right)]

    def rule_andL(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "L")
        if not isinstance(f, And):
            raise PatternMismatch(f"andL needs a conjunction, got {pretty(f)}")
        return [self._swap(s, "L", pos.index, [f.left, f.right])]

    def rule_andR(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "R")
        if not isinstance(f, And):
            raise PatternMismatch(f"andR needs a conjunction, got {pretty(f)}")
        return [self._swap(s, "R", pos.index, [f.left]), self._swap(s, "R", pos.index, [f.right])]

    def rule_orR(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "R")
        if not isinstance(f, Or):
            raise PatternMismatch(f"orR needs a disjunction, got {pretty(f)}")
        return [self._swap(s, "R", pos.index, [f.left, f.right])]

    def rule_orL(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "L")
        if not isinstance(f, Or):
            raise PatternMismatch(f"orL needs a disjunction, got {pretty(f)}")
        return [self._swap(s, "L", pos.index, [f.left]), self._swap(s, "L", pos.index, [f.right])]

    def rule_notL(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "L")
        if not isinstance(f, Not):
            raise PatternMismatch(f"notL needs a negation, got {pretty(f)}")
        return [self._add(self._swap(s, "L", pos.index, []), "R", f.inner)]

    def rule_notR(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "R")
        if not isinstance(f, Not):
            raise PatternMismatch(f"notR needs a negation, got {pretty(f)}")
        return [self._add(self._swap(s, "R", pos.index, []), "L", f.inner)]

    def rule_equivR(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "R")
        if not isinstance(f, Equiv):
            raise PatternMismatch(f"equivR needs an equivalence, got {pretty(f)}")
        a = self._add(self._swap(s, "R", pos.index, [f.right]), "L", f.left)
        b = self._add(self._swap(s, "R", pos.index, [f.left]), "L", f.right)
        return [a, b]

    def rule_id(self, g, pos, args):
        s = g.sequent
        if "left" in args:
            lp = Position.parse(args["left"] if "." in args["left"] else "L." + args["left"])
            left = self._top(s, lp, "L")
            right = self._top(s, pos if pos.side == "R" else Position("R", 0), "R")
            if kernel_equal(left, right):
                return []
            raise _mismatch(left, right, "id: formulas")
        for a in s.antecedent:
            for b in s.succedent:
                if kernel_equal(a, b):
                    return []
        raise PatternMismatch(f"id: no antecedent formula matches a succedent formula in {s}")

    def rule_WL(self, g, pos, args):
        self._top(g.sequent, pos, "L")
        return [self._swap(g.sequent, "L", pos.index, [])]

    def rule_WR(self, g, pos, args):
        self._top(g.sequent, pos, "R")
        return [self._swap(g.sequent, "R", pos.index, [])]

    def rule_cut(self, g, pos, args):
        c = self._formula_arg(args, "C")
        s = g.sequent
        return [self._add(s, "R", c), self._add(s, "L", c)]

    # ------------------------------------------------------------ quantifiers
    def _eigen(self, s: Sequent, side: str, index: int, f, args):
        v = f.var
        new = args.get("var", v).strip()
        if is_primed(new) != is_primed(v):
            raise EigenvariableNotFresh(f"eigenvariable {new} must have the sort of {v}")
        others = list(s.antecedent) + list(s.succedent)
        del others[index if side == "L" else len(s.antecedent) + index]
        clash = [o for o in others if new in free_vars(o)]
        if new != v and new in free_vars(f):
            clash.append(f)
        if clash:
            raise EigenvariableNotFresh(f"{new} occurs free in {pretty(clash[0])}")
        try:
            return substitute(f.body, {v: var_term(new)})
        except SubstitutionClash as exc:
            raise EigenvariableNotFresh(str(exc)) from None

    def _instance(self, f, args):
        if "t" not in args:
            raise ProofError("missing argument t (instantiation term)")
        try:
            t = parse_term(args["t"], self.signature)
        except ParseError as exc:
            raise ProofError(f"argument t: {exc}") from None
        try:
            return substitute(f.body, {f.var: t})
        except SubstitutionClash as exc:
            raise ProofError(f"instantiation is not admissible: {exc}") from None

    def rule_allR(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "R")
        if not isinstance(f, Forall):
            raise PatternMismatch(f"allR needs a universal formula, got {pretty(f)}")
        return [self._swap(s, "R", pos.index, [self._eigen(s, "R", pos.index, f, args)])]

    def rule_existsL(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "L")
        if not isinstance(f, Exists):
            raise PatternMismatch(f"existsL needs an existential formula, got {pretty(f)}")
        return [self._swap(s, "L", pos.index, [self._eigen(s, "L", pos.index, f, args)])]

    def rule_allL(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "L")
        if not isinstance(f, Forall):
            raise PatternMismatch(f"allL needs a universal formula, got {pretty(f)}")
        return [self._swap(s, "L", pos.index, [self._instance(f, args)])]

    def rule_existsR(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "R")
        if not isinstance(f, Exists):
            raise PatternMismatch(f"existsR needs an existential formula, got {pretty(f)}")
        return [self._swap(s, "R", pos.index, [self._instance(f, args)])]

    # ------------------------------------------------------------ G rule
    def rule_G(self, g, pos, args):
        s = g.sequent
        f = self._top(s, pos, "R")
        if not isinstance(f, Box):
            raise PatternMismatch(f"G needs a box formula, got {pretty(f)}")
        keep = []
        for item in _split_top(args.get("keep", "")):
            p = Position.parse(item if item.startswith("L.") else "L." + item)
            keep.append(self._top(s, p, "L"))
        bv = bound_vars(f.prog)
        hit = set()
        for k in keep:
            hit |= free_vars(k) & bv
        if hit:
            names = ",".join(v[:-1] + "′" if is_primed(v) else v for v in sorted(hit))
            raise SideConditionViolated(f"{names} ∈ FV(Γ₀) ∩ BV(α)")
        return [Sequent(tuple(keep), (f.body,))]

    # ------------------------------------------------------------ axioms
    def _axiom(self, args):
        if "id" not in args:
            raise ProofError("missing argument id (axiom name)")
        try:
            aid = AxiomId.parse(args["id"])
        except SchemaMismatch as exc:
            raise ProofError(str(exc)) from None
        params = {}
        for k, v in args.items():
            if k in ("id", "dir", "allow_negation"):
                continue
            params[k] = self._parse_arg(k, v, aid)
        try:
            inst = axiom_instance(aid, params)
        except SchemaMismatch as exc:
            raise ShapeMismatch(f"{aid.value}: {exc}") from None
        inst.check()
        return inst

    def rule_axiom(self, g, pos, args):
        """Use an axiom at the top level of a succedent formula."""
        s = g.sequent
        if pos.path:
            raise PositionError("axiom applies at the top level of a formula; use rewrite")
        f = self._top(s, pos, "R")
        inst = self._axiom(args)
        cons = inst.consequent
        if kernel_equal(f, cons):
            replacement = []
        elif isinstance(cons, Equiv) and kernel_equal(f, cons.left):
            replacement = [cons.right]
        elif isinstance(cons, Equiv) and kernel_equal(f, cons.right):
            replacement = [cons.left]
        else:
            raise _mismatch(cons, f, f"{inst.id.value}: goal")
        self.axiom_counts[inst.id.value] += 1
        out = [self._swap(s, "R", pos.index, [h]) for h in inst.hypotheses]
        out += [self._swap(s, "R", pos.index, replacement)] if replacement else []
        return out

    def rule_rewrite(self, g, pos, args):
        """Replace one side of an equivalence axiom by the other below a formula."""
        s = g.sequent
        if pos.side != "R":
            raise PolarityViolation("rewriting is only permitted inside succedent formulas")
        top = self._top(s, pos, "R")
        inst = self._axiom(args)
        cons = inst.consequent
        if not isinstance(cons, Equiv):
            raise ShapeMismatch(f"{inst.id.value} is not an equivalence axiom")
        sub = subnode(top, pos.path)
        direction = args.get("dir", "")
        if direction != "rl" and kernel_equal(sub, cons.left):
            new = cons.right
        elif direction != "lr" and kernel_equal(sub, cons.right):
            new = cons.left
        else:
            raise _mismatch(cons.left, sub, f"{inst.id.value}: subformula")
        allow = args.get("allow_negation", "false").lower() in ("1", "true", "yes")
        conditional = bool(inst.hypotheses)
        for node, i in path_kinds(top, pos.path):
            t = type(node)
            if t is Not or (t is Imply and i == 0) or t is Diamond:
                if not allow:
                    raise PolarityViolation(
                        f"rewrite position crosses {_NODE_NAMES.get(t, t.__name__)}"
                        + (" (left of ->)" if t is Imply else ""))
            elif t not in (And, Or, Imply, Equiv, Box, Forall, Exists):
                raise PositionError(f"cannot rewrite inside {t.__name__}")
            if conditional and t in (Box, Diamond, Forall, Exists):
                raise PolarityViolation("a conditional equivalence may not be used below a binder")
        self.axiom_counts[inst.id.value] += 1
        out = [self._swap(s, "R", pos.index, [h]) for h in inst.hypotheses]
        out.append(self._swap(s, "R", pos.index, [replace_at(top, pos.path, new)]))
        return out

    # ------------------------------------------------------------ oracles
    def _consult(self, kind, claim, rhs=None, goal=None):
        c = OracleClaim(kind, self.step_index, goal.index if goal else -1, claim, rhs=rhs)
        if self.oracle is not None:
            c.status, c.detail = self.oracle(kind, claim, rhs)
        self.ledger.add(c)
        return c

    def rule_R(self, g, pos, args):
        claim = arithmetic_claim(g.sequent)
        if "claim" in args:
            stated = self._formula_arg(args, "claim")
            if not kernel_equal(stated, claim):
                raise MalformedClaim(f"stated claim {pretty(stated)} is not the goal's "
                                     f"arithmetic content {pretty(claim)}")
        self._consult("R", claim, goal=g)
        return []

    def rule_PR(self, g, pos, args):
        s = g.sequent
        top = self._top(s, pos)
        kind = args.get("kind", "").strip()
        if "vars" not in args:
            raise ProofError("missing argument vars")
        xs = tuple(_split_top(args["vars"]))
        f = self._formula_arg(args, "F")
        if kind == "progress":
            lhs = progress_formula(xs, f)
        elif kind == "exit":
            lhs = exit_formula(xs, f)
        elif kind == "entry":
            lhs = entry_formula(xs, f)
        elif kind == "consis":
            lhs = mode_consistency(xs, f, self._formula_arg(args, "G"))
        else:
            raise ProofError(f"PR kind must be progress, exit, entry or consis, got {kind!r}")
        sub = subnode(top, pos.path)
        if not kernel_equal(sub, lhs):
            raise _mismatch(lhs, sub, f"PR {kind}: subformula")
        rhs = self._formula_arg(args, "rhs")
        if not first_order(rhs):
            raise MalformedClaim("PR right-hand side must be first-order arithmetic")
        self._consult("PR", Equiv(lhs, rhs), rhs=rhs, goal=g)
        return [self._swap(s, pos.side, pos.index, [replace_at(top, pos.path, rhs)])]

    # ------------------------------------------------------------ driver
    def apply(self, rule: str, goal=None, pos=None, args=None) -> List[int]:
        name = RULES.get(rule)
        if name is None:
            raise ProofError(f"unknown rule {rule!r}")
        g = self.goal(goal)
        p = Position.parse(pos)
        premises = getattr(self, name)(g, p, dict(args or {}))
        for s in premises:
            problem = wellformed(s)
            if problem:
                raise ProofError(f"ill-formed goal produced: {problem}")
        created = self._replace(g, premises)
        self.step_index += 1
        return created

    def derived_uses(self) -> int:
        return sum(n for k, n in self.axiom_counts.items() if AxiomId(k) in DERIVED)


_NODE_NAMES = {Not: "negation", Imply: "implication", Diamond: "diamond"}


def new_proof(conjecture, oracle=None) -> ProofState:
    return ProofState(conjecture, oracle)


# ------------------------------------------------------------ helpers

def _walk(node):
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, tuple):
            stack.extend(n)
        elif hasattr(n, "__dataclass_fields__"):
            for k in n.__dataclass_fields__:
                v = getattr(n, k)
                if isinstance(v, (tuple,)) or hasattr(v, "__dataclass_fields__"):
                    stack.append(v)


def first_order(f) -> bool:
    """No modalities, predicate symbols or function symbols anywhere."""
    return not any(isinstance(n, (Box, Diamond, Pred, Func)) for n in _walk(f))


def arithmetic_claim(s: Sequent):
    """The first-order content ``/\\ Γ -> \\/ Δ`` of a sequent (other formulas weakened)."""
    ants = [a for a in s.antecedent if first_order(a)]
    succ = [b for b in s.succedent if first_order(b)]
    if not succ:
        succ = [Cmp("=", Const(0), Const(1))]
    body = disj(succ)
    prefix = []
    if len(succ) == 1 and ants:
        ant_fv = set()
        for a in ants:
            ant_fv |= free_vars(a)
        while isinstance(body, Forall) and body.var not in ant_fv:
            prefix.append(body.var)
            body = body.body
    claim = Imply(conj(ants), body) if ants else body
    for v in reversed(prefix):
        claim = Forall(v, claim)
    return claim


def wellformed(s: Sequent) -> Optional[str]:
    arity: Dict[Tuple[str, str], int] = {}
    for f in list(s.antecedent) + list(s.succedent):
        problem = _wf(f, frozenset(), arity)
        if problem:
            return problem
    return None


def _wf(n, binders, arity):
    t = type(n)
    if t is Forall or t is Exists:
        if n.var in binders:
            return f"quantifier rebinds {n.var} inside its own scope"
        return _wf(n.body, binders | {n.var}, arity)
    if t is DAP:
        if not first_order_dap(n.constraint):
            return "modality inside a differential-algebraic constraint"
    if t is Func or t is Pred:
        key = ("f" if t is Func else "p", n.symbol)
        if arity.setdefault(key, len(n.args)) != len(n.args):
            return f"symbol {n.symbol} used with arities {arity[key]} and {len(n.args)}"
    if hasattr(n, "__dataclass_fields__"):
        for k in n.__dataclass_fields__:
            v = getattr(n, k)
            kids = v if isinstance(v, tuple) else (v,)
            for c in kids:
                if hasattr(c, "__dataclass_fields__"):
                    problem = _wf(c, binders, arity)
                    if problem:
                        return problem
    return None


def first_order_dap(f) -> bool:
    return not any(isinstance(n, (Box, Diamond)) for n in _walk(f))


RULES = {}
for _name in ("impR", "impL", "andL", "andR", "orR", "orL", "notL", "notR", "equivR", "id",
              "WL", "WR", "cut", "allR", "allL", "existsL", "existsR", "G", "axiom",
              "rewrite", "R", "PR"):
    RULES[_name] = "rule_" + _name
RULES.update({
    "->R": "rule_impR", "->L": "rule_impL", "&L": "rule_andL", "&R": "rule_andR",
    "|R": "rule_orR", "|L": "rule_orL", "!L": "rule_notL", "!R": "rule_notR",
    "<->R": "rule_equivR", "axiom-top": "rule_axiom", "axiom-rewrite": "rule_rewrite",
    "R-oracle": "rule_R", "PR-oracle": "rule_PR", "forallR": "rule_allR",
    "forallL": "rule_allL",
})
