"""Replayable expansions of the derived axioms AR, DC and AndDE.

Each template rebuilds the derived rule from base axioms and propositional
steps only, at caller-chosen ``F``, ``G`` (or ``e``, ``g``) and ``P``.  Ghost
names are picked fresh, so the expansion does not depend on the letters
``z`` and ``w`` being unused.
"""

from __future__ import annotations

from typing import Sequence

from ..calculus.axioms import AxiomId, SchemaMismatch
from ..calculus.flows import formula_differential
from ..syntax.ast import Cmp, Const
from ..syntax.parser import parse_formula, parse_term
from ..syntax.printer import pretty
from ..syntax.vars import dap_vars, free_vars, fresh_vars
from .script import ProofScript, parse_script

__all__ = ["derived_expansion", "expansion_text"]


_AR = """
let A = "$ALL ($F -> $G)"
conjecture = "$A -> ([{$X & $G}]$P -> [{$X & $F}]$P)"

rule=impR pos=R.0 note="->R"
rule=impR goal=1 pos=R.0 note="->R"
rule=axiom goal=2 pos=R.0 args={id=AG vars="$X" ys="$Z" F="$F" G="$G" h="0" P="$P"} note="AG"
rule=axiom goal=3 pos=R.0 args={id=K alpha="{$X & $F}" R="$F" P="$G"} note="K"
rule=G goal=5 pos=R.0 args={keep="0"} note="G"
rule=axiom goal=7 pos=R.0 args={id=ForallInst vars="$XP" p="$F -> $G" t="$XP"} note="forall-i"
rule=id goal=8 note="id"
rule=axiom goal=6 pos=R.0 args={id=DW vars="$X" F="$F"} note="DW"
rule=rewrite goal=4 pos=R.0.0.0 args={id=C vars="$X,$Z" F="$F" G="$G" P="$P"} note="C"
rule=axiom goal=9 pos=R.0 args={id=DR vars="$X" ys="$Z" F="$G" G="$F" P="$P"} note="DR"
rule=id goal=10 note="id"
"""

_DC = """
let T = "$Z^2>=0"
conjecture = "[{$X & $F}]$G -> ([{$X & $F & $G}]$P <-> [{$X & $F}]$P)"

rule=impR pos=R.0 note="->R"
rule=equivR goal=1 pos=R.0 note="<->"
rule=axiom goal=3 pos=R.0 args={id=AG vars="$X" ys="$Z" F="$F & $G" G="$T" h="0" P="$P"} note="AG"
rule=G goal=4 pos=R.0 args={keep=""} note="G"
rule=R goal=6 note="R"
rule=allR goal=5 pos=R.0 args={var=$Z} note="forallR"
rule=allR goal=7 pos=R.0 args={var=$Z'} note="forallR"
rule=axiom goal=8 pos=R.0 args={id=AG vars="$X,$Z" ys="$W" F="$F & $G & $T" G="$F & $T" h="0" P="$P"} note="AG"
rule=axiom goal=9 pos=R.0 args={id=K alpha="{$X,$Z & $F & $G & $T}" R="$F & $G & $T" P="$F & $T"} note="K"
rule=G goal=11 pos=R.0 args={keep=""} note="G"
rule=R goal=13 note="R"
rule=axiom goal=12 pos=R.0 args={id=DW vars="$X,$Z" F="$F & $G & $T"} note="DW"
rule=rewrite goal=10 pos=R.0.0.0 args={id=C vars="$X,$Z,$W" F="$F & $G & $T" G="$F & $T" P="$P"} note="C"
rule=axiom goal=14 pos=R.0 args={id=DR vars="$X,$Z" ys="$W" F="$F & $T" G="$F & $G & $T" P="$P"} note="DR"
rule=axiom goal=15 pos=R.0 args={id=ForallInst vars="$Z,$Z'" p="[{$X,$Z & $F & $T}]$P" t="$Z,$Z'"} note="forall-i"
rule=axiom goal=16 pos=R.0 args={id=DR vars="$X" ys="$Z" F="$F" G="$T" P="$P"} note="DR"
rule=id goal=17 note="id"
rule=axiom goal=2 pos=R.0 args={id=AG vars="$X" ys="$Z" F="$F" G="$G" h="0" P="$P"} note="AG"
rule=id goal=18 note="id"
rule=allR goal=19 pos=R.0 args={var=$Z} note="forallR"
rule=allR goal=20 pos=R.0 args={var=$Z'} note="forallR"
rule=axiom goal=21 pos=R.0 args={id=AG vars="$X,$Z" ys="$W" F="$F & $G" G="$F & $G & $T" h="0" P="$P"} note="AG"
rule=axiom goal=22 pos=R.0 args={id=K alpha="{$X,$Z & $F & $G}" R="$F & $G" P="$F & $G & $T"} note="K"
rule=G goal=24 pos=R.0 args={keep=""} note="G"
rule=R goal=26 note="R"
rule=axiom goal=25 pos=R.0 args={id=DW vars="$X,$Z" F="$F & $G"} note="DW"
rule=rewrite goal=23 pos=R.0.0.0 args={id=C vars="$X,$Z,$W" F="$F & $G" G="$F & $G & $T" P="$P"} note="C"
rule=axiom goal=27 pos=R.0 args={id=DR vars="$X,$Z" ys="$W" F="$F & $G & $T" G="$F & $G" P="$P"} note="DR"
rule=axiom goal=28 pos=R.0 args={id=ForallInst vars="$Z,$Z'" p="[{$X,$Z & $F & $G & $T}]$P" t="$Z,$Z'"} note="forall-i"
rule=axiom goal=29 pos=R.0 args={id=DR vars="$X" ys="$Z" F="$F & $G" G="$T" P="$P"} note="DR"
rule=id goal=30 note="id"
"""

_ANDDE = """
let T = "$Z^2>=0"
conjecture = "[{$X & $F & $E}]$P <-> [{$X & $F & $E & $D}]$P"

rule=equivR pos=R.0 note="<->"
rule=axiom goal=1 pos=R.0 args={id=AG vars="$X" ys="$W" F="$F & $E & $D" G="$F & $E" h="0" P="$P"} note="AG"
rule=axiom goal=3 pos=R.0 args={id=K alpha="{$X & $F & $E & $D}" R="$F & $E & $D" P="$F & $E"} note="K"
rule=G goal=5 pos=R.0 args={keep=""} note="G"
rule=R goal=7 note="R"
rule=axiom goal=6 pos=R.0 args={id=DW vars="$X" F="$F & $E & $D"} note="DW"
rule=rewrite goal=4 pos=R.0.0.0 args={id=C vars="$X,$W" F="$F & $E & $D" G="$F & $E" P="$P"} note="C"
rule=axiom goal=8 pos=R.0 args={id=DR vars="$X" ys="$W" F="$F & $E" G="$F & $E & $D" P="$P"} note="DR"
rule=id goal=9 note="id"
rule=axiom goal=2 pos=R.0 args={id=AG vars="$X" ys="$Z" F="$F & $E" G="$D" h="0" P="$P"} note="AG"
rule=axiom goal=10 pos=R.0 args={id=AG vars="$X" ys="$W" F="$F & $E" G="$E" h="0" P="$D"} note="AG"
rule=axiom goal=12 pos=R.0 args={id=K alpha="{$X & $F & $E}" R="$F & $E" P="$E"} note="K"
rule=G goal=14 pos=R.0 args={keep=""} note="G"
rule=R goal=16 note="R"
rule=axiom goal=15 pos=R.0 args={id=DW vars="$X" F="$F & $E"} note="DW"
rule=rewrite goal=13 pos=R.0.0.0 args={id=C vars="$X,$W" F="$F & $E" G="$E" P="$D"} note="C"
rule=axiom goal=17 pos=R.0 args={id=DR vars="$X" ys="$W" F="$E" G="$F & $E" P="$D"} note="DR"
rule=axiom goal=18 pos=R.0 args={id=DE vars="$X" e="$e" g="$g"} note="DE"
rule=allR goal=11 pos=R.0 args={var=$Z} note="forallR"
rule=allR goal=19 pos=R.0 args={var=$Z'} note="forallR"
rule=axiom goal=20 pos=R.0 args={id=AG vars="$X,$Z" ys="$W" F="$F & $E & $D" G="$F & $E & $D & $T" h="0" P="$P"} note="AG"
rule=axiom goal=21 pos=R.0 args={id=K alpha="{$X,$Z & $F & $E & $D}" R="$F & $E & $D" P="$F & $E & $D & $T"} note="K"
rule=G goal=23 pos=R.0 args={keep=""} note="G"
rule=R goal=25 note="R"
rule=axiom goal=24 pos=R.0 args={id=DW vars="$X,$Z" F="$F & $E & $D"} note="DW"
rule=rewrite goal=22 pos=R.0.0.0 args={id=C vars="$X,$Z,$W" F="$F & $E & $D" G="$F & $E & $D & $T" P="$P"} note="C"
rule=axiom goal=26 pos=R.0 args={id=DR vars="$X,$Z" ys="$W" F="$F & $E & $D & $T" G="$F & $E & $D" P="$P"} note="DR"
rule=axiom goal=27 pos=R.0 args={id=ForallInst vars="$Z,$Z'" p="[{$X,$Z & $F & $E & $D & $T}]$P" t="$Z,$Z'"} note="forall-i"
rule=axiom goal=28 pos=R.0 args={id=DR vars="$X" ys="$Z" F="$F & $E & $D" G="$T" P="$P"} note="DR"
rule=id goal=29 note="id"
"""

_TEMPLATES = {AxiomId.AR: _AR, AxiomId.DC: _DC, AxiomId.AndDE: _ANDDE}


def _text(v, parse):
    # accept either concrete syntax or a tree
    node = parse(v) if isinstance(v, str) else v
    return pretty(node), node


def _let(name: str, value: str) -> str:
    return f'let {name} = "' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def expansion_text(id, vars: Sequence[str], F, G=None, P="P", e=None, g=None) -> str:
    """Script source for the expansion of ``id`` (AR, DC or AndDE)."""
    if isinstance(id, str):
        id = AxiomId.parse(id)
    if id not in _TEMPLATES:
        raise SchemaMismatch(f"{id.value} is not a derived axiom with a template")
    xs = [v.strip() for v in vars.split(",")] if isinstance(vars, str) else list(vars)
    f_txt, f = _text(F, parse_formula)
    p_txt, p = _text(P, parse_formula)
    lets = {"X": ",".join(xs), "F": f_txt, "P": p_txt}
    nodes = [f, p]
    if id is AxiomId.AndDE:
        if e is None:
            raise SchemaMismatch("AndDE expansion needs the term e")
        e_txt, e_node = _text(e, parse_term)
        g_txt, g_node = _text(g if g is not None else Const(0), parse_term)
        eq = Cmp("=", e_node, g_node)
        lets.update(e=e_txt, g=g_txt, E=pretty(eq), D=pretty(formula_differential(eq)))
        nodes.append(eq)
    else:
        if G is None:
            raise SchemaMismatch(f"{id.value} expansion needs G")
        g_txt, g_node = _text(G, parse_formula)
        lets["G"] = g_txt
        nodes.append(g_node)
    avoid = set(dap_vars(xs))
    for n in nodes:
        avoid |= free_vars(n)
    z, w = fresh_vars(avoid, ["z", "w"])
    lets.update(Z=z, W=w)
    primed = xs + [x + "'" for x in xs]
    lets["XP"] = ",".join(primed)
    lets["ALL"] = " ".join(f"\\forall {v}" for v in primed)
    head = [f"name = derived_{id.value.lower()}",
            f'description = "{id.value} expanded into base axioms"']
    head += [_let(k, v) for k, v in lets.items()]
    body = _TEMPLATES[id]
    if id is AxiomId.AndDE and g is None:
        body = body.replace(' g="$g"', "")
    return "\n".join(head) + "\n" + body


def derived_expansion(id, vars: Sequence[str], F, G=None, P="P", e=None,
                      g=None) -> ProofScript:
    """The base-axiom proof of a derived axiom instance, ready for check_script."""
    return parse_script(expansion_text(id, vars, F, G, P, e, g))
