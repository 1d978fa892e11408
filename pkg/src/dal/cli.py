"""``dal`` command line: check proof scripts, build formulas, run the oracles.

Exit codes are a stable contract: 0 success, 1 logical failure (refuted,
open goal, violated side condition, rejected witness), 2 usage or parse
error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .calculus.axioms import (
    DERIVED, AxiomId, SchemaMismatch, SideConditionViolated, axiom_instance, catalogue,
)
from .calculus.flows import (
    CalculusError, differential, entry_formula, exit_formula, formula_differential,
    mode_consistency, progress_formula, reverse_flow,
)
from .prover import POLICIES, Config, ScriptError, check_script, expansion_text, parse_script
from .semantics import (
    DEFAULT_SEED, SampleDomain, UninterpretedSymbol, Unsupported, check_flow_witness,
    falsify, parse_witness,
)
from .syntax.parser import ParseError, parse_formula, parse_program, parse_term
from .syntax.printer import pretty

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ------------------------------------------------------------ configuration

def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _env_int(name: str) -> Optional[int]:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def config_from(args) -> Config:
    """Flags win over ``DAL_ORACLE_POLICY``/``DAL_SEED``, which win over defaults."""
    policy = args.policy or os.environ.get("DAL_ORACLE_POLICY") or "audited"
    if policy not in POLICIES:
        raise UsageError(f"oracle policy must be one of {', '.join(POLICIES)}, got {policy!r}")
    seed = args.seed if args.seed is not None else _env_int("DAL_SEED")
    dom = SampleDomain()
    changes = {}
    if seed is not None:
        changes["seed"] = seed
    if args.samples is not None:
        changes["n"] = args.samples
    if args.lo is not None:
        changes["lo"] = args.lo
    if args.hi is not None:
        changes["hi"] = args.hi
    try:
        dom = replace(dom, **changes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg = Config(policy=policy, dom=dom)
    if args.pr_samples is not None:
        cfg = replace(cfg, pr_samples=args.pr_samples)
    return cfg


def _add_oracle_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("oracle")
    g.add_argument("--policy", choices=POLICIES, default=None,
                   help="oracle policy (env DAL_ORACLE_POLICY; default audited)")
    g.add_argument("--seed", type=int, default=None,
                   help=f"falsifier seed (env DAL_SEED; default {DEFAULT_SEED})")
    g.add_argument("--samples", type=int, default=None, help="random samples per R claim")
    g.add_argument("--pr-samples", type=int, default=None, help="random samples per PR claim")
    g.add_argument("--lo", type=_fraction, default=None, help="sample interval lower bound")
    g.add_argument("--hi", type=_fraction, default=None, help="sample interval upper bound")


# ------------------------------------------------------------ check

def _script_paths(targets: Sequence[str]) -> Tuple[List[Path], bool]:
    paths, corpus_mode = [], False
    for t in targets:
        p = Path(t)
        if p.is_dir():
            corpus_mode = True
            paths.extend(sorted(p.glob("*.dalp")))
        elif p.is_file():
            paths.append(p)
        else:
            raise UsageError(f"no such file or directory: {t}")
    if len(paths) > 1:
        corpus_mode = True
    if not paths:
        raise UsageError("no .dalp scripts found")
    return paths, corpus_mode


def _check_one(path: Path, cfg: Config, verbose: bool):
    """(status, expect, text) or a parse failure as (None, None, message)."""
    try:
        script = parse_script(path.read_text(encoding="utf-8"))
    except (ScriptError, ParseError) as exc:
        return None, None, f"{path}: parse error: {exc}"
    report = check_script(script, cfg, verbose=verbose)
    return report.status, script.expect, report.text()


def cmd_check(args) -> int:
    cfg = config_from(args)
    paths, corpus_mode = _script_paths(args.scripts)
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_check_one, paths, [cfg] * len(paths),
                                    [args.verbose] * len(paths)))
    else:
        results = [_check_one(p, cfg, args.verbose) for p in paths]

    if not corpus_mode:
        status, _, text = results[0]
        if status is None:
            print(text, file=sys.stderr)
            return USAGE
        print(text)
        return OK if status == "accepted" else FAIL

    # corpus mode: every script is judged against its declared expectation
    worst = OK
    for path, (status, expect, text) in zip(paths, results):
        if status is None:
            print(text, file=sys.stderr)
            worst = USAGE
            continue
        if args.verbose:
            print(text)
            print()
        verdict = "ok" if status == expect else "UNEXPECTED"
        print(f"{path.name}: {status} (expected {expect}) {verdict}")
        if status != expect and worst == OK:
            worst = FAIL
    return worst


# ------------------------------------------------------------ build

def _vars(text: Optional[str]) -> Tuple[str, ...]:
    if not text:
        raise UsageError("--vars is required for this kind")
    xs = tuple(v.strip() for v in text.split(",") if v.strip())
    if not xs:
        raise UsageError("--vars is empty")
    return xs


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this kind")
    return value


def cmd_build(args) -> int:
    kind = args.kind
    if kind == "differential":
        if args.term is not None:
            out = differential(parse_term(args.term))
        else:
            out = formula_differential(parse_formula(_need(args.formula, "--term or --formula")))
    elif kind == "reverse":
        text = args.formula if args.formula is not None else args.constraint
        out = reverse_flow(parse_formula(_need(text, "--formula")), _vars(args.vars))
    else:
        xs = _vars(args.vars)
        text = args.constraint if args.constraint is not None else args.formula
        f = parse_formula(_need(text, "--constraint"))
        if kind == "progress":
            out = progress_formula(xs, f)
        elif kind == "exit":
            out = exit_formula(xs, f)
        elif kind == "entry":
            out = entry_formula(xs, f)
        else:
            out = mode_consistency(xs, f, parse_formula(_need(args.other, "--with")))
    print(pretty(out, spaced=not args.compact))
    return OK


# ------------------------------------------------------------ falsify

def cmd_falsify(args) -> int:
    cfg = config_from(args)
    claim = parse_formula(args.claim)
    try:
        verdict = falsify(claim, cfg.dom)
    except (Unsupported, UninterpretedSymbol) as exc:
        print(f"Untested: {exc}")
        return FAIL
    if verdict:
        print(f"NoCounterexampleFound: {verdict.samples} samples (seed {cfg.dom.seed})")
        return OK
    print(f"Refuted: {verdict.state.describe(verdict.variables or None)}")
    return FAIL


# ------------------------------------------------------------ witness

def cmd_witness(args) -> int:
    path = Path(args.file)
    if not path.is_file():
        raise UsageError(f"no such file: {path}")
    dap = parse_program(args.dap) if args.dap else None
    try:
        wf = parse_witness(path.read_text(encoding="utf-8"), dap)
    except ValueError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return USAGE
    if wf.dap is None:
        raise UsageError("the witness file has no 'dap =' line; pass --dap")
    initial = dict(wf.initial)
    for item in args.init or ():
        name, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"--init expects VAR=RATIONAL, got {item!r}")
        initial[name.strip()] = _fraction(val.strip())
    witness = wf.witness
    if args.T is not None:
        witness = replace(witness, T=args.T)
    verdict = check_flow_witness(witness, wf.dap, initial or None)
    print(str(verdict))
    return OK if verdict else FAIL


# ------------------------------------------------------------ axioms

_FORMULA_KEYS = {"F", "G", "P", "p", "R"}
_PROGRAM_KEYS = {"alpha", "beta"}
_TERM_LIST_KEYS = {"t", "g", "h"}


def _axiom_param(key: str, text: str, aid: AxiomId):
    if key in ("vars", "ys"):
        return text
    if key in _FORMULA_KEYS:
        return parse_formula(text)
    if key in _PROGRAM_KEYS:
        return parse_program(text)
    if key == "e" or (key == "g" and aid in (AxiomId.DE, AxiomId.AndDE)):
        return parse_term(text)
    if key in _TERM_LIST_KEYS:
        return [parse_term(s) for s in text.split(",")]
    if key == "x":
        return text.strip()
    return parse_term(text)


def cmd_axioms(args) -> int:
    if args.id is None:
        print(catalogue())
        return OK
    try:
        aid = AxiomId.parse(args.id)
    except SchemaMismatch as exc:
        raise UsageError(str(exc)) from None
    raw = {}
    for item in args.param or ():
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        raw[key.strip()] = val.strip()
    if args.expand:
        if aid not in DERIVED:
            raise UsageError(f"{aid.value} is a base axiom; only AR, DC and AndDE expand")
        if "vars" not in raw:
            raise UsageError("--expand needs --param vars=...")
        print(expansion_text(aid, **raw), end="")
        return OK
    params = {k: _axiom_param(k, v, aid) for k, v in raw.items()}
    inst = axiom_instance(aid, params)
    print(f"{aid.value}: {pretty(inst.conclusion)}")
    for h in inst.hypotheses:
        print(f"  premise: {pretty(h)}")
    for sc in inst.side_conditions:
        print(f"  side condition {sc.description}: {'ok' if sc.passed else 'VIOLATED'}")
    try:
        inst.check()
    except SideConditionViolated as exc:
        print(f"SideConditionViolated: {exc}")
        return FAIL
    return OK


# ------------------------------------------------------------ entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dal", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"dal {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="replay proof scripts (files or corpus directories)")
    p.add_argument("scripts", nargs="+", metavar="PATH")
    p.add_argument("-v", "--verbose", action="store_true", help="print every produced goal")
    p.add_argument("-j", "--jobs", type=int, default=1, help="check scripts in parallel")
    _add_oracle_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("build", help="construct and print a formula")
    p.add_argument("kind", choices=("progress", "exit", "entry", "consis", "differential",
                                    "reverse"))
    p.add_argument("--vars", help="comma-separated system variables")
    p.add_argument("--constraint", help="the DAP constraint F")
    p.add_argument("--with", dest="other", help="second constraint G (consis)")
    p.add_argument("--term", help="term to differentiate")
    p.add_argument("--formula", help="formula to reverse or differentiate")
    p.add_argument("--compact", action="store_true", help="print without blanks around + and =")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("falsify", help="search for a counterexample to an arithmetic claim")
    p.add_argument("--claim", required=True)
    _add_oracle_flags(p)
    p.set_defaults(func=cmd_falsify)

    p = sub.add_parser("witness", help="check a polynomial flow witness file")
    p.add_argument("file")
    p.add_argument("--dap", help="system to check against (overrides the file)")
    p.add_argument("--init", action="append", metavar="VAR=Q", help="initial value")
    p.add_argument("--T", type=_fraction, default=None, help="override the duration")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("axioms", help="list axiom schemata or instantiate one")
    p.add_argument("id", nargs="?")
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--expand", action="store_true",
                   help="print the base-axiom proof script of a derived axiom")
    p.set_defaults(func=cmd_axioms)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dal: {exc}", file=sys.stderr)
        return USAGE
    except ParseError as exc:
        print(f"dal: parse error: {exc}", file=sys.stderr)
        return USAGE
    except (SchemaMismatch, CalculusError) as exc:
        print(f"dal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAIL
    except SideConditionViolated as exc:
        print(f"SideConditionViolated: {exc}")
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
