"""Command-line front end: ``cyclarith <command> ...``.

Exit codes: 0 success or valid, 1 checked and found invalid (a certificate
is printed), 2 bad input, 3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import inspect
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import automata as au
from . import corpus
from .calculus import FiniteProof, check_proof
from .cyclic import CertificateError, CyclicPreproof, check
from .formats import (
    lasso_text, parse_assignment, parse_automaton, parse_lasso, parse_proof, print_automaton,
    print_proof,
)
from .semantics import STANDARD, Stuck, generate_branch, set_code_interpretation
from .sexpr import SexprError
from .translator import TranslationError, dualize, translate

OK, INVALID, BAD_INPUT, BREACH = 0, 1, 2, 3


@dataclass
class RunConfig:
    fuel: int = 64
    max_lasso_spoke: int = 3
    max_lasso_loop: int = 4
    level: int = 0
    parallelism: int = 1
    seed: int = 0


class InputError(ValueError):
    pass


# ----------------------------------------------------------------- output

class Report:
    """Ordered key/value fields, printed as lines or as one JSON object."""

    def __init__(self, as_json: bool, out=None):
        self.fields = {}
        self.as_json = as_json
        self.out = out or sys.stdout

    def __setitem__(self, key, value):
        self.fields[key] = value

    def emit(self):
        if self.as_json:
            self.out.write(json.dumps(self.fields, indent=2, sort_keys=False) + "\n")
            return
        for k, v in self.fields.items():
            if isinstance(v, list):
                self.out.write(f"{k}: {len(v)}\n")
                for item in v:
                    self.out.write(f"  {item}\n")
            else:
                self.out.write(f"{k}: {v}\n")


def resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    if p.parts and p.parts[0] == "corpus":
        q = corpus.corpus_dir().joinpath(*p.parts[1:])
        if q.exists():
            return q
    raise InputError(f"no such file: {path}")


def _read(path: str) -> str:
    return resolve(path).read_text()


def _proof(path):
    return parse_proof(_read(path))


def _automaton(path):
    return parse_automaton(_read(path))


def _lasso(arg: str):
    p = Path(arg)
    text = p.read_text() if p.exists() else arg
    return parse_lasso(text)


def _write(text: str, dest):
    if dest:
        Path(dest).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------- commands

def cmd_check(args, cfg, rep):
    pi = _proof(args.proof)
    rep["proof"] = args.proof
    rep["nodes"] = len(pi.nodes)
    if isinstance(pi, FiniteProof):
        report = check_proof(pi)
        rep["kind"] = "finite"
        rep["verdict"] = "invalid" if report.errors else "valid"
        rep["errors"] = [f"{m}: {e.kind}: {e}" for m, e in report.errors]
        rep["assumptions"] = len(report.assumptions)
        return INVALID if report.errors else OK
    v = check(pi)
    rep["kind"] = "cyclic"
    rep["buds"] = len(pi.buds())
    rep["verdict"] = "valid" if v.valid else "invalid"
    rep["errors"] = [f"{m}: {e.kind}: {e}" for m, e in v.errors]
    if v.counterexample is not None:
        rep["counterexample"] = str(v.counterexample)
    return OK if v.valid else INVALID


def cmd_translate(args, cfg, rep):
    out = translate(_proof(args.proof), args.level)
    _write(print_proof(out), args.output)
    return OK


def cmd_dualize(args, cfg, rep):
    pi = _proof(args.proof)
    if not isinstance(pi, CyclicPreproof):
        raise InputError("dualize expects a cyclic proof")
    _write(print_proof(dualize(pi, args.level)), args.output)
    return OK


def cmd_simulate_ind(args, cfg, rep):
    if args.spec not in corpus.SIMULATIONS:
        raise InputError(f"unknown induction {args.spec!r}; choose from {sorted(corpus.SIMULATIONS)}")
    pi = corpus.simulation(args.spec, progress=not args.no_progress, retarget=args.retarget)
    _write(print_proof(pi), args.output)
    return OK


def _print_nba(a, dest=None):
    relabel = not all(isinstance(q, str) for q in a.states)
    _write(print_automaton(a, relabel=relabel), dest)


def cmd_complement(args, cfg, rep):
    a = _automaton(args.automaton)
    if isinstance(a, au.DRA):
        raise InputError("complement takes a Buchi automaton")
    if isinstance(a, au.DBA) and not args.ramsey:
        out = au.dba_complement(a)
    else:
        out = au.nba_complement(a).materialize()
    _print_nba(out, args.output)
    return OK


def cmd_union(args, cfg, rep):
    _print_nba(au.union(_automaton(args.left), _automaton(args.right)), args.output)
    return OK


def cmd_empty(args, cfg, rep):
    is_empty, w = au.empty(_automaton(args.automaton))
    rep["empty"] = "yes" if is_empty else "no"
    if w is not None:
        rep["witness"] = lasso_text(w)
    return OK if is_empty else INVALID


def cmd_include(args, cfg, rep):
    a1, a2 = _automaton(args.left), _automaton(args.right)
    if not isinstance(a1, au.DBA):
        raise InputError("the left automaton of include must be a DBA")
    ok, w = au.includes(a1, a2)
    rep["included"] = "yes" if ok else "no"
    if w is not None:
        rep["counterexample"] = lasso_text(w)
        rep["left-accepts"] = au.dba_accepts_lasso(a1, w)
        rep["right-accepts"] = au.nba_accepts_lasso(a2, w)
    return OK if ok else INVALID


def _matrix_text(a, m) -> str:
    rows = []
    for q in a.states:
        cells = []
        for r in a.states:
            e = m.entry(q, r)
            cells.append("inf" if e == au.INF else str(e))
        rows.append(" ".join(cells))
    return " | ".join(rows)


def cmd_factorize(args, cfg, rep):
    a = _automaton(args.automaton)
    w = _lasso(args.lasso)
    beta, gamma, i0, stride = au.ramsey_factorize_lasso(a, w)
    rep["states"] = " ".join(map(str, a.states))
    rep["beta"] = _matrix_text(a, beta)
    rep["gamma"] = _matrix_text(a, gamma)
    rep["start"] = i0
    rep["stride"] = stride
    rep["rejecting-pair"] = au.is_rejecting_pair(a, beta, gamma)
    rep["accepts"] = au.nba_accepts_lasso(a, w)
    return OK


def cmd_universal(args, cfg, rep):
    a = _automaton(args.automaton)
    if not isinstance(a, au.DRA):
        raise InputError("universal takes a DRA")
    ok = au.dra_universal(a)
    rep["universal"] = "yes" if ok else "no"
    return OK if ok else INVALID


def cmd_accepts(args, cfg, rep):
    a = _automaton(args.automaton)
    w = _lasso(args.lasso)
    if isinstance(a, au.DRA):
        ok = au.dra_accepts_lasso(a, w)
    elif isinstance(a, au.DBA):
        ok = au.dba_accepts_lasso(a, w)
    else:
        ok = au.nba_accepts_lasso(a, w)
    rep["accepts"] = "yes" if ok else "no"
    return OK if ok else INVALID


def _interpretation(pi, table):
    sig = pi.theory.signature
    declared = {n for n, _ in sig.functions} | {n for n, _ in sig.predicates}
    if not declared:
        return STANDARD
    if declared <= {"f", "del", "mem", "gtc"}:
        values = [int(x) for x in table.split(",")] if table else None
        return set_code_interpretation(
            (lambda x: values[x] if x < len(values) else 0) if values else (lambda x: x))
    raise InputError(f"no interpretation available for symbols {sorted(declared)}")


def cmd_simulate_branch(args, cfg, rep):
    pi = _proof(args.proof)
    if not isinstance(pi, CyclicPreproof):
        raise InputError("simulate-branch expects a cyclic proof")
    text = args.assignment
    p = Path(text)
    rho = parse_assignment(p.read_text() if p.exists() else text)
    interp = _interpretation(pi, args.map)
    try:
        br = generate_branch(pi, rho, interp, args.steps, cfg.fuel)
    except Stuck as e:
        rep["stuck"] = e.reason
        if e.node:
            rep["node"] = e.node
        return BAD_INPUT if e.reason == "conclusion-not-falsified" else INVALID
    rep["steps"] = [f"{m} " + " ".join(f"{k}={v}" for k, v in sorted(r.items()))
                    for m, r in br.steps]
    rep["lasso"] = f"{br.lasso[0]} {br.lasso[1]}" if br.lasso else "none"
    return OK


def _corpus_item(name):
    """(name, ok, detail) for one bundled file."""
    pi = corpus.load(name)
    expected = corpus.ENTRIES[name][1]
    if isinstance(pi, FiniteProof):
        errors = check_proof(pi).errors
        ok = not errors
        detail = "locally correct" if ok else f"{len(errors)} errors"
        if ok and name in corpus.LEVELS:
            out = translate(pi, corpus.LEVELS[name])
            good = check(out).valid
            ok = ok and good
            detail += f"; translated: {'valid' if good else 'invalid'}"
        return name, ok == expected, detail
    v = check(pi)
    detail = "valid" if v.valid else f"invalid, counterexample {v.counterexample}"
    return name, v.valid == expected and (v.valid or v.counterexample is not None), detail


def cmd_corpus(args, cfg, rep):
    if args.action == "list":
        rep["files"] = sorted(corpus.ENTRIES)
        return OK
    if args.action == "write":
        paths = corpus.write_corpus(args.output)
        rep["written"] = [str(p) for p in paths]
        return OK
    names = list(corpus.ENTRIES)
    if cfg.parallelism > 1:
        with ProcessPoolExecutor(cfg.parallelism) as ex:
            results = list(ex.map(_corpus_item, names))
    else:
        results = [_corpus_item(n) for n in names]
    lines, all_ok = [], True
    for name, ok, detail in results:
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        all_ok &= ok
    rep["files"] = lines
    if not args.no_suites:
        from .suites import ACCEPTANCE
        suite_lines = []
        for key, fn in ACCEPTANCE:
            seed = inspect.signature(fn.__wrapped__).parameters.get("seed")
            res = fn(seed=seed.default + cfg.seed) if seed else fn()
            suite_lines.append(f"[{key}] {res.line(timing=False)}")
            all_ok &= res.ok
        rep["suites"] = suite_lines
    rep["result"] = "pass" if all_ok else "fail"
    return OK if all_ok else INVALID


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclarith", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="emit reports as JSON")
    p.add_argument("--fuel", type=int, default=64, help="search bound for unbounded quantifiers")
    p.add_argument("--max-lasso-spoke", type=int, default=3)
    p.add_argument("--max-lasso-loop", type=int, default=4)
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *positional, output=False, level=False):
        q = sub.add_parser(name)
        for arg in positional:
            q.add_argument(arg)
        if output:
            q.add_argument("-o", "--output", help="write to this file instead of stdout")
        if level:
            q.add_argument("--level", type=int, required=True, help="the level n")
        q.set_defaults(fn=fn)
        return q

    add("check", cmd_check, "proof")
    add("translate", cmd_translate, "proof", output=True, level=True)
    add("dualize", cmd_dualize, "proof", output=True, level=True)
    q = add("simulate-ind", cmd_simulate_ind, "spec", output=True)
    q.add_argument("--no-progress", action="store_true", help="build the mutant without progress")
    q.add_argument("--retarget", action="store_true", help="build the mutant with a retargeted bud")
    q = add("complement", cmd_complement, "automaton", output=True)
    q.add_argument("--ramsey", action="store_true", help="use the Ramsey construction for a DBA too")
    add("union", cmd_union, "left", "right", output=True)
    add("empty", cmd_empty, "automaton")
    add("include", cmd_include, "left", "right")
    add("factorize", cmd_factorize, "automaton", "lasso")
    add("universal", cmd_universal, "automaton")
    add("accepts", cmd_accepts, "automaton", "lasso")
    q = add("simulate-branch", cmd_simulate_branch, "proof", "assignment")
    q.add_argument("--steps", type=int, default=100)
    q.add_argument("--map", help="values f(0),f(1),... for proofs over set codes")
    q = add("corpus", cmd_corpus, "action", output=True)
    q.add_argument("--no-suites", action="store_true", help="skip the property suites")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "corpus" and args.action not in ("run", "list", "write"):
        parser.error("corpus actions are: run, list, write")
    cfg = RunConfig(args.fuel, args.max_lasso_spoke, args.max_lasso_loop,
                    getattr(args, "level", 0), args.parallelism, args.seed)
    rep = Report(args.json)
    try:
        code = args.fn(args, cfg, rep)
    except TranslationError as e:
        rep["error"] = f"{e.kind}: {e}"
        code = BREACH if e.kind == "internal" else BAD_INPUT
    except (au.InvariantBreach, CertificateError) as e:
        rep["error"] = f"invariant breach: {e}"
        code = BREACH
    except (InputError, SexprError, au.AutomatonError, au.AlphabetError, OSError, ValueError) as e:
        rep["error"] = str(e)
        code = BAD_INPUT
    if rep.fields:
        rep.emit()
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
