"""Cyclic preproofs, traces, and the automaton-based global correctness check.

A preproof is a finite tree of ``ProofNode``s whose children are node ids
or ``Bud`` back-edges to an ancestor (the companion).  Branches are words
over ``ProofEdge`` letters; the branch automaton accepts the infinite
branches, the trace automaton those carrying an infinitely progressing
trace, and the proof is correct iff the first language is included in the
second.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional

from .automata import DBA, NBA, LassoWord, _sccs, _reach, dba_accepts_lasso, includes, \
    nba_accepts_lasso
from .calculus import EMPTY_THEORY, Sequent, StepError, Theory, check_step
from .syntax import EQ, LT, Atom, apply_subst, free_vars


@dataclass(frozen=True)
class Bud:
    target: str


class ProofEdge(NamedTuple):
    source: str
    index: int

    def __str__(self):
        return f"{self.source}.{self.index}"


@dataclass(frozen=True)
class CyclicPreproof:
    nodes: dict
    root: str
    theory: Theory = EMPTY_THEORY

    @property
    def conclusion(self) -> Sequent:
        return self.nodes[self.root].sequent

    def target(self, e: ProofEdge) -> str:
        k = self.nodes[e.source].children[e.index]
        return k.target if isinstance(k, Bud) else k

    @cached_property
    def edges(self) -> tuple:
        return tuple(ProofEdge(m, i) for m in sorted(self.nodes)
                     for i in range(len(self.nodes[m].children)))

    def buds(self) -> list:
        """(source edge, companion) for every bud."""
        return [(ProofEdge(m, i), k.target) for m in sorted(self.nodes)
                for i, k in enumerate(self.nodes[m].children) if isinstance(k, Bud)]

    def tree_order(self) -> list:
        """Node ids in depth-first order from the root, ignoring buds."""
        out, stack, seen = [], [self.root], set()
        while stack:
            m = stack.pop()
            if m in seen or m not in self.nodes:
                continue
            seen.add(m)
            out.append(m)
            kids = [k for k in self.nodes[m].children if isinstance(k, str)]
            stack.extend(reversed(kids))
        return out

    def tracked(self, m: str) -> frozenset:
        node = self.nodes[m]
        return frozenset(node.sequent.terms()) | node.registered


@dataclass(frozen=True)
class LassoBranch:
    prefix: tuple
    cycle: tuple

    def word(self) -> LassoWord:
        return LassoWord(self.prefix, self.cycle)

    @staticmethod
    def from_word(w: LassoWord) -> "LassoBranch":
        return LassoBranch(tuple(w.spoke), tuple(w.loop))

    def __str__(self):
        return " ".join(map(str, self.prefix)) + " ; " + " ".join(map(str, self.cycle))


# ------------------------------------------------------------ local checks

def check_local(pi: CyclicPreproof, allow_assumptions: bool = False) -> list:
    """All local errors as (node, StepError); empty when locally correct."""
    errors = []
    if pi.root not in pi.nodes:
        return [(pi.root, StepError("structure", "root node missing"))]
    parent = {pi.root: None}
    order = []
    stack = [pi.root]
    while stack:
        m = stack.pop()
        order.append(m)
        for k in pi.nodes[m].children:
            if isinstance(k, Bud):
                continue
            if k not in pi.nodes:
                errors.append((m, StepError("structure", f"unknown child {k}")))
            elif k in parent:
                errors.append((m, StepError("structure", f"node {k} has two parents")))
            else:
                parent[k] = m
                stack.append(k)
    unreached = set(pi.nodes) - set(parent)
    for m in sorted(unreached):
        errors.append((m, StepError("structure", "node not reachable from the root")))
    if errors:
        return errors

    def ancestors(m):
        while m is not None:
            yield m
            m = parent[m]

    for m in order:
        node = pi.nodes[m]
        tag = node.rule.tag
        if tag == "ind":
            errors.append((m, StepError("induction-forbidden", "cyclic proofs use no ind steps")))
            continue
        if tag == "assumption" and not allow_assumptions:
            errors.append((m, StepError("assumption-forbidden", "open assumption in a cyclic proof")))
            continue
        prem = []
        bad = False
        for k in node.children:
            if isinstance(k, Bud):
                if k.target not in pi.nodes or k.target not in set(ancestors(m)):
                    errors.append((m, StepError("bud-mismatch",
                                                f"bud target {k.target} is not below the bud")))
                    bad = True
                    continue
                prem.append(pi.nodes[k.target].sequent)
            else:
                prem.append(pi.nodes[k].sequent)
        if bad:
            continue
        try:
            check_step(node.sequent, node.rule, prem, pi.theory)
        except StepError as e:
            if any(isinstance(k, Bud) for k in node.children):
                # the companion's sequent is not the premiss this step needs
                e = StepError("bud-mismatch", f"companion sequent does not fit ({e})")
            errors.append((m, e))
        clash = {t for t in node.registered if free_vars(t) & node.rule.eigenvariables}
        if clash:
            errors.append((m, StepError("eigenvariable-not-fresh",
                                        "registered term mentions an eigenvariable of the step")))
    return errors


# --------------------------------------------------------------- traces

def precursors(pi: CyclicPreproof, e: ProofEdge, t) -> frozenset:
    node = pi.nodes[e.source]
    rule = node.rule
    if rule.tag == "sub":
        theta = rule.theta
        return frozenset(s for s in pi.tracked(pi.target(e)) if apply_subst(theta, s) == t)
    out = {s.args[0] for s in node.sequent.ante
           if isinstance(s, Atom) and s.pred == EQ and s.args[1] == t}
    if not (free_vars(t) & rule.eigenvariables):
        out.add(t)
    return frozenset(out)


def trace_successors(pi: CyclicPreproof, e: ProofEdge, t) -> frozenset:
    """Pairs (t', progressed) continuing a trace at t across edge e."""
    target = pi.target(e)
    tracked = pi.tracked(target)
    pre = precursors(pi, e, t)
    out = {(s, False) for s in pre if s in tracked}
    for f in pi.nodes[target].sequent.ante:
        if isinstance(f, Atom) and f.pred == LT and f.args[1] in pre:
            out.add((f.args[0], True))
    return frozenset(out)


# ------------------------------------------------------------- automata

SINK = ("sink",)
SCAN = ("scan",)


def branch_automaton(pi: CyclicPreproof) -> DBA:
    states = sorted(pi.nodes) + [SINK]
    trans = set()
    for q in states:
        for e in pi.edges:
            r = pi.target(e) if q != SINK and e.source == q else SINK
            trans.add((q, e, r))
    return DBA(pi.edges, states, trans, pi.root, sorted(pi.nodes))


def trace_automaton(pi: CyclicPreproof, trim: bool = True) -> NBA:
    """States ``scan`` and (node, term, progressed).

    With ``trim``, states that cannot reach a final state on a cycle are
    dropped; this leaves the language unchanged.
    """
    trans = set()
    states = [SCAN]
    for m in sorted(pi.nodes):
        for t in sorted(pi.tracked(m), key=repr):
            states += [(m, t, False), (m, t, True)]
    for e in pi.edges:
        trans.add((SCAN, e, SCAN))
        m2 = pi.target(e)
        for t in pi.tracked(m2):
            trans.add((SCAN, e, (m2, t, False)))
        for t in pi.tracked(e.source):
            for t2, p in trace_successors(pi, e, t):
                for p0 in (False, True):
                    trans.add(((e.source, t, p0), e, (m2, t2, p)))
    finals = [q for q in states if q != SCAN and q[2]]
    if trim:
        states, trans = _trim(states, trans, set(finals))
        finals = [q for q in finals if q in states]
    return NBA(pi.edges, states, trans, SCAN, finals)


def _trim(states, trans, finals):
    succ, pred = {}, {}
    for q, _, r in trans:
        succ.setdefault(q, set()).add(r)
        pred.setdefault(r, set()).add(q)
    live_finals = set()
    for comp in _sccs(states, lambda q: succ.get(q, ())):
        if len(comp) > 1 or comp[0] in succ.get(comp[0], ()):
            live_finals |= {q for q in comp if q in finals}
    useful = set(_reach(live_finals, lambda q: pred.get(q, ())))
    useful.add(SCAN)
    keep = [q for q in states if q in useful]
    return keep, {(q, a, r) for q, a, r in trans if q in useful and r in useful}


# ---------------------------------------------------------------- oracle

class NotABranch(ValueError):
    pass


def _check_branch(pi: CyclicPreproof, w: LassoBranch):
    m = pi.root
    for e in w.prefix:
        if e.source != m:
            raise NotABranch(f"edge {e} does not leave node {m}")
        m = pi.target(e)
    start = m
    for e in w.cycle:
        if e.source != m:
            raise NotABranch(f"edge {e} does not leave node {m}")
        m = pi.target(e)
    if m != start:
        raise NotABranch("the cycle does not return to its first node")
    return start


def oracle_trace_check(pi: CyclicPreproof, w: LassoBranch) -> bool:
    """Does the branch carry an infinitely progressing trace?

    Composes the trace relation once around the cycle, then looks for a
    cycle with a progress edge in the resulting term graph.
    """
    start = _check_branch(pi, w)
    rel = {t: {(t, False)} for t in pi.tracked(start)}
    for e in w.cycle:
        nxt = {}
        for t0, ends in rel.items():
            acc = set()
            for t, p in ends:
                for t2, p2 in trace_successors(pi, e, t):
                    acc.add((t2, p or p2))
            nxt[t0] = acc
        rel = nxt
    succ = {t: {t2 for t2, _ in ends} for t, ends in rel.items()}
    for comp in _sccs(list(succ), lambda t: succ.get(t, ())):
        cs = set(comp)
        for t in comp:
            if any(p and t2 in cs for t2, p in rel.get(t, ())):
                return True
    return False


# ---------------------------------------------------------------- verdict

@dataclass
class Verdict:
    valid: bool
    errors: list = field(default_factory=list)
    counterexample: Optional[LassoBranch] = None

    def __bool__(self):
        return self.valid


class CertificateError(RuntimeError):
    pass


def check(pi: CyclicPreproof) -> Verdict:
    errors = check_local(pi)
    if errors:
        return Verdict(False, errors)
    ab = branch_automaton(pi)
    at = trace_automaton(pi)
    ok, w = includes(ab, at)
    if ok:
        return Verdict(True)
    branch = LassoBranch.from_word(w)
    if not dba_accepts_lasso(ab, w) or nba_accepts_lasso(at, w) or oracle_trace_check(pi, branch):
        raise CertificateError("counterexample failed independent certification")
    return Verdict(False, [], branch)
