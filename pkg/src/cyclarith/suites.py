"""Seeded property suites over the automata, the checker and the semantics.

Each suite returns a ``SuiteResult``; the acceptance tests and the
``corpus run`` command both go through here.
"""
from __future__ import annotations

import functools
import random
import time
from dataclasses import dataclass

from . import automata as au
from . import oracles as orc
from .calculus import FragmentError, validate_fragment
from .cyclic import Bud, CyclicPreproof, check, oracle_trace_check, trace_successors, ProofEdge
from .semantics import (
    STANDARD, TruthValue, eval_term, generate_branch, models, models_sequent, trace_values,
)
from .syntax import ZERO, Ex, Succ, Var, apply_subst, dual


@dataclass
class SuiteResult:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def line(self, timing: bool = True) -> str:
        tail = f" ({self.seconds:.1f}s)" if timing else ""
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.detail}{tail}"


def _timed(name):
    def wrap(fn):
        def run(*args, **kw):
            t0 = time.perf_counter()
            ok, detail = fn(*args, **kw)
            return SuiteResult(name, ok, detail, time.perf_counter() - t0)
        return functools.wraps(fn)(run)
    return wrap


def _entries(m: au.TransitionMatrix) -> dict:
    return {k: ("inf" if v == au.INF else v) for k, v in m.entries.items()}


# ------------------------------------------------------------- automata

@_timed("nba-complement")
def nba_complement_exact(seed=1, count=300, max_states=4, max_spoke=3, max_loop=4):
    """Ramsey complement membership is the exact negation on bounded lassos."""
    rng = random.Random(seed)
    words = list(orc.all_lassos(("a", "b"), max_spoke, max_loop))
    bad = 0
    for _ in range(count):
        a = orc.random_nba(rng, rng.randint(1, max_states))
        comp = au.nba_complement(a).materialize()
        for w in words:
            if au.nba_accepts_lasso(comp, w) == orc.accepts_by_unrolling(a, w):
                bad += 1
    return bad == 0, f"{count} automata x {len(words)} lassos, {bad} mismatches"


@_timed("dba-complement")
def dba_complement_exact(seed=2, count=300, max_states=6, max_spoke=3, max_loop=4):
    """DBA complement: exact negation and 2|Q| - |F| states."""
    rng = random.Random(seed)
    words = list(orc.all_lassos(("a", "b"), max_spoke, max_loop))
    bad = size_bad = 0
    for _ in range(count):
        a = orc.random_dba(rng, rng.randint(1, max_states))
        comp = au.dba_complement(a)
        if len(comp.states) != 2 * len(a.states) - len(a.finals):
            size_bad += 1
        for w in words:
            if au.nba_accepts_lasso(comp, w) == orc.accepts_by_unrolling(a, w):
                bad += 1
    return bad == 0 and size_bad == 0, f"{bad} membership mismatches, {size_bad} size mismatches"


@_timed("homomorphism")
def matrix_homomorphism(seed=3, automata=20, pairs=1000, max_len=6):
    """delta(s t) = delta(s) delta(t), and delta agrees with direct simulation."""
    rng = random.Random(seed)
    bad = 0
    for _ in range(automata):
        a = orc.random_nba(rng, rng.randint(1, 4))
        for _ in range(pairs):
            s = [rng.choice(a.alphabet) for _ in range(rng.randint(0, max_len))]
            t = [rng.choice(a.alphabet) for _ in range(rng.randint(0, max_len))]
            whole = au.transition_matrix(a, s + t)
            if whole != au.matrix_product(au.transition_matrix(a, s), au.transition_matrix(a, t)):
                bad += 1
            elif _entries(whole) != orc.matrix_entries(a, s + t):
                bad += 1
    return bad == 0, f"{automata * pairs} word pairs, {bad} violations"


@_timed("factorisation")
def ramsey_factorisation(seed=4, count=500, checks=4):
    """Factorisations are idempotent, consistent and decide rejection."""
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        a = orc.random_nba(rng, rng.randint(1, 4))
        w = orc.random_lasso(rng, a.alphabet)
        beta, gamma, i0, stride = au.ramsey_factorize_lasso(a, w)
        ok = au.matrix_product(beta, gamma) == beta and au.matrix_product(gamma, gamma) == gamma
        ok = ok and au.transition_matrix(a, w.prefix(i0)) == beta
        marks = [i0 + stride * k for k in range(checks)]
        for i in marks:
            for j in marks:
                if i < j and au.transition_matrix(a, w.prefix(j)[i:]) != gamma:
                    ok = False
        ok = ok and au.is_rejecting_pair(a, beta, gamma) == (not orc.accepts_by_unrolling(a, w))
        bad += not ok
    return bad == 0, f"{count} (automaton, lasso) pairs, {bad} violations"


@_timed("union-empty-include")
def union_empty_include(seed=5, count=100, max_spoke=3, max_loop=4):
    """Union is disjunction; emptiness witnesses and inclusion counterexamples verify."""
    rng = random.Random(seed)
    words = list(orc.all_lassos(("a", "b"), max_spoke, max_loop))
    problems = []
    for i in range(count):
        a1 = orc.random_nba(rng, rng.randint(1, 4))
        a2 = orc.random_nba(rng, rng.randint(1, 4))
        u = au.union(a1, a2)
        for w in words:
            if au.nba_accepts_lasso(u, w) != (orc.accepts_by_unrolling(a1, w) or
                                              orc.accepts_by_unrolling(a2, w)):
                problems.append(f"union {i}")
                break
        is_empty, wit = au.empty(a1)
        if not is_empty and not (au.nba_accepts_lasso(a1, wit) and orc.accepts_by_unrolling(a1, wit)):
            problems.append(f"witness {i}")
        if is_empty and any(orc.accepts_by_unrolling(a1, w) for w in words):
            problems.append(f"empty {i}")
        d1 = orc.random_dba(rng, rng.randint(1, 4))
        d2 = orc.random_dba(rng, rng.randint(1, 4))
        for right in (d2, a2):
            inc, cex = au.includes(d1, right)
            if inc != au.includes_via_complement(d1, right)[0]:
                problems.append(f"routes {i}")
            if not inc and not (au.dba_accepts_lasso(d1, cex) and orc.accepts_by_unrolling(d1, cex)
                                and not au.nba_accepts_lasso(right, cex)
                                and not orc.accepts_by_unrolling(right, cex)):
                problems.append(f"counterexample {i}")
            if inc and any(orc.accepts_by_unrolling(d1, w) and not orc.accepts_by_unrolling(right, w)
                           for w in words):
                problems.append(f"missed {i}")
        if not au.includes(d1, d1)[0]:
            problems.append(f"reflexive {i}")
    return not problems, f"{count} rounds, problems: {problems[:5] or 'none'}"


@_timed("ar-acc")
def ar_acc(seed=9, count=500):
    """Acceptance implies the arithmetical surrogate, and conversely."""
    rng = random.Random(seed)
    forward = converse = 0
    sampled = 0
    while sampled < count:
        a = orc.random_nba(rng, rng.randint(1, 4))
        w = orc.random_lasso(rng, a.alphabet)
        acc = au.nba_accepts_lasso(a, w)
        if not acc:
            continue
        sampled += 1
        forward += not au.ar_acc_lasso(a, w)
    rng = random.Random(seed + 1)
    for _ in range(count):
        a = orc.random_nba(rng, rng.randint(1, 4))
        w = orc.random_lasso(rng, a.alphabet)
        if au.ar_acc_lasso(a, w) and not orc.accepts_by_unrolling(a, w):
            converse += 1
    return forward == 0 and converse == 0, \
        f"{count} accepted samples: {forward} violations; converse: {converse} violations"


@_timed("dra-universality")
def dra_universality(seed=10, count=200, max_states=5):
    """Universality agrees with exhaustive lasso acceptance up to |Q|."""
    rng = random.Random(seed)
    bad = universal = 0
    for _ in range(count):
        n = rng.randint(1, max_states)
        a = orc.random_dra(rng, n, colours=rng.choice([2, 3, 4]))
        got = au.dra_universal(a)
        universal += got
        bad += got != orc.dra_accepts_all_bounded(a, n)
    return bad == 0, f"{count} automata ({universal} universal), {bad} mismatches"


# --------------------------------------------------------------- proofs

def _verify_invalid(pi: CyclicPreproof):
    v = check(pi)
    if v.valid or v.counterexample is None:
        return False
    return not oracle_trace_check(pi, v.counterexample)


@_timed("corpus-proofs")
def corpus_proofs(limit_seconds=60.0):
    """Simulations and pipeline outputs are valid, sigma-n only; mutants fail with certificates."""
    from . import corpus
    problems, worst = [], 0.0
    levels = {"sim-plus-zero": 0, "sim-times-zero": 0, "plus-zero-translated": 0,
              "le-plus-translated": 1}
    for stem, n in levels.items():
        t0 = time.perf_counter()
        pi = corpus.load(stem + ".cyc")
        if pi != corpus.build(stem + ".cyc"):
            problems.append(f"{stem}: file differs from a fresh build")
        if not check(pi).valid:
            problems.append(f"{stem}: invalid")
        try:
            validate_fragment(pi, n, "all-sigma")
        except FragmentError as e:
            problems.append(f"{stem}: {e}")
        for suffix in ("-broken", "-retarget"):
            if not _verify_invalid(corpus.load(stem + suffix + ".cyc")):
                problems.append(f"{stem}{suffix}: not refuted")
        worst = max(worst, time.perf_counter() - t0)
    if worst > limit_seconds:
        problems.append(f"slowest proof took {worst:.1f}s")
    return not problems, f"4 proofs valid, 8 mutants refuted; problems: {problems or 'none'}"


def companion_edges(pi: CyclicPreproof):
    """(companion, edges into it) for the node every bud points to."""
    targets = {c for _, c in pi.buds()}
    if len(targets) != 1:
        return None, []
    (c,) = targets
    edges = [ProofEdge(m, i) for m in sorted(pi.nodes)
             for i, k in enumerate(pi.nodes[m].children)
             if (k.target if isinstance(k, Bud) else k) == c]
    return c, edges


@_timed("php")
def php_corpus(limit_seconds=60.0):
    """The pigeonhole proof parses, checks, and has three edges into its companion."""
    from . import corpus
    t0 = time.perf_counter()
    pi = corpus.load("php.cyc")
    ok = check(pi).valid
    comp, edges = companion_edges(pi)
    buds = [e for e in edges if isinstance(pi.nodes[e.source].children[e.index], Bud)]
    took = time.perf_counter() - t0
    broken = _verify_invalid(corpus.load("php-broken.cyc"))
    good = ok and len(edges) == 3 and len(buds) == 2 and broken and took < limit_seconds
    return good, (f"valid={ok}, edges into companion {comp}: {len(edges)} ({len(buds)} buds), "
                  f"broken refuted={broken}, within {limit_seconds:.0f}s={took < limit_seconds}")


# ------------------------------------------------------------- semantics

def _decisive_agree(x: TruthValue, y: TruthValue) -> bool:
    unknown = TruthValue.UNKNOWN
    return x is unknown or y is unknown or x is y


@_timed("tarski")
def tarski(seed=8, count=2000, fuel=12):
    """models matches brute force on bounded formulas; the truth conditions hold."""
    rng = random.Random(seed)
    names = ["x", "y"]
    bad_eval = bad_cond = 0
    for _ in range(count):
        phi = orc.random_delta0(rng, names)
        rho = {v: rng.randint(0, 4) for v in names}
        got = models(rho, STANDARD, phi, fuel)
        if got is TruthValue.UNKNOWN or (got is TruthValue.TRUE) != orc.delta0_truth(rho, phi):
            bad_eval += 1
        if models(rho, STANDARD, dual(phi), fuel) is got:
            bad_cond += 1
        # substitution: phi[t/x] under rho equals phi under rho[x := value of t]
        t = orc.random_term(rng, names, 1)
        shifted = {**rho, "x": eval_term(rho, STANDARD, t)}
        if models(rho, STANDARD, apply_subst({"x": t}, phi), fuel) is not models(shifted, STANDARD, phi, fuel):
            bad_cond += 1
    for _ in range(count // 4):
        mk = orc.random_sigma1 if rng.random() < 0.5 else orc.random_pi1
        phi = mk(rng, names)
        rho = {v: rng.randint(0, 3) for v in names}
        whole = models(rho, STANDARD, phi, fuel)
        parts = [models({**rho, "w": k}, STANDARD, phi.body, fuel) for k in range(fuel + 1)]
        if isinstance(phi, Ex):
            expect = TruthValue.TRUE if TruthValue.TRUE in parts else TruthValue.UNKNOWN
        else:
            expect = TruthValue.FALSE if TruthValue.FALSE in parts else TruthValue.UNKNOWN
        if not _decisive_agree(whole, expect) or whole is not expect:
            bad_cond += 1
        if not _decisive_agree(whole, ~models(rho, STANDARD, dual(phi), fuel)):
            bad_cond += 1
    return bad_eval == 0 and bad_cond == 0, \
        f"{count} bounded instances: {bad_eval} evaluation mismatches, {bad_cond} condition violations"


# the hand-supplied trace along the unsound preproof: 1, then x, then the
# eigenvariable a below x
UNSOUND_TRACE = {"n0": Succ(ZERO), "n1": Var("x"), "n3": Var("x"), "n4": Var("a"), "n5": Var("a")}


def _progress_flags(pi, branch, terms):
    """Per step: None if the trace breaks there, else whether it progresses."""
    flags = []
    for i in range(1, len(branch.steps)):
        src, dst = branch.steps[i - 1][0], branch.steps[i][0]
        edge = next(ProofEdge(src, j) for j, k in enumerate(pi.nodes[src].children)
                    if (k.target if isinstance(k, Bud) else k) == dst)
        hits = [p for t, p in trace_successors(pi, edge, terms[i - 1]) if t == terms[i]]
        flags.append(any(hits) if hits else None)
    return flags


@_timed("branch-generator")
def branch_generator(steps=50, fuel=16):
    """On the unsound preproof the generated branch loops, stays false, and the trace drops only at progress."""
    from . import corpus
    pi = corpus.load("unsound.cyc")
    br = generate_branch(pi, {}, STANDARD, steps, fuel)
    problems = []
    if br.lasso is None:
        problems.append("no lasso")
    for m, rho in br.steps:
        s = pi.nodes[m].sequent
        truth = any(not orc.delta0_truth(rho, f) for f in s.ante) or \
            any(orc.delta0_truth(rho, f) for f in s.succ)
        if truth or models_sequent(rho, STANDARD, s, fuel) is not TruthValue.FALSE:
            problems.append(f"{m} not falsified")
    terms = [UNSOUND_TRACE[m] for m, _ in br.steps]
    flags = _progress_flags(pi, br, terms)
    if None in flags:
        return False, f"trace breaks at step {flags.index(None)}"
    vals = trace_values(br, terms)
    for i, p in enumerate(flags):
        if p and not vals[i + 1] < vals[i]:
            problems.append(f"no drop at progress step {i}")
        if not p and vals[i + 1] != vals[i]:
            problems.append(f"unexpected change at step {i}")
    return not problems, f"branch {[m for m, _ in br.steps]}, lasso {br.lasso}, trace values {vals}; " \
                         f"problems: {problems or 'none'}"


ACCEPTANCE = [
    ("1", nba_complement_exact),
    ("2", dba_complement_exact),
    ("3", matrix_homomorphism),
    ("4", ramsey_factorisation),
    ("5", union_empty_include),
    ("6", corpus_proofs),
    ("7", php_corpus),
    ("8", tarski),
    ("9", ar_acc),
    ("10", dra_universality),
    ("11", branch_generator),
]
