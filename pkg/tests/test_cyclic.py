"""Local checks, traces, the two automata and the global checker."""
import itertools

import pytest

from cyclarith.automata import LassoWord, dba_accepts_lasso, nba_accepts_lasso
from cyclarith.calculus import ProofNode, Rule, Sequent
from cyclarith.corpus import ENTRIES, build, simulation
from cyclarith.cyclic import (
    SINK, Bud, CyclicPreproof, LassoBranch, NotABranch, ProofEdge, branch_automaton, check,
    check_local, oracle_trace_check, precursors, trace_automaton, trace_successors,
)
from cyclarith.syntax import ZERO, Succ, Var, eq, lt

x, y, a, b = Var("x"), Var("y"), Var("a"), Var("b")
TOP = Sequent([], [eq(ZERO, ZERO)])


def identity_ring(k):
    """k identity substitutions in a row, the last one budding to the first."""
    nodes = {}
    for i in range(k):
        kid = f"n{i + 1}" if i + 1 < k else Bud("n0")
        nodes[f"n{i}"] = ProofNode(TOP, Rule("sub", subst={}), (kid,))
    return CyclicPreproof(nodes, "n0")


def renaming_loop():
    """=> x = x and => y = y substitute into each other forever."""
    nodes = {
        "n0": ProofNode(Sequent([], [eq(x, x)]), Rule("sub", subst={"y": x}), ("n1",)),
        "n1": ProofNode(Sequent([], [eq(y, y)]), Rule("sub", subst={"x": y}), (Bud("n0"),)),
    }
    return CyclicPreproof(nodes, "n0")


def branches(pi, max_prefix=6, max_cycle=12):
    """Lasso branches from the root with bounded prefix and cycle."""
    out = []

    def paths(m, n):
        yield m, ()
        if n == 0:
            return
        for i in range(len(pi.nodes[m].children)):
            e = ProofEdge(m, i)
            for end, rest in paths(pi.target(e), n - 1):
                yield end, (e,) + rest

    for start, prefix in paths(pi.root, max_prefix):
        for end, cyc in paths(start, max_cycle):
            simple = len(set(cyc)) == len(cyc) or len(cyc) <= 4
            if cyc and end == start and simple:
                out.append(LassoBranch(prefix, cyc))
    return out


# ------------------------------------------------------------ local checks

def test_simulation_locally_correct():
    assert check_local(simulation("plus-zero")) == []


def test_bud_mismatch():
    """A companion whose sequent gains a formula no longer fits its bud."""
    pi = simulation("plus-zero")
    (edge, comp), = pi.buds()
    node = pi.nodes[comp]
    nodes = dict(pi.nodes)
    nodes[comp] = ProofNode(node.sequent.add(succ=[lt(ZERO, ZERO)]), node.rule, node.children,
                            node.registered)
    kinds = {(m, e.kind) for m, e in check_local(CyclicPreproof(nodes, pi.root))}
    assert (edge.source, "bud-mismatch") in kinds


def test_bud_target_must_be_below():
    nodes = {
        "n0": ProofNode(TOP, Rule("cut", formula=eq(ZERO, ZERO)), ("n1", "n2")),
        "n1": ProofNode(TOP.add(succ=[eq(ZERO, ZERO)]), Rule("eq1")),
        "n2": ProofNode(TOP.add(ante=[eq(ZERO, ZERO)]), Rule("wk"), (Bud("n1"),)),
    }
    errs = check_local(CyclicPreproof(nodes, "n0"))
    assert [(m, e.kind) for m, e in errs] == [("n2", "bud-mismatch")]


def test_induction_forbidden():
    phi = eq(x, x)
    nodes = {
        "n0": ProofNode(Sequent([], [eq(y, y)]), Rule("ind", formula=phi, var="x", eigen="a", term=y),
                        ("n1", "n2")),
        "n1": ProofNode(Sequent([], [eq(y, y), eq(ZERO, ZERO)]), Rule("eq1")),
        "n2": ProofNode(Sequent([eq(a, a)], [eq(y, y), eq(Succ(a), Succ(a))]), Rule("eq1")),
    }
    errs = check_local(CyclicPreproof(nodes, "n0"))
    assert ("n0", "induction-forbidden") in [(m, e.kind) for m, e in errs]


# ------------------------------------------------------------------ traces

def test_precursors_identity_step():
    pi = identity_ring(1)
    assert ZERO in precursors(pi, ProofEdge("n0", 0), ZERO)


def test_precursors_substitution():
    """At a substitution step a precursor is a preimage among the premiss terms."""
    nodes = {
        "n0": ProofNode(Sequent([], [eq(Succ(b), Succ(b))]), Rule("sub", subst={"a": Succ(b)}), ("n1",)),
        "n1": ProofNode(Sequent([], [eq(a, a)]), Rule("eq1")),
    }
    pi = CyclicPreproof(nodes, "n0")
    assert precursors(pi, ProofEdge("n0", 0), Succ(b)) == {a}


def test_precursors_equation_in_antecedent():
    s = Sequent([eq(y, x)], [lt(x, Succ(x))])
    nodes = {"n0": ProofNode(s, Rule("wk"), ("n1",)), "n1": ProofNode(s, Rule("q-axiom", index="8b"))}
    pi = CyclicPreproof(nodes, "n0")
    assert y in precursors(pi, ProofEdge("n0", 0), x)


def test_trace_progresses_into_less_than():
    """Entering the premiss with a < b, a trace at b continues at a with progress."""
    pi = simulation("plus-zero")
    (e,) = [e for e in pi.edges if pi.nodes[e.source].rule.tag == "bex-left"]
    (bound,) = [f.args[1] for f in pi.nodes[pi.target(e)].sequent.ante
                if f == lt(a, getattr(f, "args", (None, None))[1])]
    assert (a, True) in trace_successors(pi, e, bound)


def test_trace_plain_step():
    pi = identity_ring(1)
    assert trace_successors(pi, ProofEdge("n0", 0), ZERO) == {(ZERO, False)}


# ---------------------------------------------------------------- automata

def test_branch_automaton_single_axiom():
    pi = CyclicPreproof({"n0": ProofNode(TOP, Rule("eq1"))}, "n0")
    ab = branch_automaton(pi)
    assert set(ab.states) == {"n0", SINK}
    assert ab.alphabet == ()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_branch_automaton_ring(k):
    """A ring of k steps: the accepted lassos are exactly its rotations."""
    pi = identity_ring(k)
    ab = branch_automaton(pi)
    assert len(ab.states) == len(pi.nodes) + 1
    ring = [ProofEdge(f"n{i}", 0) for i in range(k)]
    accepted = set()
    for nu in range(k + 1):
        for u in itertools.product(ring, repeat=nu):
            for v in itertools.product(ring, repeat=k):
                if nba_accepts_lasso(ab, LassoWord(u, v)):
                    accepted.add((u, v))
    expect = {(tuple(ring[:j]), tuple(ring[j:] + ring[:j])) for j in range(k)}
    expect.add((tuple(ring), tuple(ring)))
    assert accepted == expect


def test_trace_automaton_accepts_simulation_cycle():
    pi = simulation("plus-zero")
    (w,) = [w for w in branches(pi, 8, 40) if len(set(w.cycle)) == len(w.cycle)][:1]
    assert nba_accepts_lasso(trace_automaton(pi), w.word())
    assert oracle_trace_check(pi, w)


def test_no_progress_rejected():
    for pi in (identity_ring(2), renaming_loop()):
        w = LassoBranch((), tuple(ProofEdge(m, 0) for m in sorted(pi.nodes)))
        assert dba_accepts_lasso(branch_automaton(pi), w.word())
        assert not nba_accepts_lasso(trace_automaton(pi), w.word())
        assert not oracle_trace_check(pi, w)


def test_oracle_rejects_non_branch():
    pi = identity_ring(2)
    with pytest.raises(NotABranch):
        oracle_trace_check(pi, LassoBranch((), (ProofEdge("n1", 0),)))


# ------------------------------------------------------------------- check

def test_check_simulation_valid():
    assert check(simulation("plus-zero")).valid


def test_check_without_progress_invalid():
    """Dropping the progress atom leaves a certified counterexample around the bud."""
    pi = simulation("plus-zero", progress=False)
    v = check(pi)
    assert not v.valid and v.errors == []
    w = v.counterexample
    (edge, _), = pi.buds()
    assert edge in w.cycle
    assert dba_accepts_lasso(branch_automaton(pi), w.word())
    assert not nba_accepts_lasso(trace_automaton(pi), w.word())
    assert not oracle_trace_check(pi, w)


def test_check_php_valid():
    assert check(build("php.cyc")).valid


def test_check_reports_local_errors():
    """A broken step is reported instead of a counterexample."""
    nodes = {"n0": ProofNode(TOP, Rule("sub", subst={"x": ZERO}), (Bud("n0"),))}
    assert check(CyclicPreproof(nodes, "n0")).valid is False
    v = check(CyclicPreproof({"n0": ProofNode(TOP, Rule("wk"), ())}, "n0"))
    assert not v.valid and v.errors and v.counterexample is None
    v = check(identity_ring(1))
    assert not v.valid and not v.errors and v.counterexample is not None


SMALL = [n for n in ENTRIES if n.endswith(".cyc") and not n.startswith("php")]


@pytest.mark.parametrize("name", SMALL)
def test_trace_automaton_agrees_with_oracle(name):
    """On every short branch, the trace automaton and the oracle agree; valid
    proofs pass the oracle on all of them."""
    pi = build(name)
    at = trace_automaton(pi)
    valid = ENTRIES[name][1]
    ws = branches(pi, len(pi.nodes), 40)
    assert ws
    for w in ws:
        verdict = oracle_trace_check(pi, w)
        assert nba_accepts_lasso(at, w.word()) == verdict
        if valid:
            assert verdict
