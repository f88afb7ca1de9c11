"""Fuel-bounded truth, the Tarski conditions, and falsified branches."""
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cyclarith.builder import Builder, BudRef, to_preproof
from cyclarith.calculus import Sequent
from cyclarith.corpus import PHP_THEORY, load
from cyclarith.oracles import delta0_truth
from cyclarith.semantics import (
    STANDARD, SemanticsError, Stuck, TruthValue, eval_term, generate_branch, models,
    models_sequent, set_code_interpretation, trace_values,
)
from cyclarith.syntax import (
    ZERO, All, And, App, BAll, Ex, Or, Plus, Succ, Times, Var, apply_subst, dual, eq, lt, numeral,
)
from strategies import NAMES, formulas, terms

T, F, U = TruthValue.TRUE, TruthValue.FALSE, TruthValue.UNKNOWN
x, y, t = Var("x"), Var("y"), Var("t")
ONE = Succ(ZERO)

assignments = st.fixed_dictionaries({n: st.integers(0, 3) for n in NAMES})


def test_eval_examples():
    assert eval_term({}, STANDARD, ONE) == 1
    assert eval_term({"x": 2}, STANDARD, Times(x, x)) == 4
    assert eval_term({}, STANDARD, Plus(ONE, ONE)) == 2


def test_eval_missing_variable():
    with pytest.raises(SemanticsError):
        eval_term({}, STANDARD, x)
    with pytest.raises(SemanticsError):
        eval_term({}, STANDARD, App("f", (ZERO,)))


@pytest.mark.parametrize("n", range(5))
def test_bounded_below_successor(n):
    phi = BAll("x", t, lt(x, Succ(t)))
    assert models({"t": n}, STANDARD, phi) is T


def test_unbounded_examples():
    assert models({}, STANDARD, Ex("x", eq(x, ONE)), fuel=10) is T
    for k in (0, 1, 5, 20):
        assert models({}, STANDARD, All("x", Ex("y", lt(x, y))), fuel=k) is U
    assert models({}, STANDARD, All("x", lt(x, numeral(3))), fuel=5) is F


def test_sequent_examples():
    assert models_sequent({"t": 0}, STANDARD, Sequent([], [eq(t, t)])) is T
    assert models_sequent({}, STANDARD, Sequent()) is F


def test_negation_table():
    assert ~T is F and ~F is T and ~U is U


@settings(max_examples=300)
@given(assignments, formulas(bounded_only=True))
def test_bounded_truth_matches_enumerator(rho, phi):
    """Bounded formulas get exact truth values, equal to the brute-force enumerator."""
    want = T if delta0_truth(rho, phi) else F
    assert models(rho, STANDARD, phi) is want
    assert models(rho, STANDARD, dual(phi)) is ~want


def _consistent(a, b):
    return U in (a, b) or a is b


@settings(max_examples=200)
@given(assignments, formulas())
def test_tarski_connectives(rho, phi):
    """Duals flip, and conjunctions and disjunctions decompose, modulo unknown."""
    fuel = 6
    v = models(rho, STANDARD, phi, fuel)
    assert _consistent(models(rho, STANDARD, dual(phi), fuel), ~v)
    if isinstance(phi, (And, Or)):
        parts = [models(rho, STANDARD, g, fuel) for g in (phi.left, phi.right)]
        if isinstance(phi, And):
            expect = F if F in parts else (T if parts == [T, T] else U)
        else:
            expect = T if T in parts else (F if parts == [F, F] else U)
        assert _consistent(v, expect)


@settings(max_examples=200)
@given(assignments, formulas(bounded_only=True), st.sampled_from(NAMES))
def test_tarski_existential(rho, body, var):
    """An unbounded existential is true exactly when some instance within fuel is."""
    fuel = 6
    v = models(rho, STANDARD, Ex(var, body), fuel)
    inst = [models({**rho, var: k}, STANDARD, body, fuel) for k in range(fuel + 1)]
    assert (v is T) == (T in inst)
    w = models(rho, STANDARD, All(var, body), fuel)
    assert (w is F) == (F in inst)


@settings(max_examples=200)
@given(assignments, formulas(bounded_only=True), st.sampled_from(NAMES), terms())
def test_substitution_property(rho, phi, var, s):
    """phi[s/var] under rho is phi under rho updated at var with the value of s."""
    val = eval_term(rho, STANDARD, s)
    assert models(rho, STANDARD, apply_subst({var: s}, phi)) is \
        models({**rho, var: val}, STANDARD, phi)


def test_set_code_axioms_hold():
    """The declared facts about set codes are true in the bit-pattern reading."""
    interp = set_code_interpretation(lambda k: k)
    for name, seq in PHP_THEORY.axioms:
        fv = sorted(seq.free_vars())
        ranges = {"S": range(16), "T": range(16), "y": range(5), "z": range(5)}
        for vals in itertools.product(*(ranges[v] for v in fv)):
            rho = dict(zip(fv, vals))
            assert models_sequent(rho, interp, seq) is T, (name, rho)


# ----------------------------------------------------------------- branches

def sub_loop():
    """=> 0 = 1 from => 0 = x by a substitution, then an identity loop."""
    bld = Builder()
    back = BudRef()
    loop = bld.sub(Sequent((), [eq(ZERO, x)]), {}, back)
    back.target = loop
    return to_preproof(bld.sub(Sequent((), [eq(ZERO, ONE)]), {"x": ONE}, loop))


def test_branch_on_sub_loop():
    pi = sub_loop()
    br = generate_branch(pi, {})
    assert br.lasso is not None
    first, again = br.lasso
    assert br.steps[first][0] == br.steps[again][0]
    assert [rho["x"] for m, rho in br.steps[1:]] == [1] * (len(br.steps) - 1)


def test_branch_on_unsound_corpus_proof():
    """Every visited sequent is false and the lasso is found."""
    pi = load("unsound.cyc")
    br = generate_branch(pi, {}, steps=40, fuel=16)
    assert br.lasso is not None
    for m, rho in br.steps:
        assert models_sequent(rho, STANDARD, pi.nodes[m].sequent, 16) is F


def test_trace_values_drop_once():
    pi = load("unsound.cyc")
    br = generate_branch(pi, {}, steps=40, fuel=16)
    terms_ = {"n0": ONE, "n1": x, "n3": x, "n4": Var("a"), "n5": Var("a")}
    vals = trace_values(br, [terms_[m] for m, _ in br.steps])
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    assert sum(b < a for a, b in zip(vals, vals[1:])) == 1


def test_true_conclusion_rejected():
    pi = load("sim-plus-zero.cyc")
    with pytest.raises(Stuck) as err:
        generate_branch(pi, {"x": 3})
    assert err.value.reason == "conclusion-not-falsified"
